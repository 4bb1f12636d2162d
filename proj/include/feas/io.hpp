#pragma once

#include <string>
#include <vector>

#include "feas/diagnostics.hpp"
#include "feas/flux.hpp"
#include "feas/ineq.hpp"
#include "feas/snapshot.hpp"
#include "feas/timestepper.hpp"

namespace feas::io {

/// Complete run description, parsed from key = value sections.
struct SimConfig {
    double alpha = 1.0;
    std::uint64_t seed = 1;
    int ndims = 1;
    int n1 = 128;
    int n2 = 128;
    ICRecipe ic;
    SchemeSpec scheme;
    std::vector<double> p_list{2.0, 4.0};
    std::vector<int> q_list{1, 2};
    std::vector<int> flux_q_list;
    std::string out_dir = "out";

    Grid grid() const;
};

/// Parse and validate a configuration; errors carry the offending line.
SimConfig parse_config(const std::string& text);
SimConfig parse_config_file(const std::string& path);

/// Fixed-schema CSV of the diagnostics series, 17 significant digits, LF
/// line endings, locale-independent '.' decimal point.
void write_timeseries(const std::vector<DiagnosticsRecord>& records,
                      const std::vector<double>& p_list, const std::vector<int>& q_list,
                      const std::string& path);

struct TimeseriesData {
    std::vector<DiagnosticsRecord> records;
    std::vector<double> p_list;
    std::vector<int> q_list;
};

TimeseriesData read_timeseries(const std::string& path);

/// Budget CSV: t, Q, E_Q, flux_int, eps_Q, residual, flags.
void write_budget(const std::vector<flux::BudgetSeries>& series, const std::string& path);

struct IneqRow {
    ineq::BoxSweep sweep;
    ineq::FqCertificate cert;
    bool ok = true;
};

/// Certification CSV: q, box, resolution, min, argmin, C_q, status.
void write_ineq_report(const std::vector<IneqRow>& rows, const std::string& path);

/// Run directory helpers used by simulate / analyze / flux.
std::string snapshot_name(int index);
Trajectory load_run(const std::string& dir);

} // namespace feas::io
