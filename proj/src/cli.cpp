#include "feas/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "feas/errors.hpp"
#include "feas/io.hpp"

namespace feas {

namespace {

namespace fs = std::filesystem;

State build_initial_state(const io::SimConfig& cfg) {
    return model::make_initial_data(cfg.ic, cfg.grid(), cfg.alpha);
}

int run_gen_ic(const std::string& config_path, const std::string& out_path) {
    const io::SimConfig cfg = io::parse_config_file(config_path);
    const State s0 = build_initial_state(cfg);
    io::write_snapshot(s0, cfg.alpha, out_path);
    std::cout << "wrote " << out_path << " (min rho = " << s0.rho.min() << ")\n";
    return 0;
}

int run_simulate(const std::string& config_path, const std::string& ic_path,
                 const std::string& out_dir_override) {
    io::SimConfig cfg = io::parse_config_file(config_path);
    if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
    State s0 = ic_path.empty() ? build_initial_state(cfg) : io::read_snapshot(ic_path);
    if (!ic_path.empty() && !(s0.rho.grid() == cfg.grid()))
        throw ParameterError("--ic snapshot grid does not match config grid");
    if (cfg.alpha < 1.0)
        std::cerr << "note: alpha < 1 is outside the theory covered by the diagnostics "
                     "(supercritical run)\n";

    fs::create_directories(cfg.out_dir);
    const Trajectory traj = timestepper::integrate(s0, cfg.alpha, cfg.scheme);

    Trajectory recorded = traj;
    diag::DiagnosticsConfig dcfg;
    dcfg.p_list = cfg.p_list;
    dcfg.q_list = cfg.q_list;
    diag::compute_records(recorded, dcfg);
    for (std::size_t i = 0; i < recorded.snapshots.size(); ++i)
        io::write_snapshot(recorded.snapshots[i], cfg.alpha,
                           (fs::path(cfg.out_dir) / io::snapshot_name(static_cast<int>(i))).string());
    io::write_timeseries(recorded.records, cfg.p_list, cfg.q_list,
                         (fs::path(cfg.out_dir) / "timeseries.csv").string());

    if (!cfg.flux_q_list.empty()) {
        std::vector<flux::BudgetSeries> series;
        for (int Q : cfg.flux_q_list) series.push_back(flux::budget_closure(recorded, Q));
        io::write_budget(series, (fs::path(cfg.out_dir) / "budget.csv").string());
    }

    std::cout << "recorded " << recorded.snapshots.size() << " snapshots to " << cfg.out_dir
              << "\n";
    if (traj.blew_up) {
        std::cerr << "blow-up at t = " << traj.blowup_time << ": " << traj.blowup_reason
                  << " (partial outputs retained)\n";
        return 3;
    }
    return 0;
}

void report_row(std::ofstream& os, const std::string& metric, double value, bool ok) {
    os << metric << ',' << value << ',' << (ok ? "ok" : "violated") << "\n";
}

int run_analyze(const std::string& run_dir, const std::string& report_path,
                std::vector<double> p_list, std::vector<int> q_list) {
    Trajectory traj = io::load_run(run_dir);
    diag::DiagnosticsConfig dcfg;
    dcfg.p_list = p_list;
    dcfg.q_list = q_list;
    diag::compute_records(traj, dcfg);

    std::ofstream os(report_path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open report for writing: " + report_path);
    os << "metric,value,status\n";

    const diag::EnvelopeReport env = diag::check_envelopes(traj);
    report_row(os, "envelope_worst_excess", env.worst_excess, env.contained);
    const diag::EntropyReport ent = diag::entropy_conservation(traj);
    report_row(os, "entropy_q0_inf", ent.q0_inf, true);
    report_row(os, "entropy_max_rel_drift", ent.max_rel_drift, ent.max_rel_drift <= 1e-3);
    report_row(os, "uniform_entropy_bound", ent.uniform_entropy_ok ? 1.0 : 0.0,
               ent.uniform_entropy_ok);

    const diag::EnergyResiduals res = diag::energy_residuals(traj);
    double max_rho = 0.0, max_kin = 0.0;
    for (double v : res.res_rho) max_rho = std::max(max_rho, std::abs(v));
    for (double v : res.res_kinetic) max_kin = std::max(max_kin, std::abs(v));
    const double ekin0 = traj.records.front().energy_kin;
    report_row(os, "energy_res_rho_max", max_rho, true);
    report_row(os, "energy_res_kinetic_max", max_kin,
               ekin0 > 0.0 ? max_kin <= 1e-3 * ekin0 : true);

    if (traj.snapshots.size() >= 20) {
        const diag::FlockMetrics fm = diag::flock_metrics(traj);
        report_row(os, "flock_align_rate", fm.align_rate, fm.align_rate < 0.0);
        report_row(os, "flock_align_r2", fm.align_r2, fm.align_r2 >= 0.95);
        report_row(os, "flock_grad_rate", fm.grad_rate, fm.grad_rate < 0.0);
        report_row(os, "flock_moving_frame_residual_final",
                   fm.moving_frame_residual.empty() ? 0.0 : fm.moving_frame_residual.back(), true);
    }

    // Gronwall comparison: |rho - m|_{2q}^{2q} against the recorded envelope.
    for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
        const int q = q_list[qi];
        bool applicable = true, contained = true;
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.records.size(); ++i) {
            const double env_q = traj.records[i].gronwall[qi];
            if (env_q < 0.0) {
                applicable = false;
                break;
            }
            const double dev =
                std::pow(diag::lp_deviation(traj.snapshots[i].rho, 2.0 * q), 2.0 * q);
            worst = std::max(worst, dev - env_q);
            contained = contained && dev <= env_q + 1e-6;
        }
        const std::string name = "gronwall_q" + std::to_string(q);
        if (!applicable)
            report_row(os, name + "_inapplicable", 1.0, true);
        else
            report_row(os, name + "_worst_excess", worst, contained);
    }
    std::cout << "wrote " << report_path << "\n";
    return 0;
}

int run_flux(const std::string& run_dir, const std::vector<int>& q_list,
             const std::string& out_path) {
    Trajectory traj = io::load_run(run_dir);
    std::vector<flux::BudgetSeries> series;
    for (int Q : q_list) series.push_back(flux::budget_closure(traj, Q));
    const std::string path =
        out_path.empty() ? (fs::path(run_dir) / "budget.csv").string() : out_path;
    io::write_budget(series, path);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run_ineq(int q_max, double rho_min, double rho_max, double m, int resolution,
             const std::string& report_path) {
    if (q_max < 1) throw ParameterError("--q-max must be >= 1");
    if (!(rho_min > 0.0) || !(rho_max >= rho_min))
        throw ParameterError("need 0 < rho-min <= rho-max");
    std::vector<io::IneqRow> rows;
    bool all_ok = true;
    for (int q = 1; q <= q_max; ++q) {
        io::IneqRow row;
        row.sweep = ineq::BoxSweep::standard(q, rho_min, rho_max, m, resolution);
        try {
            row.cert = ineq::certify_fq_min(row.sweep);
            row.ok = row.cert.positive;
        } catch (const CertificationError& e) {
            std::cerr << e.what() << "\n";
            row.ok = false;
        }
        all_ok = all_ok && row.ok;
        rows.push_back(row);
        std::cout << "q = " << q << "  min = " << row.cert.min_value << "  C(q) = "
                  << row.cert.C_q << "  " << (row.ok ? "ok" : "FAILED") << "\n";
    }
    io::write_ineq_report(rows, report_path);
    return all_ok ? 0 : 2;
}

} // namespace

int cli_dispatch(int argc, const char* const* argv) {
    CLI::App app{"pseudo-spectral simulator for the unidirectional fractional "
                 "Euler alignment system on the torus"};
    app.require_subcommand(1);

    std::string config_path, out_path, ic_path, run_dir, report_path, out_dir;
    std::vector<int> q_list{1, 2};
    std::vector<double> p_list{2.0, 4.0};
    int q_max = 2, resolution = 501;
    double rho_min = 0.5, rho_max = 2.0, m = 1.0;

    CLI::App* gen = app.add_subcommand("gen-ic", "generate an initial-condition snapshot");
    gen->add_option("--config", config_path, "run configuration")->required();
    gen->add_option("--out", out_path, "snapshot path")->required();

    CLI::App* sim = app.add_subcommand("simulate", "integrate a configured run");
    sim->add_option("--config", config_path, "run configuration")->required();
    sim->add_option("--ic", ic_path, "initial snapshot overriding the recipe");
    sim->add_option("--out-dir", out_dir, "output directory (overrides config)");

    CLI::App* ana = app.add_subcommand("analyze", "diagnostics report for a recorded run");
    ana->add_option("--run", run_dir, "run directory")->required();
    ana->add_option("--report", report_path, "report CSV path")->required();
    ana->add_option("--p-list", p_list, "L^p deviation exponents");
    ana->add_option("--q-list", q_list, "Gronwall q values");

    CLI::App* flx = app.add_subcommand("flux", "Littlewood-Paley energy budget of a run");
    flx->add_option("--run", run_dir, "run directory")->required();
    flx->add_option("--q-list", q_list, "budget block indices Q")->delimiter(',');
    flx->add_option("--out", out_path, "budget CSV path (default <run>/budget.csv)");

    CLI::App* inq = app.add_subcommand("ineq", "certify the f_q lower bounds");
    inq->add_option("--q-max", q_max, "largest q to certify");
    inq->add_option("--rho-min", rho_min, "density lower bound")->required();
    inq->add_option("--rho-max", rho_max, "density upper bound")->required();
    inq->add_option("--m", m, "uniform density level")->required();
    inq->add_option("--resolution", resolution, "sweep points per axis");
    inq->add_option("--report", report_path, "report CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) return run_gen_ic(config_path, out_path);
        if (sim->parsed()) return run_simulate(config_path, ic_path, out_dir);
        if (ana->parsed()) return run_analyze(run_dir, report_path, p_list, q_list);
        if (flx->parsed()) return run_flux(run_dir, q_list, out_path);
        if (inq->parsed())
            return run_ineq(q_max, rho_min, rho_max, m, resolution,
                            report_path.empty() ? "ineq_report.csv" : report_path);
    } catch (const BlowUpError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace feas
