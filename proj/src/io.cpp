#include "feas/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "feas/errors.hpp"

namespace feas::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawEntry {
    std::string value;
    int line;
};

struct RawConfig {
    std::map<std::string, RawEntry> entries; // key "section.name"
    std::map<std::string, int> consumed;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParameterError("config line " + std::to_string(line) + ": " + msg);
}

RawConfig lex_config(const std::string& text) {
    RawConfig raw;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail(lineno, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (auto it = raw.entries.find(full); it != raw.entries.end())
            fail(lineno, "duplicate key '" + full + "' (first set on line " +
                             std::to_string(it->second.line) + ")");
        raw.entries.emplace(full, RawEntry{value, lineno});
    }
    return raw;
}

class ConfigReader {
  public:
    explicit ConfigReader(RawConfig raw) : raw_(std::move(raw)) {}

    bool has(const std::string& key) const { return raw_.entries.count(key) > 0; }

    int line_of(const std::string& key) const { return raw_.entries.at(key).line; }

    template <typename T>
    T get(const std::string& key, T fallback) {
        auto it = raw_.entries.find(key);
        if (it == raw_.entries.end()) return fallback;
        seen_.insert(key);
        return convert<T>(it->second.value, it->second.line, key);
    }

    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) {
        auto it = raw_.entries.find(key);
        if (it == raw_.entries.end()) return fallback;
        seen_.insert(key);
        std::vector<double> out;
        std::istringstream is(it->second.value);
        std::string tok;
        while (std::getline(is, tok, ','))
            out.push_back(convert<double>(trim(tok), it->second.line, key));
        return out;
    }

    void finish() const {
        for (const auto& [key, entry] : raw_.entries)
            if (!seen_.count(key)) fail(entry.line, "unknown key '" + key + "'");
    }

  private:
    template <typename T>
    static T convert(const std::string& s, int line, const std::string& key) {
        if constexpr (std::is_same_v<T, std::string>) {
            return s;
        } else {
            try {
                std::size_t pos = 0;
                if constexpr (std::is_same_v<T, double>) {
                    const double v = std::stod(s, &pos);
                    if (pos != s.size()) throw std::invalid_argument(s);
                    return v;
                } else {
                    const long v = std::stol(s, &pos);
                    if (pos != s.size()) throw std::invalid_argument(s);
                    return v;
                }
            } catch (const std::exception&) {
                fail(line, std::string("expected a ") +
                               (std::is_same_v<T, double> ? "number" : "integer") + " for '" +
                               key + "', got '" + s + "'");
            }
        }
    }

    RawConfig raw_;
    std::set<std::string> seen_;
};

void constraint(bool ok, const ConfigReader& r, const std::string& key, const std::string& msg) {
    if (ok) return;
    if (r.has(key)) fail(r.line_of(key), msg);
    throw ParameterError("config: " + msg);
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw IoError("bad numeric field '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(tok);
    return out;
}

std::string p_column_suffix(double p) {
    if (p == std::floor(p)) return std::to_string(static_cast<long>(p));
    return format_double(p);
}

} // namespace

Grid SimConfig::grid() const {
    return ndims == 1 ? Grid::line(n1) : Grid::plane(n1, n2);
}

SimConfig parse_config(const std::string& text) {
    ConfigReader r(lex_config(text));
    SimConfig cfg;

    cfg.alpha = r.get<double>("alpha", 1.0);
    constraint(cfg.alpha > 0.0 && cfg.alpha <= 2.0, r, "alpha", "alpha in (0,2]");
    cfg.seed = static_cast<std::uint64_t>(r.get<long>("seed", 1));

    cfg.ndims = static_cast<int>(r.get<long>("grid.ndims", 1));
    constraint(cfg.ndims == 1 || cfg.ndims == 2, r, "grid.ndims", "ndims must be 1 or 2");
    cfg.n1 = static_cast<int>(r.get<long>("grid.n1", 128));
    cfg.n2 = static_cast<int>(r.get<long>("grid.n2", 128));
    auto pow2 = [](int n) { return n >= 8 && (n & (n - 1)) == 0; };
    constraint(pow2(cfg.n1), r, "grid.n1", "grid sizes must be powers of two >= 8");
    constraint(cfg.ndims == 1 || pow2(cfg.n2), r, "grid.n2",
               "grid sizes must be powers of two >= 8");

    const std::string method = r.get<std::string>("scheme.method", "ssprk3");
    if (method == "ssprk3")
        cfg.scheme.method = SchemeSpec::Method::ssp_rk3;
    else if (method == "rk4")
        cfg.scheme.method = SchemeSpec::Method::rk4;
    else
        constraint(false, r, "scheme.method", "method must be ssprk3 or rk4");
    cfg.scheme.cfl_safety = r.get<double>("scheme.cfl_safety", 0.5);
    constraint(cfg.scheme.cfl_safety > 0.0 && cfg.scheme.cfl_safety <= 1.0, r,
               "scheme.cfl_safety", "cfl_safety in (0,1]");
    cfg.scheme.dt_max = r.get<double>("scheme.dt_max", 1e-2);
    constraint(cfg.scheme.dt_max > 0.0, r, "scheme.dt_max", "dt_max must be positive");
    cfg.scheme.t_end = r.get<double>("scheme.t_end", 1.0);
    constraint(cfg.scheme.t_end >= 0.0, r, "scheme.t_end", "t_end must be nonnegative");
    cfg.scheme.record_every = static_cast<int>(r.get<long>("scheme.record_every", 1));
    constraint(cfg.scheme.record_every >= 1, r, "scheme.record_every",
               "record_every must be >= 1");

    const std::string ic_type = r.get<std::string>("ic.type", "trig_polynomial");
    if (ic_type == "trig_polynomial")
        cfg.ic.kind = ICRecipe::Kind::trig_polynomial;
    else if (ic_type == "null_entropy")
        cfg.ic.kind = ICRecipe::Kind::null_entropy;
    else if (ic_type == "snapshot")
        cfg.ic.kind = ICRecipe::Kind::snapshot;
    else
        constraint(false, r, "ic.type",
                   "ic type must be trig_polynomial, null_entropy or snapshot");
    cfg.ic.seed = cfg.seed;
    cfg.ic.n_modes = static_cast<int>(r.get<long>("ic.n_modes", 4));
    constraint(cfg.ic.n_modes >= 1, r, "ic.n_modes", "n_modes must be >= 1");
    cfg.ic.rho_floor = r.get<double>("ic.rho_floor", 0.5);
    constraint(cfg.ic.rho_floor > 0.0, r, "ic.rho_floor", "rho_floor must be positive");
    cfg.ic.amplitude = r.get<double>("ic.amplitude", 0.3);
    constraint(cfg.ic.amplitude >= 0.0, r, "ic.amplitude", "amplitude must be nonnegative");
    cfg.ic.ubar = r.get<double>("ic.ubar", 0.0);
    cfg.ic.e0_amplitude = r.get<double>("ic.e0_amplitude", 0.0);
    cfg.ic.snapshot_path = r.get<std::string>("ic.path", "");
    constraint(cfg.ic.kind != ICRecipe::Kind::snapshot || !cfg.ic.snapshot_path.empty(), r,
               "ic.type", "ic type snapshot requires ic.path");

    cfg.p_list = r.get_list("diagnostics.p_list", {2.0, 4.0});
    for (double p : cfg.p_list)
        constraint(p >= 1.0, r, "diagnostics.p_list", "p_list entries must be >= 1");
    {
        std::vector<double> qs = r.get_list("diagnostics.q_list", {1.0, 2.0});
        cfg.q_list.clear();
        for (double q : qs) {
            constraint(q >= 1.0 && q == std::floor(q), r, "diagnostics.q_list",
                       "q_list entries must be integers >= 1");
            cfg.q_list.push_back(static_cast<int>(q));
        }
    }
    {
        std::vector<double> fq = r.get_list("diagnostics.flux_q_list", {});
        cfg.flux_q_list.clear();
        for (double q : fq) {
            constraint(q >= -1.0 && q == std::floor(q), r, "diagnostics.flux_q_list",
                       "flux_q_list entries must be integers >= -1");
            cfg.flux_q_list.push_back(static_cast<int>(q));
        }
    }

    cfg.out_dir = r.get<std::string>("output.directory", "out");
    if (r.has("output.cadence")) {
        cfg.scheme.record_every = static_cast<int>(r.get<long>("output.cadence", 1));
        constraint(cfg.scheme.record_every >= 1, r, "output.cadence", "cadence must be >= 1");
    }

    r.finish();
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return parse_config(os.str());
}

void write_timeseries(const std::vector<DiagnosticsRecord>& records,
                      const std::vector<double>& p_list, const std::vector<int>& q_list,
                      const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open timeseries for writing: " + path);
    os << "t,rho_min,rho_max,amplitude,q_inf,e_inf,grad_u_inf,grad_rho_inf,"
          "energy_rho,energy_kin,diss_rho,diss_u,env_lower,env_upper";
    for (double p : p_list) os << ",lp_dev_p" << p_column_suffix(p);
    for (int q : q_list) os << ",gronwall_q" << q;
    os << "\n";
    for (const DiagnosticsRecord& r : records) {
        os << format_double(r.t) << ',' << format_double(r.rho_min) << ','
           << format_double(r.rho_max) << ',' << format_double(r.amplitude) << ','
           << format_double(r.q_inf) << ',' << format_double(r.e_inf) << ','
           << format_double(r.grad_u_inf) << ',' << format_double(r.grad_rho_inf) << ','
           << format_double(r.energy_rho) << ',' << format_double(r.energy_kin) << ','
           << format_double(r.diss_rho) << ',' << format_double(r.diss_u) << ','
           << format_double(r.env_lower) << ',' << format_double(r.env_upper);
        for (double v : r.lp_dev) os << ',' << format_double(v);
        for (double v : r.gronwall) os << ',' << format_double(v);
        os << "\n";
    }
    if (!os) throw IoError("short write: " + path);
}

TimeseriesData read_timeseries(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open timeseries: " + path);
    std::string header;
    if (!std::getline(is, header)) throw IoError("empty timeseries: " + path);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const std::vector<std::string> cols = split(header, ',');
    TimeseriesData data;
    for (const std::string& c : cols) {
        if (c.rfind("lp_dev_p", 0) == 0) data.p_list.push_back(parse_double(c.substr(8)));
        if (c.rfind("gronwall_q", 0) == 0)
            data.q_list.push_back(static_cast<int>(parse_double(c.substr(10))));
    }
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != cols.size()) throw IoError("ragged timeseries row in " + path);
        DiagnosticsRecord r;
        std::size_t i = 0;
        r.t = parse_double(f[i++]);
        r.rho_min = parse_double(f[i++]);
        r.rho_max = parse_double(f[i++]);
        r.amplitude = parse_double(f[i++]);
        r.q_inf = parse_double(f[i++]);
        r.e_inf = parse_double(f[i++]);
        r.grad_u_inf = parse_double(f[i++]);
        r.grad_rho_inf = parse_double(f[i++]);
        r.energy_rho = parse_double(f[i++]);
        r.energy_kin = parse_double(f[i++]);
        r.diss_rho = parse_double(f[i++]);
        r.diss_u = parse_double(f[i++]);
        r.env_lower = parse_double(f[i++]);
        r.env_upper = parse_double(f[i++]);
        for (std::size_t k = 0; k < data.p_list.size(); ++k) r.lp_dev.push_back(parse_double(f[i++]));
        for (std::size_t k = 0; k < data.q_list.size(); ++k) r.gronwall.push_back(parse_double(f[i++]));
        data.records.push_back(std::move(r));
    }
    return data;
}

void write_budget(const std::vector<flux::BudgetSeries>& series, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open budget for writing: " + path);
    os << "t,Q,E_Q,flux_int,eps_Q,residual,flags\n";
    for (const flux::BudgetSeries& b : series) {
        for (std::size_t i = 0; i < b.t.size(); ++i) {
            os << format_double(b.t[i]) << ',' << b.Q << ',' << format_double(b.E_Q[i]) << ','
               << format_double(b.flux_int[i]) << ',' << format_double(b.eps_Q[i]) << ','
               << format_double(b.residual[i]) << ',' << (b.vacuum[i] ? 1 : 0) << "\n";
        }
    }
    if (!os) throw IoError("short write: " + path);
}

void write_ineq_report(const std::vector<IneqRow>& rows, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open report for writing: " + path);
    os << "q,box_lo,box_hi,resolution,min,argmin_x,argmin_y,C_q,status\n";
    for (const IneqRow& r : rows) {
        os << r.sweep.q << ',' << format_double(r.sweep.x_lo) << ','
           << format_double(r.sweep.x_hi) << ',' << r.sweep.resolution << ','
           << format_double(r.cert.min_value) << ',' << format_double(r.cert.arg_x) << ','
           << format_double(r.cert.arg_y) << ',' << format_double(r.cert.C_q) << ','
           << (r.ok && r.cert.positive ? "ok" : "failed") << "\n";
    }
    if (!os) throw IoError("short write: " + path);
}

std::string snapshot_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06d.feas", index);
    return buf;
}

Trajectory load_run(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    if (!fs::is_directory(dir)) throw IoError("run directory not found: " + dir);
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("snap_", 0) == 0 && e.path().extension() == ".feas")
            files.push_back(e.path());
    }
    if (files.empty()) throw IoError("no snapshots in run directory: " + dir);
    std::sort(files.begin(), files.end());
    Trajectory traj;
    for (const fs::path& p : files) {
        SnapshotData snap = read_snapshot_full(p.string());
        traj.alpha = snap.alpha;
        traj.snapshots.push_back(std::move(snap.state));
    }
    return traj;
}

} // namespace feas::io
