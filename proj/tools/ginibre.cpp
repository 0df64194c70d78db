// Command-line front end: density, moments, kernels, jpdf, mutual
// information, Monte Carlo sampling, limit laws and the validation suite.
//
// Exit codes: 0 ok, 1 check failed, 2 usage, 3 outside the supported
// parameter envelope, 4 file I/O, 5 numerical failure.

#include "ginibre/csv.hpp"
#include "ginibre/density.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/kernels.hpp"
#include "ginibre/montecarlo.hpp"
#include "ginibre/telecom.hpp"
#include "ginibre/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace fs = std::filesystem;
using namespace ginibre;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kEnvelope = 3, kIo = 4, kNumerical = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- tables

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::string command;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_csv(const Table& t, std::ostream& os) {
    os << "# ginibre " << t.command << " schema=" << csv::kSchemaVersion;
    for (const auto& [k, v] : t.meta) os << " " << k << "=" << v;
    os << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) os << csv::num(v);
                    else if constexpr (std::is_same_v<V, long long>) os << v;
                    else if constexpr (std::is_same_v<V, std::string>) os << csv_field(v);
                },
                row[i]);
        }
        os << "\n";
    }
}

void write_json(const Table& t, std::ostream& os) {
    nlohmann::ordered_json j;
    j["command"] = t.command;
    j["schema"] = csv::kSchemaVersion;
    for (const auto& [k, v] : t.meta) j["meta"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, std::monostate>) r[t.columns[i]] = nullptr;
                    else if constexpr (std::is_same_v<V, double>) {
                        // JSON has no inf/nan; keep them as strings
                        if (std::isfinite(v)) r[t.columns[i]] = v;
                        else r[t.columns[i]] = csv::num(v);
                    } else r[t.columns[i]] = v;
                },
                row[i]);
        }
        j["rows"].push_back(std::move(r));
    }
    os << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- options

struct Common {
    int N = 0;
    int M = 0;
    std::string output;
    std::string format = "csv";
    unsigned workers = 1;
    double rel_tol = QuadratureConfig{}.rel_tol;
    double abs_tol = QuadratureConfig{}.abs_tol;
    int max_subdivisions = QuadratureConfig{}.max_subdivisions;

    QuadratureConfig cfg() const {
        QuadratureConfig c;
        c.rel_tol = rel_tol;
        c.abs_tol = abs_tol;
        c.max_subdivisions = max_subdivisions;
        c.validate();
        return c;
    }
};

void add_common(CLI::App* sub, Common& c, bool with_n = true) {
    if (with_n) sub->add_option("--N", c.N, "matrix dimension");
    sub->add_option("--M", c.M, "number of factors");
    sub->add_option("-o,--output", c.output,
                    "output file ('-' for stdout); relative paths resolve under $GINIBRE_OUTPUT_DIR");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");
    sub->add_option("--abs-tol", c.abs_tol, "absolute quadrature tolerance");
    sub->add_option("--max-subdivisions", c.max_subdivisions, "bisection depth of adaptive quadrature");
}

EnsembleParams require_params(const Common& c, int max_n, int max_m, bool two_matrix = false) {
    if (c.N == 0 || c.M == 0) throw UsageError("--N and --M are required");
    const EnsembleParams p{c.N, c.M};
    p.validate(two_matrix);
    if (p.N > max_n || p.M > max_m) {
        throw DomainError("N=" + std::to_string(p.N) + ", M=" + std::to_string(p.M) +
                          " outside the supported range N <= " + std::to_string(max_n) +
                          ", M <= " + std::to_string(max_m));
    }
    return p;
}

struct Grid {
    double lo = 0.0, hi = 0.0;
    int points = 0;
    bool log = false;

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
            v[i] = log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
        }
        if (points > 1) v.back() = hi;
        return v;
    }
};

Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3 && parts.size() != 4) throw UsageError("--grid expects min:max:points[:lin|log]");
    Grid g;
    try {
        g.lo = std::stod(parts[0]);
        g.hi = std::stod(parts[1]);
        g.points = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw UsageError("--grid: cannot parse '" + text + "'");
    }
    if (parts.size() == 4) {
        if (parts[3] == "log") g.log = true;
        else if (parts[3] != "lin") throw UsageError("--grid scale must be lin or log");
    }
    if (!(g.lo > 0.0) || !(g.hi >= g.lo) || !std::isfinite(g.hi)) throw DomainError("--grid needs 0 < min <= max");
    if (g.points < 1 || g.points > 1000000) throw DomainError("--grid points must be in [1, 1e6]");
    return g;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv::num(v[i]);
    return s;
}

void emit(const Common& c, const Table& t, const std::string& default_name) {
    const char* env = std::getenv("GINIBRE_OUTPUT_DIR");
    std::optional<fs::path> path;
    if (c.output == "-") {
    } else if (!c.output.empty()) {
        path = fs::path(c.output);
        if (path->is_relative() && env && *env) path = fs::path(env) / *path;
    } else if (env && *env) {
        path = fs::path(env) / (default_name + "." + c.format);
    }
    if (!path) {
        c.format == "json" ? write_json(t, std::cout) : write_csv(t, std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("writing to stdout failed");
        return;
    }
    std::error_code ec;
    if (path->has_parent_path()) fs::create_directories(path->parent_path(), ec);
    std::ofstream os(*path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path->string() + " for writing");
    c.format == "json" ? write_json(t, os) : write_csv(t, os);
    os.close();
    if (!os) throw IoError("writing " + path->string() + " failed");
    std::cerr << "wrote " << path->string() << "\n";
}

Table start(const std::string& command, const EnsembleParams& p) {
    Table t;
    t.command = command;
    t.meta = {{"N", std::to_string(p.N)}, {"M", std::to_string(p.M)}};
    return t;
}

// ---------------------------------------------------------------- commands

struct DensityArgs {
    std::string grid;
    bool rescaled = false;
    std::string preset;
};

Table fig1(const Common& c, const DensityArgs& a) {
    const Grid g = parse_grid(a.grid.empty() ? "0.02:40:400:lin" : a.grid);
    Table t;
    t.command = "density";
    t.meta = {{"preset", "fig1"}, {"N", "4"}, {"M", "1;2;3"}};
    t.columns = {"s", "r1_M1", "r1_M2", "r1_M3"};
    const auto grid = g.values();
    std::vector<DensityCurve> curves;
    for (int M = 1; M <= 3; ++M) curves.push_back(density_curve({4, M}, grid, false, c.cfg(), c.workers));
    for (std::size_t i = 0; i < grid.size(); ++i)
        t.rows.push_back({grid[i], curves[0].values[i], curves[1].values[i], curves[2].values[i]});
    return t;
}

Table fig2(const Common& c, const DensityArgs& a) {
    const Grid g = parse_grid(a.grid.empty() ? "0.01:7:400:lin" : a.grid);
    const std::vector<int> ns = {3, 4, 5, 10};
    Table t;
    t.command = "density";
    t.meta = {{"preset", "fig2"}, {"N", "3;4;5;10"}, {"M", "1;2"}, {"rescaled", "1"}};
    t.columns = {"x"};
    const auto grid = g.values();
    std::vector<std::vector<double>> cols;
    for (int M : {1, 2}) {
        for (int N : ns) {
            t.columns.push_back("M" + std::to_string(M) + "_N" + std::to_string(N));
            cols.push_back(density_curve({N, M}, grid, true, c.cfg(), c.workers).values);
        }
        t.columns.push_back(M == 1 ? "mp" : "limit_M2");
        std::vector<double> lim;
        for (double x : grid) lim.push_back(M == 1 ? mp_density(x) : limit_density_m2(x));
        cols.push_back(std::move(lim));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid[i]};
        for (const auto& col : cols) row.emplace_back(col[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

int run_density(const Common& c, const DensityArgs& a) {
    if (a.preset == "fig1") return emit(c, fig1(c, a), "fig1"), kOk;
    if (a.preset == "fig2") return emit(c, fig2(c, a), "fig2"), kOk;
    if (!a.preset.empty()) throw UsageError("density presets are fig1 and fig2");
    const EnsembleParams p = require_params(c, kMaxExactN, kMaxExactM);
    if (a.grid.empty()) throw UsageError("--grid is required");
    const Grid g = parse_grid(a.grid);
    const DensityCurve curve = density_curve(p, g.values(), a.rescaled, c.cfg(), c.workers);
    Table t = start("density", p);
    t.meta.emplace_back("rescaled", a.rescaled ? "1" : "0");
    t.columns = a.rescaled ? std::vector<std::string>{"x", "density"} : std::vector<std::string>{"s", "r1"};
    for (std::size_t i = 0; i < curve.grid.size(); ++i) t.rows.push_back({curve.grid[i], curve.values[i]});
    emit(c, t, "density");
    return kOk;
}

struct MomentsArgs {
    std::vector<int> k = {0, 1, 2, 3, 4};
    bool numeric = false;
    int mc_trials = 0;
    std::uint64_t seed = 1;
};

int run_moments(const Common& c, const MomentsArgs& a) {
    const EnsembleParams p = require_params(c, kMaxExactN, kMaxExactM);
    for (int k : a.k)
        if (k < 0 || k > 20) throw DomainError("--k values must be in [0, 20]");
    if (a.mc_trials < 0) throw DomainError("--mc-trials must be >= 0");
    for (int k : a.k)
        if (a.mc_trials > 0 && k > 6) throw DomainError("Monte Carlo moments need k <= 6");
    std::optional<SampleBatch> batch;
    if (a.mc_trials > 0) batch = sample_squared_singular_values(p, a.mc_trials, a.seed, c.workers);
    Table t = start("moments", p);
    t.columns = {"k", "exact", "closed"};
    if (a.numeric) t.columns.insert(t.columns.end(), {"numeric", "numeric_abs_error"});
    if (batch) {
        t.meta.emplace_back("mc_trials", std::to_string(a.mc_trials));
        t.meta.emplace_back("seed", std::to_string(a.seed));
        t.columns.insert(t.columns.end(), {"mc_mean", "mc_stderr"});
    }
    for (int k : a.k) {
        std::vector<Cell> row{static_cast<long long>(k), moment_exact(p, k).str(), moment_closed(p, k)};
        if (a.numeric) {
            const MomentEstimate e = moment_numeric(p, k, c.cfg());
            row.emplace_back(e.value);
            row.emplace_back(e.abs_error);
        }
        if (batch) {
            const MeanEstimate e = estimate_moment(*batch, k);
            row.emplace_back(e.mean);
            row.emplace_back(e.stderr_);
        }
        t.rows.push_back(std::move(row));
    }
    emit(c, t, "moments");
    return kOk;
}

struct KernelArgs {
    std::string which = "H01";
    std::vector<double> first, second;
};

int run_kernel(const Common& c, const KernelArgs& a) {
    const bool two = a.which != "K";
    const EnsembleParams p = require_params(c, kMaxExactN, kMaxExactM, two);
    if (a.first.empty() || a.second.empty()) throw UsageError("--first and --second are required");
    const QuadratureConfig cfg = c.cfg();
    Table t = start("kernel", p);
    t.meta.emplace_back("which", a.which);
    t.columns = {"first", "second", "value"};
    for (double x : a.first)
        for (double y : a.second) {
            double v = 0.0;
            if (a.which == "K") v = kernel_K(p, x, y);
            else if (a.which == "H00") v = kernel_H00(p, x, y);
            else if (a.which == "H01") v = kernel_H01(p, x, y, cfg);
            else if (a.which == "H10") v = kernel_H10(p, x, y);
            else v = kernel_H11(p, x, y, cfg);
            t.rows.push_back({x, y, v});
        }
    emit(c, t, "kernel_" + a.which);
    return kOk;
}

struct JpdfArgs {
    std::vector<double> points;
    std::vector<double> t_points;
    bool correlation = false;
};

int run_jpdf(const Common& c, const JpdfArgs& a) {
    const EnsembleParams p = require_params(c, kMaxExactN, kMaxExactM, !a.t_points.empty());
    const QuadratureConfig cfg = c.cfg();
    Table t = start("jpdf", p);
    t.meta.emplace_back("points", fmt_list(a.points));
    if (a.correlation || !a.t_points.empty()) {
        if (a.points.size() > static_cast<std::size_t>(p.N) || a.t_points.size() > static_cast<std::size_t>(p.N))
            throw DomainError("at most N points of each kind");
        if (a.points.empty()) throw UsageError("--points is required");
        double v;
        if (a.t_points.empty()) {
            v = correlation_rk(p, a.points, cfg);
        } else {
            t.meta.emplace_back("t_points", fmt_list(a.t_points));
            v = correlation_rkl({p, a.points, a.t_points}, cfg);
        }
        t.columns = {"k", "l", "value"};
        t.rows.push_back({static_cast<long long>(a.points.size()), static_cast<long long>(a.t_points.size()), v});
    } else {
        if (a.points.size() != static_cast<std::size_t>(p.N)) throw UsageError("--points needs exactly N values");
        const JpdfCrossCheck x = jpdf_cross_check(p, a.points, cfg);
        t.columns = {"value", "sign", "log_abs", "vandermonde_route_value", "rel_diff", "ill_conditioned"};
        t.rows.push_back({x.kernel_route.value.value(), x.kernel_route.value.sign, x.kernel_route.value.log_abs,
                          x.vandermonde_route.value.value(), x.rel_diff,
                          static_cast<long long>(x.kernel_route.ill_conditioned)});
    }
    emit(c, t, "jpdf");
    return kOk;
}

struct MiArgs {
    std::vector<double> gamma_db = {0.0, 5.0, 10.0, 15.0, 20.0};
    int mc_trials = 0;
    std::uint64_t seed = 1;
    bool bits = false;
    std::string preset;
};

int run_mi(const Common& c, MiArgs a) {
    std::vector<int> ns;
    int M = c.M;
    if (a.preset == "fig3") {
        ns = {2, 4, 8};
        M = 3;
        if (a.gamma_db == MiArgs{}.gamma_db) {
            a.gamma_db.clear();
            for (int d = 0; d <= 30; d += 2) a.gamma_db.push_back(d);
        }
    } else if (!a.preset.empty()) {
        throw UsageError("the mi preset is fig3");
    } else {
        ns = {require_params(c, kMaxMutualInformationN, kMaxMutualInformationM).N};
    }
    if (a.gamma_db.empty()) throw UsageError("--gamma-db needs at least one value");
    if (a.mc_trials < 0) throw DomainError("--mc-trials must be >= 0");
    for (double g : a.gamma_db)
        if (!std::isfinite(g) || g < -100.0 || g > 100.0) throw DomainError("--gamma-db values must be in [-100, 100]");
    const double unit = a.bits ? 1.0 / std::numbers::ln2 : 1.0;
    QuadratureConfig cfg = mutual_information_config();
    cfg.max_subdivisions = std::max(cfg.max_subdivisions, c.max_subdivisions);

    Table t;
    t.command = "mi";
    t.meta = {{"N", [&] {
                   std::string s;
                   for (std::size_t i = 0; i < ns.size(); ++i) s += (i ? ";" : "") + std::to_string(ns[i]);
                   return s;
               }()},
              {"M", std::to_string(M)},
              {"unit", a.bits ? "bits" : "nats"}};
    if (!a.preset.empty()) t.meta.emplace_back("preset", a.preset);
    if (a.mc_trials > 0) {
        t.meta.emplace_back("mc_trials", std::to_string(a.mc_trials));
        t.meta.emplace_back("seed", std::to_string(a.seed));
    }
    t.columns = {"gamma_db"};
    for (int N : ns) {
        const std::string sfx = ns.size() > 1 ? "_N" + std::to_string(N) : "";
        for (const char* col : {"mi_analytic", "mi_mc_mean", "mi_mc_stderr"}) t.columns.push_back(col + sfx);
    }
    t.rows.assign(a.gamma_db.size(), {});
    for (std::size_t r = 0; r < a.gamma_db.size(); ++r) t.rows[r].emplace_back(a.gamma_db[r]);

    bool failed = false;
    for (int N : ns) {
        const EnsembleParams p{N, M};
        const auto sweep = mi_sweep({p, a.gamma_db}, cfg);
        std::optional<SampleBatch> batch;
        if (a.mc_trials > 0) {
            batch = sample_squared_singular_values(p, a.mc_trials, a.seed, c.workers);
            for (const auto& w : batch->warnings) std::cerr << "warning: " << w << "\n";
        }
        for (std::size_t r = 0; r < sweep.size(); ++r) {
            auto& row = t.rows[r];
            if (sweep[r].mi) {
                row.emplace_back(*sweep[r].mi * unit);
            } else {
                row.emplace_back(std::monostate{});
                std::cerr << "error: N=" << N << " gamma_db=" << a.gamma_db[r] << ": " << sweep[r].error << "\n";
                failed = true;
            }
            if (batch) {
                const MIEstimate e = estimate_mutual_information(*batch, a.gamma_db[r]);
                row.emplace_back(e.mean * unit);
                row.emplace_back(e.stderr_ * unit);
            } else {
                row.emplace_back(std::monostate{});
                row.emplace_back(std::monostate{});
            }
        }
    }
    emit(c, t, a.preset.empty() ? "mi" : a.preset);
    return failed ? kNumerical : kOk;
}

struct SimulateArgs {
    int trials = 1000;
    std::uint64_t seed = 1;
};

int run_simulate(const Common& c, const SimulateArgs& a) {
    const EnsembleParams p = require_params(c, 64, 64);
    if (a.trials < 1 || a.trials > 100000000) throw DomainError("--trials must be in [1, 1e8]");
    const SampleBatch batch = sample_squared_singular_values(p, a.trials, a.seed, c.workers);
    for (const auto& w : batch.warnings) std::cerr << "warning: " << w << "\n";
    if (batch.retried_trials > 0) std::cerr << "note: " << batch.retried_trials << " trials were redrawn\n";
    Table t = start("simulate", p);
    t.meta.emplace_back("trials", std::to_string(a.trials));
    t.meta.emplace_back("seed", std::to_string(a.seed));
    t.columns = {"trial"};
    for (int i = 1; i <= p.N; ++i) t.columns.push_back("s_" + std::to_string(i));
    for (int r = 0; r < batch.trials; ++r) {
        std::vector<Cell> row{static_cast<long long>(r)};
        for (double s : batch.row(r)) row.emplace_back(s);
        t.rows.push_back(std::move(row));
    }
    emit(c, t, "simulate");
    return kOk;
}

struct LimitArgs {
    std::string grid;
    double eps = kResolventEps;
    std::string method = "auto";
};

int run_limit(const Common& c, const LimitArgs& a) {
    if (c.M < 1 || c.M > 6) throw DomainError("--M must be in [1, 6]");
    if (!(a.eps > 0.0) || a.eps > 1e-2) throw DomainError("--eps must be in (0, 1e-2]");
    const double S = limit_support_upper(c.M);
    const Grid g = parse_grid(a.grid.empty() ? "0.01:" + csv::num(S) + ":400:lin" : a.grid);
    std::string method = a.method;
    if (method == "auto") method = c.M == 1 ? "mp" : c.M == 2 ? "cubic" : "general";
    if ((method == "mp" && c.M != 1) || (method == "cubic" && c.M != 2))
        throw UsageError("--method " + method + " needs M = " + (method == "mp" ? "1" : "2"));
    Table t;
    t.command = "limit";
    t.meta = {{"M", std::to_string(c.M)}, {"method", method}, {"eps", csv::num(a.eps)}, {"support", csv::num(S)}};
    t.columns = {"x", "density"};
    for (double x : g.values()) {
        double v;
        if (method == "mp") v = mp_density(x);
        else if (method == "cubic") v = limit_density_m2(x, a.eps);
        else v = limit_density_general(c.M, x, a.eps);
        t.rows.push_back({x, v});
    }
    emit(c, t, "limit");
    return kOk;
}

struct ValidateArgs {
    int mc_trials = 100000;
    std::uint64_t seed = 20140601;
    bool no_mc = false;
};

int run_validate(const Common& c, const ValidateArgs& a) {
    validation::Options opt;
    opt.cfg = c.cfg();
    opt.mc_trials = a.mc_trials;
    opt.seed = a.seed;
    opt.workers = c.workers;
    opt.monte_carlo = !a.no_mc;
    if (opt.mc_trials < 100) throw DomainError("--mc-trials must be >= 100");
    const auto results = validation::run_all(opt);
    Table t;
    t.command = "validate";
    t.meta = {{"mc_trials", std::to_string(a.mc_trials)}, {"seed", std::to_string(a.seed)}};
    t.columns = {"check", "passed", "worst_error", "tolerance", "seconds", "detail"};
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        std::fprintf(stderr, "%s  %-34s worst %-10.3g tol %-8.3g %7.2fs  %s\n", r.passed ? "PASS" : "FAIL",
                     r.name.c_str(), r.worst_error, r.tolerance, r.seconds, r.detail.c_str());
        t.rows.push_back({r.name, static_cast<long long>(r.passed), r.worst_error, r.tolerance, r.seconds, r.detail});
    }
    std::fprintf(stderr, "%s\n", all ? "all checks passed" : "some checks FAILED");
    if (!c.output.empty() || std::getenv("GINIBRE_OUTPUT_DIR")) emit(c, t, "validate");
    return all ? kOk : kFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singular-value statistics of products of complex Gaussian matrices"};
    app.require_subcommand(1);

    Common common;

    DensityArgs density;
    auto* c_density = app.add_subcommand("density", "finite-N density R1 on a grid");
    add_common(c_density, common);
    c_density->add_option("--grid", density.grid, "min:max:points[:lin|log]");
    c_density->add_flag("--rescaled", density.rescaled, "N^{M-1} R1(N^M x) on an x grid");
    c_density->add_option("--preset", density.preset, "fig1 or fig2")->check(CLI::IsMember({"fig1", "fig2"}));

    MomentsArgs moments;
    auto* c_moments = app.add_subcommand("moments", "exact and numerical moments E[s^k]");
    add_common(c_moments, common);
    c_moments->add_option("--k", moments.k, "comma-separated exponents")->delimiter(',');
    c_moments->add_flag("--numeric", moments.numeric, "also integrate the density numerically");
    c_moments->add_option("--mc-trials", moments.mc_trials, "add Monte Carlo estimates");
    c_moments->add_option("--seed", moments.seed);

    KernelArgs kernel;
    auto* c_kernel = app.add_subcommand("kernel", "correlation kernels on a point grid");
    add_common(c_kernel, common);
    c_kernel->add_option("--which", kernel.which)->check(CLI::IsMember({"K", "H00", "H01", "H10", "H11"}));
    c_kernel->add_option("--first", kernel.first, "first arguments")->delimiter(',');
    c_kernel->add_option("--second", kernel.second, "second arguments")->delimiter(',');

    JpdfArgs jpdf;
    auto* c_jpdf = app.add_subcommand("jpdf", "joint density, or k- and (k,l)-point correlations");
    add_common(c_jpdf, common);
    c_jpdf->add_option("--points", jpdf.points, "squared singular values")->delimiter(',');
    c_jpdf->add_option("--t-points", jpdf.t_points, "first-factor points for (k,l)-correlations")->delimiter(',');
    c_jpdf->add_flag("--correlation", jpdf.correlation, "k-point correlation R_k instead of the jpdf");

    MiArgs mi;
    auto* c_mi = app.add_subcommand("mi", "ergodic mutual information sweep");
    add_common(c_mi, common);
    c_mi->add_option("--gamma-db", mi.gamma_db, "SNR values in dB")->delimiter(',');
    c_mi->add_option("--mc-trials", mi.mc_trials, "Monte Carlo trials (0 = analytic only)");
    c_mi->add_option("--seed", mi.seed);
    c_mi->add_flag("--bits", mi.bits, "report bits instead of nats");
    c_mi->add_option("--preset", mi.preset, "fig3")->check(CLI::IsMember({"fig3"}));

    SimulateArgs simulate;
    auto* c_sim = app.add_subcommand("simulate", "sample squared singular values of the product");
    add_common(c_sim, common);
    c_sim->add_option("--trials", simulate.trials);
    c_sim->add_option("--seed", simulate.seed);

    LimitArgs limit;
    auto* c_limit = app.add_subcommand("limit", "large-N limiting density");
    add_common(c_limit, common, false);
    c_limit->add_option("--grid", limit.grid, "min:max:points[:lin|log]");
    c_limit->add_option("--eps", limit.eps, "distance from the cut");
    c_limit->add_option("--method", limit.method, "auto, mp, cubic or general")
        ->check(CLI::IsMember({"auto", "mp", "cubic", "general"}));

    ValidateArgs validate;
    auto* c_validate = app.add_subcommand("validate", "run the self-check suite");
    add_common(c_validate, common, false);
    c_validate->add_option("--mc-trials", validate.mc_trials);
    c_validate->add_option("--seed", validate.seed);
    c_validate->add_flag("--no-monte-carlo", validate.no_mc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (c_density->parsed()) return run_density(common, density);
        if (c_moments->parsed()) return run_moments(common, moments);
        if (c_kernel->parsed()) return run_kernel(common, kernel);
        if (c_jpdf->parsed()) return run_jpdf(common, jpdf);
        if (c_mi->parsed()) return run_mi(common, mi);
        if (c_sim->parsed()) return run_simulate(common, simulate);
        if (c_limit->parsed()) return run_limit(common, limit);
        if (c_validate->parsed()) return run_validate(common, validate);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "outside supported range: " << e.what() << "\n";
        return kEnvelope;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
