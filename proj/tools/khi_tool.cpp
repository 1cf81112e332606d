// khi-tool: command-line front end for the vortex-sheet stability toolkit.
//
// Subcommands:
//   analyze   sweep (K, M) and tabulate dispersion roots and bound constants
//   mode      sample a single normal mode's physical fields
//   simulate  march the per-wavenumber semi-discrete system and fit growth
//   hadamard  emit the ill-posedness sequence norm table
//
// Exit codes: 0 success, 1 empty/no result, 2 usage or config error,
// 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "khi/dispersion.hpp"
#include "khi/hadamard.hpp"
#include "khi/modes.hpp"
#include "khi/simulator.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEmpty = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits: round-trip exact for doubles
std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Norm cell: plain value when representable, otherwise reconstructed from
// its base-10 logarithm as <mantissa>e+<exponent>.
std::string fmt_norm(const khi::NormValue& v) {
    if (std::isfinite(v.value)) return fmt(v.value);
    const double e = std::floor(v.log10);
    const double mant = std::pow(10.0, v.log10 - e);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17ge+%.0f", mant, e);
    return buf;
}

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_csv(const Cell& c) {
    if (std::holds_alternative<double>(c)) return fmt(std::get<double>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return "";
}

void write_table_csv(const Table& t, std::ostream& os) {
    for (size_t i = 0; i < t.header.size(); ++i)
        os << (i ? "," : "") << t.header[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << cell_csv(row[i]);
        os << "\n";
    }
}

void write_table_json(const Table& t, std::ostream& os) {
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (size_t i = 0; i < row.size(); ++i) {
            if (std::holds_alternative<double>(row[i]))
                obj[t.header[i]] = std::get<double>(row[i]);
            else if (std::holds_alternative<std::string>(row[i]))
                obj[t.header[i]] = std::get<std::string>(row[i]);
            else
                obj[t.header[i]] = nullptr;
        }
        arr.push_back(obj);
    }
    os << arr.dump(2) << "\n";
}

void emit_table(const Table& t, const std::string& path,
                const std::string& format) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (path != "-") {
        file.open(path);
        if (!file) throw ConfigError("cannot open output path: " + path);
        os = &file;
    }
    if (format == "csv")
        write_table_csv(t, *os);
    else
        write_table_json(t, *os);
}

void emit_json(const json& j, const std::string& path) {
    if (path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot open summary path: " + path);
    file << j.dump(2) << "\n";
}

// Two-column whitespace-separated series for external plotting tools.
void emit_plot_file(const std::string& path,
                    const std::vector<std::pair<double, double>>& xy) {
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot open plot path: " + path);
    for (const auto& [x, y] : xy) file << fmt(x) << " " << fmt(y) << "\n";
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + it.key() + "\" in " +
                              context);
    }
}

double require_number(const json& v, const std::string& context) {
    if (!v.is_number())
        throw ConfigError(context + " must be a finite number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(context + " must be a finite number");
    return x;
}

// Shared command context: parsed config plus output routing.
struct Ctx {
    json config;          // full config document (may be empty)
    std::string out_path = "-";
    std::string format = "csv";
    std::string summary_path;
    std::string plot_prefix;  // empty = no plot emission
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be an object");
    check_keys(cfg,
               {"background", "analyze", "mode", "simulate", "hadamard",
                "output"},
               "config");
    if (cfg.contains("output")) {
        const json& out = cfg["output"];
        check_keys(out, {"path", "format", "summary"}, "output");
        if (out.contains("format")) {
            const std::string f = out["format"].get<std::string>();
            if (f != "csv" && f != "json")
                throw ConfigError("output.format must be csv or json");
        }
    }
    return cfg;
}

khi::BackgroundState parse_background(const json& bg) {
    check_keys(bg, {"rho_dot", "v1_plus", "g11_plus", "g12_plus", "c", "eps0"},
               "background");
    khi::BackgroundState s;
    if (bg.contains("rho_dot")) s.rho_dot = require_number(bg["rho_dot"], "rho_dot");
    if (bg.contains("v1_plus")) s.v1_plus = require_number(bg["v1_plus"], "v1_plus");
    if (bg.contains("g11_plus")) s.g11_plus = require_number(bg["g11_plus"], "g11_plus");
    if (bg.contains("g12_plus")) s.g12_plus = require_number(bg["g12_plus"], "g12_plus");
    if (bg.contains("c")) s.c = require_number(bg["c"], "c");
    if (bg.contains("eps0")) s.eps0 = require_number(bg["eps0"], "eps0");
    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid background: ") + e.what());
    }
    return s;
}

std::vector<double> number_list(const json& v, const std::string& context) {
    if (!v.is_array()) throw ConfigError(context + " must be an array");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(require_number(e, context));
    return out;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const Ctx& ctx, std::vector<double> k_values,
                std::vector<double> m_values, bool k_from_flag,
                bool m_from_flag) {
    khi::BackgroundState base;
    if (ctx.config.contains("background"))
        base = parse_background(ctx.config["background"]);
    if (ctx.config.contains("analyze")) {
        const json& sec = ctx.config["analyze"];
        check_keys(sec, {"k_values", "m_values"}, "analyze");
        if (!k_from_flag && sec.contains("k_values"))
            k_values = number_list(sec["k_values"], "analyze.k_values");
        if (!m_from_flag && sec.contains("m_values"))
            m_values = number_list(sec["m_values"], "analyze.m_values");
    }
    if (k_values.empty() || m_values.empty()) {
        std::cerr << "analyze: empty sweep\n";
        return kExitEmpty;
    }

    Table t;
    t.header = {"K",     "M",    "c",      "x1_sq",          "x2_sq",
                "X1",    "u_low", "u_upp", "classification", "C1",
                "C_star", "C2",   "C3"};
    for (double K : k_values) {
        for (double M : m_values) {
            khi::BackgroundState s = base;
            s.g11_plus = K * s.c;
            s.g12_plus = 0.0;
            s.v1_plus = M * s.c;
            const khi::SymbolRoots roots = khi::quartic_roots(s);
            const khi::StabilityWindow win = khi::stability_window(s);
            std::vector<Cell> row = {K,
                                     M,
                                     s.c,
                                     roots.x1_sq,
                                     roots.x2_sq,
                                     std::monostate{},
                                     win.u_low,
                                     win.u_upp,
                                     khi::to_string(win.classification),
                                     std::monostate{},
                                     std::monostate{},
                                     std::monostate{},
                                     std::monostate{}};
            if (roots.has_x1) row[5] = roots.x1;
            if (win.classification == khi::WindowClass::InUniformWindow) {
                const khi::BoundConstants b = khi::bound_constants(s);
                row[9] = b.c1;
                row[10] = b.c_star;
                row[11] = b.c2;
                row[12] = b.c3;
            }
            t.rows.push_back(std::move(row));
        }
    }
    emit_table(t, ctx.out_path, ctx.format);
    if (!ctx.plot_prefix.empty()) {
        std::vector<std::pair<double, double>> xy;
        for (const auto& row : t.rows)
            xy.emplace_back(std::get<double>(row[1]),
                            std::get<double>(row[3]));
        emit_plot_file(ctx.plot_prefix + "_x1sq.dat", xy);
    }
    return kExitOk;
}

// ------------------------------------------------------------------- mode

struct ModeParams {
    double eta = 1.0;
    std::optional<double> tau_re, tau_im;  // absent = on-shell
    double g_re = 1.0, g_im = 0.0;
    int x1_count = 17;
    int x2_count = 33;
    double x2_max = 5.0;
};

json complex_json(khi::Complex z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

int cmd_mode(const Ctx& ctx, ModeParams p, const std::set<std::string>& flags) {
    if (!ctx.config.contains("background"))
        throw ConfigError("mode requires a background section");
    const khi::BackgroundState state =
        parse_background(ctx.config["background"]);
    if (ctx.config.contains("mode")) {
        const json& sec = ctx.config["mode"];
        check_keys(sec,
                   {"eta", "tau_re", "tau_im", "g_hat_re", "g_hat_im",
                    "x1_count", "x2_count", "x2_max"},
                   "mode");
        auto take = [&](const char* key, auto& dst) {
            if (!flags.count(key) && sec.contains(key))
                dst = require_number(sec[key], key);
        };
        take("eta", p.eta);
        take("g_hat_re", p.g_re);
        take("g_hat_im", p.g_im);
        take("x2_max", p.x2_max);
        if (!flags.count("tau_re") && sec.contains("tau_re"))
            p.tau_re = require_number(sec["tau_re"], "tau_re");
        if (!flags.count("tau_im") && sec.contains("tau_im"))
            p.tau_im = require_number(sec["tau_im"], "tau_im");
        if (!flags.count("x1_count") && sec.contains("x1_count"))
            p.x1_count = sec["x1_count"].get<int>();
        if (!flags.count("x2_count") && sec.contains("x2_count"))
            p.x2_count = sec["x2_count"].get<int>();
    }
    if (p.eta == 0.0) throw ConfigError("mode requires eta != 0");
    if (p.x1_count < 2 || p.x2_count < 2)
        throw ConfigError("mode sample counts must be at least 2");
    if (p.x2_max <= 0.0) throw ConfigError("x2_max must be positive");
    if (p.tau_re.has_value() != p.tau_im.has_value())
        throw ConfigError("tau_re and tau_im must be given together");

    const khi::Complex g_hat(p.g_re, p.g_im);
    const bool on_shell = !p.tau_re.has_value();
    khi::NormalMode mode;
    if (on_shell) {
        const khi::SymbolRoots roots = khi::quartic_roots(state);
        if (!roots.has_x1 ||
            khi::stability_window(state).classification !=
                khi::WindowClass::InUniformWindow) {
            std::cerr << "mode: no unstable root\n";
            return kExitEmpty;
        }
        mode = khi::build_mode_on_shell(state, p.eta, g_hat);
    } else {
        const khi::Complex tau(*p.tau_re, *p.tau_im);
        if (!(tau.real() > 0.0))
            throw ConfigError("tau must have positive real part");
        mode = khi::build_mode(state, p.eta, tau, g_hat);
    }

    // physical samples: value(x1, x2) = Re(profile(x2) e^{i eta x1})
    const double period = 2.0 * M_PI / std::abs(p.eta);
    std::vector<double> x1s(p.x1_count), x2s(p.x2_count);
    for (int i = 0; i < p.x1_count; ++i)
        x1s[i] = period * i / (p.x1_count - 1);
    for (int i = 0; i < p.x2_count; ++i)
        x2s[i] = -p.x2_max + 2.0 * p.x2_max * i / (p.x2_count - 1);

    struct FieldRef {
        const char* name;
        const khi::ExponentialProfile* prof;  // 2 entries, upper/lower
    };
    const FieldRef fields[] = {
        {"h", mode.m_hat},          {"w1", mode.w1_hat},
        {"w2", mode.w2_hat},        {"e11", mode.e_hat[0][0]},
        {"e21", mode.e_hat[1][0]},  {"e12", mode.e_hat[0][1]},
        {"e22", mode.e_hat[1][1]},
    };

    Table t;
    t.header = {"x1", "x2", "field", "value"};
    for (double x1 : x1s) {
        const khi::Complex osc =
            std::exp(khi::Complex(0.0, p.eta * x1));
        t.rows.push_back({x1, 0.0, std::string("f"),
                          (mode.g_hat * osc).real()});
    }
    for (const FieldRef& f : fields) {
        for (double x1 : x1s) {
            const khi::Complex osc =
                std::exp(khi::Complex(0.0, p.eta * x1));
            for (double x2 : x2s) {
                const khi::ExponentialProfile& prof =
                    x2 >= 0.0 ? f.prof[0] : f.prof[1];
                t.rows.push_back({x1, x2, std::string(f.name),
                                  (prof.value(x2) * osc).real()});
            }
        }
    }
    emit_table(t, ctx.out_path, ctx.format);

    // residual report
    std::vector<double> depths;
    for (int i = 0; i < 50; ++i)
        depths.push_back(p.x2_max * (i + 1) / 50.0);
    const double interior = khi::interior_residual(state, mode, depths);
    const khi::BoundaryResiduals bres = khi::boundary_residuals(state, mode);
    const khi::MuPair mu = khi::mu_pair(state, {mode.tau, mode.eta});

    json meta = {
        {"eta", mode.eta},
        {"tau", complex_json(mode.tau)},
        {"g_hat", complex_json(mode.g_hat)},
        {"on_shell", on_shell},
        {"mu_plus", complex_json(mu.mu_plus)},
        {"mu_minus", complex_json(mu.mu_minus)},
        {"residuals",
         {{"interior", interior},
          {"pressure_continuity", bres.pressure_continuity},
          {"pressure_derivative_jump", bres.pressure_derivative_jump},
          {"kinematic", bres.kinematic},
          {"velocity_jump", bres.velocity_jump},
          {"deformation_max",
           std::max({bres.deformation_bc[0][0], bres.deformation_bc[0][1],
                     bres.deformation_bc[1][0], bres.deformation_bc[1][1]})},
          {"max", bres.max()}}},
    };
    if (on_shell)
        meta["x1_root"] = khi::quartic_roots(state).x1;
    else
        meta["x1_root"] = nullptr;
    emit_json(meta, ctx.summary_path.empty() ? "mode_metadata.json"
                                             : ctx.summary_path);

    if (!ctx.plot_prefix.empty()) {
        std::vector<std::pair<double, double>> xy;
        for (double x2 : x2s) {
            const khi::ExponentialProfile& prof =
                x2 >= 0.0 ? mode.m_hat[0] : mode.m_hat[1];
            xy.emplace_back(x2, std::abs(prof.value(x2)));
        }
        emit_plot_file(ctx.plot_prefix + "_h_profile.dat", xy);
    }
    return kExitOk;
}

// --------------------------------------------------------------- simulate

struct SimulateParams {
    double eta = 1.0;
    int n = 256;
    double length = 40.0;
    std::optional<double> dt;  // absent = CFL default
    double t_final = 5.0;
    double cfl = 0.4;
};

int cmd_simulate(const Ctx& ctx, SimulateParams p,
                 const std::set<std::string>& flags) {
    if (!ctx.config.contains("background"))
        throw ConfigError("simulate requires a background section");
    const khi::BackgroundState state =
        parse_background(ctx.config["background"]);
    if (ctx.config.contains("simulate")) {
        const json& sec = ctx.config["simulate"];
        check_keys(sec, {"eta", "N", "L", "dt", "T", "cfl"}, "simulate");
        if (!flags.count("eta") && sec.contains("eta"))
            p.eta = require_number(sec["eta"], "eta");
        if (!flags.count("N") && sec.contains("N"))
            p.n = sec["N"].get<int>();
        if (!flags.count("L") && sec.contains("L"))
            p.length = require_number(sec["L"], "L");
        if (!flags.count("dt") && sec.contains("dt"))
            p.dt = require_number(sec["dt"], "dt");
        if (!flags.count("T") && sec.contains("T"))
            p.t_final = require_number(sec["T"], "T");
        if (!flags.count("cfl") && sec.contains("cfl"))
            p.cfl = require_number(sec["cfl"], "cfl");
    }
    const khi::Grid1D grid{p.length, p.n};
    try {
        grid.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (p.t_final <= 0.0) throw ConfigError("T must be positive");
    if (p.cfl <= 0.0 || p.cfl > 1.0)
        throw ConfigError("cfl must lie in (0, 1]");

    const double dt_bound =
        p.cfl * grid.spacing() /
        (state.c * (1.0 + state.mach_number() + state.elastic_number()));
    const double dt = p.dt.value_or(dt_bound);
    if (dt <= 0.0 || dt > dt_bound)
        throw ConfigError("dt violates the CFL bound " + fmt(dt_bound));

    const khi::Generator gen = khi::assemble_generator(state, p.eta, grid);

    // initial data: the sampled unstable mode when one exists, otherwise a
    // smooth pulse centred mid-domain
    khi::SimState init = khi::SimState::zero(p.eta, grid);
    bool unstable = false;
    try {
        (void)khi::growth_rate(state, p.eta == 0.0 ? 1.0 : p.eta);
        unstable = khi::quartic_roots(state).has_x1 && p.eta != 0.0;
    } catch (const std::domain_error&) {
        unstable = false;
    }
    if (unstable) {
        const khi::NormalMode mode =
            khi::build_mode_on_shell(state, p.eta, khi::Complex(1.0, 0.0));
        init = khi::SimState::from_mode(mode, grid);
    } else {
        const double h = grid.spacing();
        const double x0 = p.length / 4.0;
        for (int side = 0; side < 2; ++side) {
            for (int i = 0; i < grid.N; ++i) {
                const double x = i * h;
                const double bump =
                    std::exp(-0.5 * (x - x0) * (x - x0));
                init.at(side, khi::SimField::H, i) = khi::Complex(bump, 0.0);
                init.at(side, khi::SimField::W2, i) =
                    khi::Complex(0.0, 0.6 * bump);
            }
        }
    }

    const khi::Trajectory traj = khi::evolve(gen, init, dt, p.t_final, p.cfl);
    const std::vector<double> residuals = khi::energy_monitor(traj);
    const int m = static_cast<int>(traj.samples.size());

    Table t;
    t.header = {"t", "log_norm", "energy", "residual"};
    for (int i = 0; i < m; ++i) {
        const khi::SimSample& s = traj.samples[i];
        Cell res = std::monostate{};
        if (i >= 2 && i < m - 2 &&
            i - 2 < static_cast<int>(residuals.size()))
            res = residuals[i - 2];
        t.rows.push_back({s.t, s.log_norm, s.energy, res});
    }
    emit_table(t, ctx.out_path, ctx.format);

    double fitted = 0.0;
    bool low_confidence = true;
    try {
        const khi::GrowthFit fit = khi::measure_growth(traj);
        fitted = fit.rate;
        low_confidence = fit.low_confidence;
    } catch (const std::invalid_argument&) {
        // too few samples: keep the low-confidence default
    }
    const double abscissa = khi::spectral_abscissa(gen);

    json summary = {
        {"fitted_rate", fitted},
        {"abscissa", abscissa},
        {"predicted_rate", nullptr},
        {"relative_error", nullptr},
        {"low_confidence", low_confidence},
        {"reflection_warning", traj.max_outer_boundary > 1e-8},
        {"max_outer_boundary", traj.max_outer_boundary},
        {"eta", p.eta},
        {"N", p.n},
        {"L", p.length},
        {"dt", dt},
        {"T", p.t_final},
        {"cfl", p.cfl},
    };
    try {
        const double predicted = khi::growth_rate(state, p.eta);
        summary["predicted_rate"] = predicted;
        summary["relative_error"] = std::abs(fitted - predicted) / predicted;
    } catch (const std::domain_error&) {
        // outside the instability window: no analytic rate to compare
    }
    emit_json(summary, ctx.summary_path.empty() ? "simulate_summary.json"
                                                : ctx.summary_path);

    if (!ctx.plot_prefix.empty()) {
        std::vector<std::pair<double, double>> ln, en;
        for (const khi::SimSample& s : traj.samples) {
            ln.emplace_back(s.t, s.log_norm);
            en.emplace_back(s.t, s.energy);
        }
        emit_plot_file(ctx.plot_prefix + "_lognorm.dat", ln);
        emit_plot_file(ctx.plot_prefix + "_energy.dat", en);
    }
    return kExitOk;
}

// --------------------------------------------------------------- hadamard

struct HadamardParams {
    int j = 3;
    int k = 3;
    double t0 = 1.0;
    std::vector<int> n_values = {5, 10, 20, 40};
    double cbar = 1.0;
    std::optional<double> alpha;
};

int cmd_hadamard(const Ctx& ctx, HadamardParams p,
                 const std::set<std::string>& flags) {
    if (!ctx.config.contains("background"))
        throw ConfigError("hadamard requires a background section");
    const khi::BackgroundState state =
        parse_background(ctx.config["background"]);
    if (ctx.config.contains("hadamard")) {
        const json& sec = ctx.config["hadamard"];
        check_keys(sec, {"j", "k", "t0", "n_values", "cbar", "alpha"},
                   "hadamard");
        if (!flags.count("j") && sec.contains("j")) p.j = sec["j"].get<int>();
        if (!flags.count("k") && sec.contains("k")) p.k = sec["k"].get<int>();
        if (!flags.count("t0") && sec.contains("t0"))
            p.t0 = require_number(sec["t0"], "t0");
        if (!flags.count("cbar") && sec.contains("cbar"))
            p.cbar = require_number(sec["cbar"], "cbar");
        if (!flags.count("alpha") && sec.contains("alpha"))
            p.alpha = require_number(sec["alpha"], "alpha");
        if (!flags.count("n") && sec.contains("n_values")) {
            p.n_values.clear();
            for (double v : number_list(sec["n_values"], "hadamard.n_values"))
                p.n_values.push_back(static_cast<int>(v));
        }
    }
    if (p.j < p.k)
        throw ConfigError("hadamard requires j >= k");
    if (p.k < 0) throw ConfigError("k must be nonnegative");
    if (p.t0 <= 0.0) throw ConfigError("t0 must be positive");
    if (p.cbar <= 0.0) throw ConfigError("cbar must be positive");
    for (int n : p.n_values)
        if (n < 1) throw ConfigError("band indices must be >= 1");
    if (p.n_values.empty()) {
        std::cerr << "hadamard: empty band list\n";
        return kExitEmpty;
    }

    const std::vector<khi::IllposednessRow> rows = khi::illposedness_table(
        state, p.j, p.k, p.t0, p.n_values, p.cbar);

    Table t;
    t.header = {"n",        "norm_f0",  "norm_h0",  "norm_v0",
                "norm_G0",  "norm_f_T", "norm_h_T", "norm_v_T",
                "norm_G_T", "log10_ratio"};
    for (const khi::IllposednessRow& r : rows) {
        t.rows.push_back({static_cast<double>(r.n),
                          std::string(fmt_norm(r.initial.f)),
                          std::string(fmt_norm(r.initial.h)),
                          std::string(fmt_norm(r.initial.v)),
                          std::string(fmt_norm(r.initial.g)),
                          std::string(fmt_norm(r.grown.f)),
                          std::string(fmt_norm(r.grown.h)),
                          std::string(fmt_norm(r.grown.v)),
                          std::string(fmt_norm(r.grown.g)),
                          r.log10_ratio});
    }
    emit_table(t, ctx.out_path, ctx.format);

    if (p.alpha) {
        const long n_star =
            khi::find_n_star(state, *p.alpha, p.t0, p.j, p.k, p.cbar);
        const json summary = {{"alpha", *p.alpha}, {"t0", p.t0},
                              {"j", p.j},          {"k", p.k},
                              {"cbar", p.cbar},    {"n_star", n_star}};
        emit_json(summary, ctx.summary_path.empty() ? "hadamard_summary.json"
                                                    : ctx.summary_path);
    }

    if (!ctx.plot_prefix.empty()) {
        std::vector<std::pair<double, double>> xy;
        for (const khi::IllposednessRow& r : rows)
            xy.emplace_back(static_cast<double>(r.n), r.log10_ratio);
        emit_plot_file(ctx.plot_prefix + "_ratio.dat", xy);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear stability toolkit for compressible elastic vortex "
                 "sheets"};
    app.require_subcommand(1);

    // thread-count env var: validated here; evaluation is deterministic and
    // currently single-threaded regardless
    if (const char* tc = std::getenv("KHI_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(tc, &end, 10);
        if (end == tc || *end != '\0' || v < 1) {
            std::cerr << "KHI_THREADS must be a positive integer\n";
            return kExitConfig;
        }
    }

    std::string config_path;
    Ctx ctx;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--output", ctx.out_path,
                        "table output path ('-' = stdout)");
        cmd->add_option("--format", ctx.format, "table format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--summary", ctx.summary_path,
                        "summary/metadata JSON path");
        cmd->add_option("--plot-data", ctx.plot_prefix,
                        "write <prefix>_*.dat x/y column files");
    };

    CLI::App* analyze = app.add_subcommand(
        "analyze", "tabulate dispersion roots over a (K, M) sweep");
    std::vector<double> k_values, m_values;
    analyze->add_option("--K", k_values, "elastic numbers to sweep");
    analyze->add_option("--M", m_values, "Mach numbers to sweep");
    add_common(analyze);

    CLI::App* mode_cmd =
        app.add_subcommand("mode", "sample a normal mode's physical fields");
    ModeParams mp;
    double tau_re = 0.0, tau_im = 0.0;
    mode_cmd->add_option("--eta", mp.eta, "wavenumber (nonzero)");
    mode_cmd->add_option("--tau-re", tau_re, "frequency real part (off-shell)");
    mode_cmd->add_option("--tau-im", tau_im,
                         "frequency imaginary part (off-shell)");
    mode_cmd->add_option("--g-re", mp.g_re, "front amplitude real part");
    mode_cmd->add_option("--g-im", mp.g_im, "front amplitude imaginary part");
    mode_cmd->add_option("--x1-count", mp.x1_count, "samples along x1");
    mode_cmd->add_option("--x2-count", mp.x2_count, "samples along x2");
    mode_cmd->add_option("--x2-max", mp.x2_max, "half-width of the x2 range");
    add_common(mode_cmd);

    CLI::App* simulate =
        app.add_subcommand("simulate", "march the semi-discrete system");
    SimulateParams sp;
    double dt_flag = 0.0;
    simulate->add_option("--eta", sp.eta, "wavenumber");
    simulate->add_option("--N", sp.n, "nodes per side");
    simulate->add_option("--L", sp.length, "truncation half-length");
    simulate->add_option("--dt", dt_flag, "time step (default: CFL bound)");
    simulate->add_option("--T", sp.t_final, "final time");
    simulate->add_option("--cfl", sp.cfl, "CFL number in (0, 1]");
    add_common(simulate);

    CLI::App* hadamard = app.add_subcommand(
        "hadamard", "emit the ill-posedness sequence norm table");
    HadamardParams hp;
    std::vector<int> n_flag;
    double alpha_flag = 0.0;
    hadamard->add_option("--j", hp.j, "initial-norm regularity index");
    hadamard->add_option("--k", hp.k, "grown-norm regularity index");
    hadamard->add_option("--t0", hp.t0, "evaluation time");
    hadamard->add_option("--n", n_flag, "band indices");
    hadamard->add_option("--cbar", hp.cbar, "normalization constant");
    hadamard->add_option("--alpha", alpha_flag,
                         "threshold: also report n_star in a JSON summary");
    add_common(hadamard);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!config_path.empty()) ctx.config = load_config(config_path);
        if (ctx.config.contains("output")) {
            const json& out = ctx.config["output"];
            CLI::App* sub = app.get_subcommands().front();
            if (sub->count("--output") == 0 && out.contains("path"))
                ctx.out_path = out["path"].get<std::string>();
            if (sub->count("--format") == 0 && out.contains("format"))
                ctx.format = out["format"].get<std::string>();
            if (sub->count("--summary") == 0 && out.contains("summary"))
                ctx.summary_path = out["summary"].get<std::string>();
        }

        if (analyze->parsed()) {
            return cmd_analyze(ctx, k_values, m_values,
                               analyze->count("--K") > 0,
                               analyze->count("--M") > 0);
        }
        if (mode_cmd->parsed()) {
            std::set<std::string> flags;
            if (mode_cmd->count("--eta")) flags.insert("eta");
            if (mode_cmd->count("--g-re")) flags.insert("g_hat_re");
            if (mode_cmd->count("--g-im")) flags.insert("g_hat_im");
            if (mode_cmd->count("--x1-count")) flags.insert("x1_count");
            if (mode_cmd->count("--x2-count")) flags.insert("x2_count");
            if (mode_cmd->count("--x2-max")) flags.insert("x2_max");
            if (mode_cmd->count("--tau-re")) {
                flags.insert("tau_re");
                mp.tau_re = tau_re;
            }
            if (mode_cmd->count("--tau-im")) {
                flags.insert("tau_im");
                mp.tau_im = tau_im;
            }
            return cmd_mode(ctx, mp, flags);
        }
        if (simulate->parsed()) {
            std::set<std::string> flags;
            for (const char* f : {"eta", "N", "L", "dt", "T", "cfl"}) {
                if (simulate->count(std::string("--") + f)) flags.insert(f);
            }
            if (flags.count("dt")) sp.dt = dt_flag;
            return cmd_simulate(ctx, sp, flags);
        }
        if (hadamard->parsed()) {
            std::set<std::string> flags;
            for (const char* f : {"j", "k", "t0", "cbar"}) {
                if (hadamard->count(std::string("--") + f)) flags.insert(f);
            }
            if (hadamard->count("--n")) {
                flags.insert("n");
                hp.n_values = n_flag;
            }
            if (hadamard->count("--alpha")) {
                flags.insert("alpha");
                hp.alpha = alpha_flag;
            }
            return cmd_hadamard(ctx, hp, flags);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
