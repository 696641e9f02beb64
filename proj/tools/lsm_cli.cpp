#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsm/csv.hpp"
#include "lsm/pricing.hpp"
#include "lsm/regress.hpp"
#include "lsm/stability.hpp"

namespace {

// Exit codes (documented in the README)
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInsufficientData = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    lsm::SdeModel model{lsm::SdeKind::Lognormal, 0.0, 0.15, 1.0};
    double T = 1.0;
    int M = 100;
    Eigen::Index n_paths = 10000;
    lsm::Scheme scheme = lsm::Scheme::Euler;
    std::uint64_t seed = 0;
    bool seed_set = false;
    lsm::BasisSet basis{lsm::BasisFamily::Monomial, 3, {}};
    lsm::Payoff payoff{lsm::PayoffKind::Put, 1.1};
    lsm::RatePlan rate{0.0};
    lsm::Solver solver = lsm::Solver::TruncatedSVD;
    std::optional<double> rank_tolerance;
    bool itm_only = false;
    std::string out_path;
    std::string paths_file;
    double window_lo = 0.009;
    double window_hi = 0.2;
};

using nlohmann::json;

template <typename T>
void read_field(const json& j, const std::string& section, const char* key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(section + "." + key + ": wrong type");
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    if (j.contains("model")) {
        const auto& m = j["model"];
        std::string kind;
        read_field(m, "model", "kind", kind);
        if (!kind.empty()) {
            if (kind == "lognormal") cfg.model.kind = lsm::SdeKind::Lognormal;
            else if (kind == "arithmetic") cfg.model.kind = lsm::SdeKind::Arithmetic;
            else throw ConfigError("model.kind: expected \"lognormal\" or \"arithmetic\"");
        }
        read_field(m, "model", "mu", cfg.model.mu);
        read_field(m, "model", "sigma", cfg.model.sigma);
        read_field(m, "model", "x0", cfg.model.x0);
    }
    if (j.contains("grid")) {
        read_field(j["grid"], "grid", "T", cfg.T);
        read_field(j["grid"], "grid", "M", cfg.M);
    }
    if (j.contains("simulation")) {
        const auto& s = j["simulation"];
        long long n = -1;
        read_field(s, "simulation", "N", n);
        if (n >= 0) cfg.n_paths = n;
        std::string scheme;
        read_field(s, "simulation", "scheme", scheme);
        if (!scheme.empty()) {
            if (scheme == "euler") cfg.scheme = lsm::Scheme::Euler;
            else if (scheme == "milstein") cfg.scheme = lsm::Scheme::Milstein;
            else throw ConfigError("simulation.scheme: expected \"euler\" or \"milstein\"");
        }
        if (s.contains("seed")) {
            read_field(s, "simulation", "seed", cfg.seed);
            cfg.seed_set = true;
        }
    }
    if (j.contains("basis")) {
        const auto& b = j["basis"];
        std::string family;
        read_field(b, "basis", "family", family);
        if (!family.empty()) {
            try {
                cfg.basis.family = lsm::basis_family_from_string(family);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("basis.family: ") + e.what());
            }
        }
        read_field(b, "basis", "K", cfg.basis.K);
        if (b.contains("rescale")) {
            read_field(b["rescale"], "basis.rescale", "scale", cfg.basis.rescale.scale);
            read_field(b["rescale"], "basis.rescale", "shift", cfg.basis.rescale.shift);
        }
    }
    if (j.contains("payoff")) {
        const auto& p = j["payoff"];
        std::string kind;
        read_field(p, "payoff", "kind", kind);
        if (!kind.empty()) {
            try {
                cfg.payoff.kind = lsm::payoff_kind_from_string(kind);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("payoff.kind: ") + e.what());
            }
        }
        read_field(p, "payoff", "strike", cfg.payoff.strike);
    }
    if (j.contains("rate")) read_field(j["rate"], "rate", "r", cfg.rate.r);
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        std::string name;
        read_field(s, "solver", "name", name);
        if (!name.empty()) {
            try {
                cfg.solver = lsm::solver_from_string(name);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("solver.name: ") + e.what());
            }
        }
        if (s.contains("rank_tolerance") && !s["rank_tolerance"].is_null()) {
            double tol = 0.0;
            read_field(s, "solver", "rank_tolerance", tol);
            cfg.rank_tolerance = tol;
        }
        read_field(s, "solver", "itm_only", cfg.itm_only);
    }
    if (j.contains("output")) read_field(j["output"], "output", "path", cfg.out_path);
}

void apply_figure_preset(RunConfig& cfg, const std::string& figure) {
    lsm::FigureId id;
    if (figure == "fig1") id = lsm::FigureId::Fig1;
    else if (figure == "fig2") id = lsm::FigureId::Fig2;
    else throw ConfigError("--figure: expected fig1 or fig2");
    const lsm::FigureConfig fc = lsm::figure_config(id);
    cfg.model = fc.model;
    cfg.scheme = fc.scheme;
    cfg.n_paths = fc.n_paths;
    cfg.M = fc.steps;
    cfg.T = fc.horizon;
    cfg.basis = fc.basis;
}

void validate(const RunConfig& cfg) {
    try {
        cfg.model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    if (!(cfg.T > 0.0)) throw ConfigError("grid.T: must be > 0");
    if (cfg.M < 2) throw ConfigError("grid.M: must be >= 2");
    if (cfg.n_paths < 1) throw ConfigError("simulation.N: must be >= 1");
    try {
        cfg.basis.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("basis: ") + e.what());
    }
    try {
        cfg.payoff.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("payoff: ") + e.what());
    }
    try {
        cfg.rate.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("rate: ") + e.what());
    }
    if (cfg.rank_tolerance && *cfg.rank_tolerance < 0.0)
        throw ConfigError("solver.rank_tolerance: must be >= 0");
}

lsm::PathSet load_or_simulate(const RunConfig& cfg) {
    const lsm::TimeGrid grid = lsm::build_time_grid(cfg.T, cfg.M);
    if (!cfg.paths_file.empty()) {
        std::ifstream in(cfg.paths_file);
        if (!in) throw std::runtime_error("cannot open paths file: " + cfg.paths_file);
        return lsm::read_paths_csv(in, grid);
    }
    return lsm::simulate(cfg.model, grid, cfg.n_paths, cfg.scheme, cfg.seed);
}

std::ostream& open_output(std::ofstream& file, const RunConfig& cfg) {
    if (cfg.out_path.empty()) return std::cout;
    file.open(cfg.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + cfg.out_path);
    return file;
}

int cmd_simulate(const RunConfig& cfg) {
    const lsm::PathSet paths = load_or_simulate(cfg);
    std::ofstream file;
    std::ostream& os = open_output(file, cfg);
    lsm::write_paths_csv(os, paths);
    std::cerr << "simulate: N=" << paths.n_paths() << " M=" << paths.grid.M
              << " seed=" << cfg.seed << "\n";
    return kExitOk;
}

int cmd_price(const RunConfig& cfg) {
    const lsm::PathSet paths = load_or_simulate(cfg);
    lsm::PriceEstimate est;
    try {
        est = lsm::lsm_price(paths, cfg.payoff, cfg.basis, cfg.rate, cfg.solver, cfg.itm_only,
                             cfg.rank_tolerance);
    } catch (const lsm::LsmSolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }

    double kmin = std::numeric_limits<double>::infinity(), kmax = 0.0;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < est.per_date_kappa.size(); ++i) {
        if (est.per_date_kappa[i] < kmin) {
            kmin = est.per_date_kappa[i];
            argmin = i;
        }
        kmax = std::max(kmax, est.per_date_kappa[i]);
    }
    std::cout << "value " << lsm::format_double(est.value) << "\n"
              << "standard_error " << lsm::format_double(est.standard_error) << "\n"
              << "exercised_at_zero " << (est.exercised_at_zero ? "true" : "false") << "\n"
              << "kappa_min " << lsm::format_double(kmin) << " at t="
              << lsm::format_double(paths.grid.nodes[argmin + 1]) << "\n"
              << "kappa_max " << lsm::format_double(kmax) << "\n";

    if (!cfg.out_path.empty()) {
        lsm::ConditionScan scan;
        scan.t.assign(paths.grid.nodes.begin() + 1, paths.grid.nodes.end() - 1);
        scan.kappa = est.per_date_kappa;
        std::ofstream file(cfg.out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + cfg.out_path);
        lsm::write_scan_csv(file, scan);
    }
    return kExitOk;
}

int cmd_scan(const RunConfig& cfg) {
    const lsm::PathSet paths = load_or_simulate(cfg);
    const lsm::ConditionScan scan = lsm::scan_condition_numbers(paths, cfg.basis);

    std::ofstream file;
    std::ostream& os = open_output(file, cfg);
    lsm::write_scan_csv(os, scan);

    try {
        const lsm::SlopeFit fit = lsm::fit_loglog_slope(scan, cfg.window_lo, cfg.window_hi);
        const double rho = lsm::spearman_loglog(scan, cfg.window_lo, cfg.window_hi);
        std::cerr << "scan: slope=" << lsm::format_double(fit.slope)
                  << " spearman=" << lsm::format_double(rho) << " window=("
                  << lsm::format_double(cfg.window_lo) << "," << lsm::format_double(cfg.window_hi)
                  << "] points=" << fit.points_used << "\n";
    } catch (const lsm::InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least-squares Monte Carlo pricer and regression-conditioning lab"};
    app.require_subcommand(1);

    std::string config_path, figure, solver_name, basis_name, window, out_path, paths_file;
    std::optional<std::uint64_t> seed_flag;
    std::optional<long long> paths_flag, steps_flag;
    std::optional<int> k_flag;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--figure", figure, "Preset: fig1 or fig2");
        sub->add_option("--seed", seed_flag, "RNG seed (overrides config)");
        sub->add_option("--paths", paths_flag, "Number of Monte Carlo paths");
        sub->add_option("--steps", steps_flag, "Number of time steps");
        sub->add_option("--solver", solver_name, "normal | qr | svd");
        sub->add_option("--basis", basis_name, "monomial | laguerre | legendre | chebyshev | hermite");
        sub->add_option("--K", k_flag, "Number of basis functions");
        sub->add_option("--out", out_path, "Output file (default: stdout)");
        sub->add_option("--window", window, "Slope-fit window t_lo:t_hi");
        sub->add_option("--paths-file", paths_file, "Read paths from a simulate CSV instead of simulating");
    };

    CLI::App* sim = app.add_subcommand("simulate", "Simulate paths and write them as CSV");
    CLI::App* price = app.add_subcommand("price", "Run the LSM backward induction and report the price");
    CLI::App* scan = app.add_subcommand("scan", "Scan per-date condition numbers and fit the log-log trend");
    add_common(sim);
    add_common(price);
    add_common(scan);

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        if (!figure.empty()) apply_figure_preset(cfg, figure);
        if (!config_path.empty()) apply_config_file(cfg, config_path);

        if (seed_flag) {
            cfg.seed = *seed_flag;
        } else if (!cfg.seed_set) {
            if (const char* env = std::getenv("LSM_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
        }
        if (paths_flag) cfg.n_paths = *paths_flag;
        if (steps_flag) cfg.M = static_cast<int>(*steps_flag);
        if (!solver_name.empty()) cfg.solver = lsm::solver_from_string(solver_name);
        if (!basis_name.empty()) cfg.basis.family = lsm::basis_family_from_string(basis_name);
        if (k_flag) cfg.basis.K = *k_flag;
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!paths_file.empty()) cfg.paths_file = paths_file;
        if (!window.empty()) {
            const auto colon = window.find(':');
            if (colon == std::string::npos) throw ConfigError("--window: expected t_lo:t_hi");
            cfg.window_lo = std::stod(window.substr(0, colon));
            cfg.window_hi = std::stod(window.substr(colon + 1));
        }

        validate(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(cfg);
        if (price->parsed()) return cmd_price(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
    } catch (const lsm::InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitOther;
}
