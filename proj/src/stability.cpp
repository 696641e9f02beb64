#include "lsm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lsm/regress.hpp"

namespace lsm {

namespace {

ConditionScan scan_impl(const PathSet& paths, const BasisSet& basis, bool parallel) {
    basis.validate();
    const int M = paths.grid.M;
    ConditionScan scan;
    scan.t.resize(M - 1);
    scan.kappa.resize(M - 1);
    for (int m = 1; m < M; ++m) scan.t[m - 1] = paths.grid.nodes[m];

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int m = 1; m < M; ++m)
            scan.kappa[m - 1] = condition_number(design_matrix(basis, paths, m).entries);
    } else {
        for (int m = 1; m < M; ++m)
            scan.kappa[m - 1] = condition_number(design_matrix(basis, paths, m).entries);
    }

    std::ostringstream digest;
    digest << "N=" << paths.n_paths() << " M=" << M << " seed=" << paths.seed
           << " basis=" << to_string(basis.family) << " K=" << basis.K;
    scan.config_digest = digest.str();
    return scan;
}

// Indices of finite-kappa points with t_lo < t <= t_hi.
std::vector<std::size_t> window_points(const ConditionScan& scan, double t_lo, double t_hi) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < scan.t.size(); ++i)
        if (scan.t[i] > t_lo && scan.t[i] <= t_hi && std::isfinite(scan.kappa[i]))
            idx.push_back(i);
    return idx;
}

std::vector<double> ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    return rank;
}

} // namespace

ConditionScan scan_condition_numbers(const PathSet& paths, const BasisSet& basis) {
    return scan_impl(paths, basis, true);
}

ConditionScan scan_condition_numbers_serial(const PathSet& paths, const BasisSet& basis) {
    return scan_impl(paths, basis, false);
}

SlopeFit fit_loglog_slope(const ConditionScan& scan, double t_lo, double t_hi) {
    const auto idx = window_points(scan, t_lo, t_hi);
    if (idx.size() < 2)
        throw InsufficientDataError("fit_loglog_slope: fewer than 2 finite points in window");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i : idx) {
        const double x = std::log(scan.t[i]);
        const double y = std::log(scan.kappa[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(idx.size());
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.points_used = static_cast<int>(idx.size());
    return fit;
}

double spearman_loglog(const ConditionScan& scan, double t_lo, double t_hi) {
    const auto idx = window_points(scan, t_lo, t_hi);
    if (idx.size() < 2)
        throw InsufficientDataError("spearman_loglog: fewer than 2 finite points in window");

    std::vector<double> x, y;
    x.reserve(idx.size());
    y.reserve(idx.size());
    for (std::size_t i : idx) {
        x.push_back(scan.t[i]); // log is monotone; ranks are the same
        y.push_back(scan.kappa[i]);
    }
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(rx.size());
    const double mean = (n + 1.0) / 2.0;
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    return num / std::sqrt(dx * dy);
}

PropositionReport verify_proposition_one(const BasisSet& basis, double x0, Eigen::Index N) {
    basis.validate();
    const std::vector<double> f = evaluate_basis(basis, x0);
    const double sum_sq = std::inner_product(f.begin(), f.end(), f.begin(), 0.0);
    if (sum_sq <= 0.0)
        throw std::invalid_argument("verify_proposition_one: sum of f_k^2(x0) must be positive");

    // t = 0 design matrix: N identical rows.
    Eigen::MatrixXd A(N, basis.K);
    for (Eigen::Index n = 0; n < N; ++n)
        for (int k = 0; k < basis.K; ++k) A(n, k) = f[k];

    const Eigen::VectorXd s = singular_values(A);
    const double tol = default_rank_tolerance(N, basis.K) * s(0);

    PropositionReport report;
    report.leading_singular_value = s(0);
    report.expected_singular_value = std::sqrt(static_cast<double>(N) * sum_sq);
    report.rank = static_cast<int>((s.array() > tol).count());
    report.max_residual_singular_value = s.size() > 1 ? s(1) : 0.0;
    report.kappa = basis.K == 1 ? 1.0 : std::numeric_limits<double>::infinity();

    // Cross-check the closed-form Gram spectrum {sum f_k^2, 0 x (K-1)}.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_at_zero(basis, x0));
    double err = std::abs(eig.eigenvalues()(basis.K - 1) - sum_sq);
    for (int k = 0; k + 1 < basis.K; ++k) err = std::max(err, std::abs(eig.eigenvalues()(k)));
    report.gram_eigenvalue_error = err;

    const double rel_err =
        std::abs(report.leading_singular_value - report.expected_singular_value) /
        report.expected_singular_value;
    const double kappa_actual = condition_number(A);
    const bool kappa_ok = basis.K == 1 ? kappa_actual == 1.0 : std::isinf(kappa_actual);
    report.passed = report.rank == 1 && rel_err <= 1e-10 &&
                    report.max_residual_singular_value <= tol && kappa_ok &&
                    err <= 1e-8 * sum_sq;
    return report;
}

FigureConfig figure_config(FigureId id) {
    FigureConfig cfg;
    cfg.basis = BasisSet{BasisFamily::Monomial, 3, {}};
    if (id == FigureId::Fig1) {
        cfg.model = SdeModel{SdeKind::Lognormal, 0.0, 0.15, 1.0};
        cfg.scheme = Scheme::Milstein;
    } else {
        cfg.model = SdeModel{SdeKind::Arithmetic, 0.0, 0.03, 1.0};
        cfg.scheme = Scheme::Euler;
    }
    return cfg;
}

ConditionScan reproduce_figure(FigureId id, const FigureOverrides& overrides) {
    FigureConfig cfg = figure_config(id);
    if (overrides.n_paths) cfg.n_paths = *overrides.n_paths;
    if (overrides.steps) cfg.steps = *overrides.steps;
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.basis_count) cfg.basis.K = *overrides.basis_count;

    const TimeGrid grid = build_time_grid(cfg.horizon, cfg.steps);
    const PathSet paths = simulate(cfg.model, grid, cfg.n_paths, cfg.scheme, cfg.seed);
    ConditionScan scan = scan_condition_numbers(paths, cfg.basis);

    // Restrict to dates with t > t_min.
    std::size_t keep = 0;
    for (std::size_t i = 0; i < scan.t.size(); ++i) {
        if (scan.t[i] > cfg.t_min) {
            scan.t[keep] = scan.t[i];
            scan.kappa[keep] = scan.kappa[i];
            ++keep;
        }
    }
    scan.t.resize(keep);
    scan.kappa.resize(keep);
    return scan;
}

} // namespace lsm
