#include "lsm/pricing.hpp"

#include <cmath>
#include <limits>

namespace lsm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PayoffKind payoff_kind_from_string(const std::string& name) {
    if (name == "put") return PayoffKind::Put;
    if (name == "call") return PayoffKind::Call;
    throw std::invalid_argument("unknown payoff kind: " + name);
}

std::string to_string(PayoffKind kind) {
    return kind == PayoffKind::Put ? "put" : "call";
}

void Payoff::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike))
        throw std::invalid_argument("Payoff: strike must be > 0");
}

double payoff_value(const Payoff& payoff, double x) {
    if (payoff.kind == PayoffKind::Put) return std::max(payoff.strike - x, 0.0);
    return std::max(x - payoff.strike, 0.0);
}

void RatePlan::validate() const {
    if (r < 0.0 || !std::isfinite(r)) throw std::invalid_argument("RatePlan: r must be >= 0");
}

double discount_factor(const RatePlan& rate, double t_a, double t_b) {
    if (t_a > t_b) throw std::invalid_argument("discount_factor: t_a must be <= t_b");
    return std::exp(-rate.r * (t_b - t_a));
}

PriceEstimate lsm_price(const PathSet& paths, const Payoff& payoff, const BasisSet& basis,
                        const RatePlan& rate, Solver solver, bool itm_only,
                        std::optional<double> rank_tolerance) {
    payoff.validate();
    rate.validate();
    basis.validate();

    const Eigen::Index N = paths.n_paths();
    const int M = paths.grid.M;
    if (!itm_only && N < basis.K)
        throw std::invalid_argument("lsm_price: requires N >= K when regressing all paths");

    // Single cash flow per path: amount and the date it is realized at.
    Eigen::VectorXd amounts(N);
    std::vector<int> dates(N, M);
    for (Eigen::Index n = 0; n < N; ++n) amounts(n) = payoff_value(payoff, paths.values(n, M));

    PriceEstimate est;
    est.per_date_kappa.assign(M - 1, kInf);

    std::vector<double> frow(basis.K);
    for (int m = M - 1; m >= 1; --m) {
        const double t_m = paths.grid.nodes[m];

        // Future cash flow discounted from its assigned date back to t_m.
        Eigen::VectorXd b(N);
        for (Eigen::Index n = 0; n < N; ++n)
            b(n) = amounts(n) * discount_factor(rate, t_m, paths.grid.nodes[dates[n]]);

        Eigen::VectorXd exercise(N);
        for (Eigen::Index n = 0; n < N; ++n)
            exercise(n) = payoff_value(payoff, paths.values(n, m));

        // Regression rows: all paths, or the in-the-money subset.
        Eigen::VectorXd xreg, breg;
        if (itm_only) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index n = 0; n < N; ++n)
                if (exercise(n) > 0.0) idx.push_back(n);
            if (idx.empty()) continue; // nothing can be exercised at this date
            xreg.resize(idx.size());
            breg.resize(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) {
                xreg(i) = paths.values(idx[i], m);
                breg(i) = b(idx[i]);
            }
        } else {
            xreg = paths.values.col(m);
            breg = b;
        }

        const Eigen::MatrixXd A = basis_matrix(basis, xreg);

        LsSolution sol;
        try {
            sol = solve(solver, A, breg, rank_tolerance);
        } catch (const SingularSystemError& e) {
            throw LsmSolverError("lsm_price: singular system at date index " +
                                     std::to_string(m) + " (t=" + std::to_string(t_m) +
                                     ", kappa=" + std::to_string(e.kappa()) + ")",
                                 m, e.kappa());
        } catch (const RankDeficientError& e) {
            throw LsmSolverError("lsm_price: rank-deficient system at date index " +
                                     std::to_string(m) + " (t=" + std::to_string(t_m) +
                                     ", kappa=" + std::to_string(e.kappa()) + ")",
                                 m, e.kappa());
        }
        est.per_date_kappa[m - 1] = sol.kappa;

        // Exercise iff immediate payoff strictly exceeds the fitted
        // continuation value; ties continue. Under itm_only the comparison is
        // restricted to paths with positive payoff.
        for (Eigen::Index n = 0; n < N; ++n) {
            if (itm_only && exercise(n) <= 0.0) continue;
            evaluate_basis(basis, paths.values(n, m), frow.data());
            double continuation = 0.0;
            for (int k = 0; k < basis.K; ++k) continuation += frow[k] * sol.coefficients(k);
            if (exercise(n) > continuation) {
                amounts(n) = exercise(n);
                dates[n] = m;
            }
        }
    }

    Eigen::VectorXd discounted(N);
    for (Eigen::Index n = 0; n < N; ++n)
        discounted(n) = amounts(n) * discount_factor(rate, 0.0, paths.grid.nodes[dates[n]]);
    const double mean = discounted.mean();
    const double var =
        N > 1 ? (discounted.array() - mean).square().sum() / static_cast<double>(N - 1) : 0.0;
    est.standard_error = std::sqrt(var / static_cast<double>(N));

    const double at_zero = payoff_value(payoff, paths.values(0, 0));
    est.exercised_at_zero = at_zero > mean;
    est.value = std::max(at_zero, mean);
    return est;
}

PriceEstimate european_price(const PathSet& paths, const Payoff& payoff, const RatePlan& rate) {
    payoff.validate();
    rate.validate();
    const Eigen::Index N = paths.n_paths();
    const double d = discount_factor(rate, 0.0, paths.grid.T);
    Eigen::VectorXd discounted(N);
    for (Eigen::Index n = 0; n < N; ++n)
        discounted(n) = d * payoff_value(payoff, paths.values(n, paths.grid.M));
    PriceEstimate est;
    est.value = discounted.mean();
    const double var =
        N > 1 ? (discounted.array() - est.value).square().sum() / static_cast<double>(N - 1) : 0.0;
    est.standard_error = std::sqrt(var / static_cast<double>(N));
    return est;
}

} // namespace lsm
