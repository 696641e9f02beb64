#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lsm/basis.hpp"
#include "lsm/paths.hpp"

namespace lsm {

// kappa(t_m) over the interior partition m = 1..M-1.
struct ConditionScan {
    std::vector<double> t;
    std::vector<double> kappa; // +inf where the design matrix is rank deficient
    std::string config_digest;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double t_lo = 0.0; // window (t_lo, t_hi]
    double t_hi = 0.0;
    int points_used = 0;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parallel across dates; serial reference kept for testing.
ConditionScan scan_condition_numbers(const PathSet& paths, const BasisSet& basis);
ConditionScan scan_condition_numbers_serial(const PathSet& paths, const BasisSet& basis);

// OLS of ln(kappa) on ln(t) over finite-kappa points with t_lo < t <= t_hi.
SlopeFit fit_loglog_slope(const ConditionScan& scan, double t_lo, double t_hi);

// Spearman rank correlation of ln(kappa) vs ln(t) over the same window,
// infinite-kappa points excluded.
double spearman_loglog(const ConditionScan& scan, double t_lo, double t_hi);

struct PropositionReport {
    int rank = 0;
    double leading_singular_value = 0.0;
    double expected_singular_value = 0.0;
    double max_residual_singular_value = 0.0;
    double kappa = 0.0;
    double gram_eigenvalue_error = 0.0;
    bool passed = false;
};

// Checks the t=0 degeneracy: N identical rows, rank 1, leading singular value
// sqrt(N * sum f_k^2(x0)), kappa infinite (kappa = 1 in the K = 1 case), and
// the closed-form Gram spectrum {sum f_k^2, 0 x (K-1)}.
PropositionReport verify_proposition_one(const BasisSet& basis, double x0, Eigen::Index N);

enum class FigureId { Fig1, Fig2 };

struct FigureOverrides {
    std::optional<Eigen::Index> n_paths;
    std::optional<int> steps;
    std::optional<std::uint64_t> seed;
    std::optional<int> basis_count;
};

struct FigureConfig {
    SdeModel model;
    Scheme scheme = Scheme::Euler;
    Eigen::Index n_paths = 30000;
    int steps = 100;
    double horizon = 1.0;
    std::uint64_t seed = 0;
    BasisSet basis;
    double t_min = 0.009; // scan restricted to dates with t > t_min
};

FigureConfig figure_config(FigureId id);

ConditionScan reproduce_figure(FigureId id, const FigureOverrides& overrides = {});

} // namespace lsm
