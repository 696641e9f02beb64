#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsm/basis.hpp"
#include "lsm/paths.hpp"
#include "lsm/regress.hpp"

namespace lsm {

enum class PayoffKind { Put, Call };

PayoffKind payoff_kind_from_string(const std::string& name);
std::string to_string(PayoffKind kind);

struct Payoff {
    PayoffKind kind = PayoffKind::Put;
    double strike = 1.0; // > 0

    void validate() const;
};

double payoff_value(const Payoff& payoff, double x);

// Constant deterministic short rate.
struct RatePlan {
    double r = 0.0; // >= 0

    void validate() const;
};

double discount_factor(const RatePlan& rate, double t_a, double t_b);

struct PriceEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::vector<double> per_date_kappa; // interior dates m = 1..M-1
    bool exercised_at_zero = false;
};

// Regression at some interior date failed; carries the date and kappa there.
class LsmSolverError : public std::runtime_error {
public:
    LsmSolverError(const std::string& what, int date_index, double kappa)
        : std::runtime_error(what), date_index_(date_index), kappa_(kappa) {}
    int date_index() const { return date_index_; }
    double kappa() const { return kappa_; }

private:
    int date_index_;
    double kappa_;
};

// Backward induction: terminal payoffs, per-date continuation regression and
// exercise comparison (strict), then discounting to t=0 and the comparison
// with immediate exercise at t=0. TruncatedSVD never fails on rank-deficient
// dates; the other solvers surface LsmSolverError.
PriceEstimate lsm_price(const PathSet& paths, const Payoff& payoff, const BasisSet& basis,
                        const RatePlan& rate, Solver solver, bool itm_only,
                        std::optional<double> rank_tolerance = std::nullopt);

// Exercise only at T on the same paths; baseline for dominance checks.
PriceEstimate european_price(const PathSet& paths, const Payoff& payoff, const RatePlan& rate);

} // namespace lsm
