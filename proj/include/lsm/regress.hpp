#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "lsm/basis.hpp"

namespace lsm {

enum class Solver { NormalEquations, HouseholderQR, TruncatedSVD };

Solver solver_from_string(const std::string& name);
std::string to_string(Solver solver);

struct LsSolution {
    Eigen::VectorXd coefficients;
    Solver solver = Solver::TruncatedSVD;
    int effective_rank = 0;
    double kappa = 1.0; // +inf when rank deficient
    double residual_norm = 0.0;
};

// A^T A factorization failed; the system is numerically singular.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, double kappa)
        : std::runtime_error(what), kappa_(kappa) {}
    double kappa() const { return kappa_; }

private:
    double kappa_;
};

// QR detected effective column rank below K.
class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(const std::string& what, double kappa)
        : std::runtime_error(what), kappa_(kappa) {}
    double kappa() const { return kappa_; }

private:
    double kappa_;
};

// Relative truncation threshold: singular values below
// eps * max(N, K) * sigma_max count as zero.
double default_rank_tolerance(Eigen::Index rows, Eigen::Index cols);

// min(N, K) singular values, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& A);

// sigma_max / sigma_min in the 2-norm; +inf when sigma_min is zero to
// machine precision (same rule as default_rank_tolerance).
double condition_number(const Eigen::MatrixXd& A);

// (A^T A)(0) / N in closed form: entry (i, j) = f_i(x0) * f_j(x0).
Eigen::MatrixXd gram_at_zero(const BasisSet& basis, double x0);

LsSolution solve_normal_equations(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
LsSolution solve_qr(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
LsSolution solve_svd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     std::optional<double> rank_tolerance = std::nullopt);

LsSolution solve(Solver solver, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                 std::optional<double> rank_tolerance = std::nullopt);

} // namespace lsm
