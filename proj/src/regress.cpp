#include "lsm/regress.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace lsm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Solver solver_from_string(const std::string& name) {
    if (name == "normal") return Solver::NormalEquations;
    if (name == "qr") return Solver::HouseholderQR;
    if (name == "svd") return Solver::TruncatedSVD;
    throw std::invalid_argument("unknown solver: " + name);
}

std::string to_string(Solver solver) {
    switch (solver) {
        case Solver::NormalEquations: return "normal";
        case Solver::HouseholderQR: return "qr";
        case Solver::TruncatedSVD: return "svd";
    }
    throw std::logic_error("unreachable");
}

double default_rank_tolerance(Eigen::Index rows, Eigen::Index cols) {
    return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(rows, cols));
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& A) {
    if (A.rows() < 1 || A.cols() < 1)
        throw std::invalid_argument("singular_values: matrix must be nonempty");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    return svd.singularValues();
}

double condition_number(const Eigen::MatrixXd& A) {
    const Eigen::VectorXd s = singular_values(A);
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (smax == 0.0) throw std::invalid_argument("condition_number: all-zero matrix");
    if (smin < default_rank_tolerance(A.rows(), A.cols()) * smax) return kInf;
    return smax / smin;
}

Eigen::MatrixXd gram_at_zero(const BasisSet& basis, double x0) {
    const std::vector<double> f = evaluate_basis(basis, x0);
    const Eigen::Map<const Eigen::VectorXd> v(f.data(), basis.K);
    if (v.squaredNorm() == 0.0)
        throw std::invalid_argument("gram_at_zero: sum of f_k^2(x0) must be positive");
    return v * v.transpose();
}

namespace {

void check_shapes(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != b.size())
        throw std::invalid_argument("least squares: A rows must match b size");
    if (A.rows() < 1 || A.cols() < 1)
        throw std::invalid_argument("least squares: matrix must be nonempty");
}

} // namespace

LsSolution solve_normal_equations(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    check_shapes(A, b);
    if (A.rows() < A.cols())
        throw std::invalid_argument("solve_normal_equations: requires N >= K");

    const double kappa = A.isZero(0.0) ? kInf : condition_number(A);
    const Eigen::MatrixXd gram = A.transpose() * A;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    // LLT can complete on an exactly semidefinite Gram matrix; the kappa
    // sentinel (rank deficient to machine precision) is singular either way.
    if (llt.info() != Eigen::Success || std::isinf(kappa))
        throw SingularSystemError("normal equations: A^T A factorization failed (kappa=" +
                                      std::to_string(kappa) + ")",
                                  kappa);

    LsSolution sol;
    sol.solver = Solver::NormalEquations;
    sol.coefficients = llt.solve(A.transpose() * b);
    sol.effective_rank = static_cast<int>(A.cols());
    sol.kappa = kappa;
    sol.residual_norm = (A * sol.coefficients - b).norm();
    return sol;
}

LsSolution solve_qr(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    check_shapes(A, b);
    if (A.rows() < A.cols())
        throw std::invalid_argument("solve_qr: requires N >= K");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(default_rank_tolerance(A.rows(), A.cols()));
    if (qr.rank() < A.cols()) {
        const double kappa = A.isZero(0.0) ? kInf : condition_number(A);
        throw RankDeficientError("qr: rank " + std::to_string(qr.rank()) + " < " +
                                     std::to_string(A.cols()) + " columns",
                                 kappa);
    }

    LsSolution sol;
    sol.solver = Solver::HouseholderQR;
    sol.coefficients = qr.solve(b);
    sol.effective_rank = static_cast<int>(qr.rank());
    sol.kappa = condition_number(A);
    sol.residual_norm = (A * sol.coefficients - b).norm();
    return sol;
}

LsSolution solve_svd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     std::optional<double> rank_tolerance) {
    check_shapes(A, b);
    if (rank_tolerance && *rank_tolerance < 0.0)
        throw std::invalid_argument("solve_svd: rank_tolerance must be >= 0");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    const double rel_tol = rank_tolerance.value_or(default_rank_tolerance(A.rows(), A.cols()));
    const double cutoff = rel_tol * smax;

    LsSolution sol;
    sol.solver = Solver::TruncatedSVD;
    sol.coefficients = Eigen::VectorXd::Zero(A.cols());
    const Eigen::VectorXd utb = svd.matrixU().transpose() * b;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (smax > 0.0 && s(i) > cutoff) {
            sol.coefficients += (utb(i) / s(i)) * svd.matrixV().col(i);
            ++sol.effective_rank;
        }
    }
    const double smin = s(s.size() - 1);
    sol.kappa = (smax == 0.0 || smin < default_rank_tolerance(A.rows(), A.cols()) * smax)
                    ? kInf
                    : smax / smin;
    sol.residual_norm = (A * sol.coefficients - b).norm();
    return sol;
}

LsSolution solve(Solver solver, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                 std::optional<double> rank_tolerance) {
    switch (solver) {
        case Solver::NormalEquations: return solve_normal_equations(A, b);
        case Solver::HouseholderQR: return solve_qr(A, b);
        case Solver::TruncatedSVD: return solve_svd(A, b, rank_tolerance);
    }
    throw std::logic_error("unreachable");
}

} // namespace lsm
