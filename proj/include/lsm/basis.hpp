#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "lsm/paths.hpp"

namespace lsm {

enum class BasisFamily { Monomial, Laguerre, Legendre, Chebyshev, Hermite };

BasisFamily basis_family_from_string(const std::string& name);
std::string to_string(BasisFamily family);

// Optional affine input map, applied before evaluation: x -> scale*x + shift.
struct AffineMap {
    double scale = 1.0;
    double shift = 0.0;
};

// First K members of the family, degree 0..K-1 (f_1..f_K).
// Chebyshev is first kind, Hermite is the probabilists' convention.
struct BasisSet {
    BasisFamily family = BasisFamily::Monomial;
    int K = 3;
    AffineMap rescale{};

    void validate() const;
};

// (f_1(x), ..., f_K(x)) via the family's three-term recurrence.
std::vector<double> evaluate_basis(const BasisSet& basis, double x);

// In-place variant, out must have length K.
void evaluate_basis(const BasisSet& basis, double x, double* out);

// N x K matrix with entry (n, k) = f_{k+1}(X^n_t), for exercise date t.
struct DesignMatrix {
    Eigen::MatrixXd entries;
    double t = 0.0;
};

DesignMatrix design_matrix(const BasisSet& basis, const PathSet& paths, int date_index);

// Design matrix over an arbitrary vector of state values (used for regression
// on a subset of paths).
Eigen::MatrixXd basis_matrix(const BasisSet& basis, const Eigen::VectorXd& x);

} // namespace lsm
