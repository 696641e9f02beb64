#include "lsm/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace lsm {

BasisFamily basis_family_from_string(const std::string& name) {
    if (name == "monomial") return BasisFamily::Monomial;
    if (name == "laguerre") return BasisFamily::Laguerre;
    if (name == "legendre") return BasisFamily::Legendre;
    if (name == "chebyshev") return BasisFamily::Chebyshev;
    if (name == "hermite") return BasisFamily::Hermite;
    throw std::invalid_argument("unknown basis family: " + name);
}

std::string to_string(BasisFamily family) {
    switch (family) {
        case BasisFamily::Monomial: return "monomial";
        case BasisFamily::Laguerre: return "laguerre";
        case BasisFamily::Legendre: return "legendre";
        case BasisFamily::Chebyshev: return "chebyshev";
        case BasisFamily::Hermite: return "hermite";
    }
    throw std::logic_error("unreachable");
}

void BasisSet::validate() const {
    if (K < 1) throw std::invalid_argument("BasisSet: K must be >= 1");
    if (!std::isfinite(rescale.scale) || !std::isfinite(rescale.shift))
        throw std::invalid_argument("BasisSet: rescale must be finite");
}

void evaluate_basis(const BasisSet& basis, double x, double* out) {
    if (!std::isfinite(x)) throw std::invalid_argument("evaluate_basis: non-finite input");
    basis.validate();
    const int K = basis.K;
    const double u = basis.rescale.scale * x + basis.rescale.shift;

    out[0] = 1.0;
    if (K == 1) return;

    switch (basis.family) {
        case BasisFamily::Monomial:
            for (int k = 1; k < K; ++k) out[k] = out[k - 1] * u;
            break;
        case BasisFamily::Laguerre:
            // (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}
            out[1] = 1.0 - u;
            for (int n = 1; n + 1 < K; ++n)
                out[n + 1] = ((2.0 * n + 1.0 - u) * out[n] - n * out[n - 1]) / (n + 1.0);
            break;
        case BasisFamily::Legendre:
            // (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}
            out[1] = u;
            for (int n = 1; n + 1 < K; ++n)
                out[n + 1] = ((2.0 * n + 1.0) * u * out[n] - n * out[n - 1]) / (n + 1.0);
            break;
        case BasisFamily::Chebyshev:
            // T_{n+1} = 2x T_n - T_{n-1}
            out[1] = u;
            for (int n = 1; n + 1 < K; ++n) out[n + 1] = 2.0 * u * out[n] - out[n - 1];
            break;
        case BasisFamily::Hermite:
            // He_{n+1} = x He_n - n He_{n-1}
            out[1] = u;
            for (int n = 1; n + 1 < K; ++n) out[n + 1] = u * out[n] - n * out[n - 1];
            break;
    }
}

std::vector<double> evaluate_basis(const BasisSet& basis, double x) {
    std::vector<double> out(basis.K);
    evaluate_basis(basis, x, out.data());
    return out;
}

Eigen::MatrixXd basis_matrix(const BasisSet& basis, const Eigen::VectorXd& x) {
    basis.validate();
    Eigen::MatrixXd A(x.size(), basis.K);
    std::vector<double> row(basis.K);
    for (Eigen::Index n = 0; n < x.size(); ++n) {
        evaluate_basis(basis, x(n), row.data());
        for (int k = 0; k < basis.K; ++k) A(n, k) = row[k];
    }
    return A;
}

DesignMatrix design_matrix(const BasisSet& basis, const PathSet& paths, int date_index) {
    if (date_index < 0 || date_index > paths.grid.M)
        throw std::invalid_argument("design_matrix: date_index out of range");
    DesignMatrix dm;
    dm.t = paths.grid.nodes[date_index];
    dm.entries = basis_matrix(basis, paths.values.col(date_index));
    return dm;
}

} // namespace lsm
