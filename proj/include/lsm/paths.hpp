#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace lsm {

enum class SdeKind { Lognormal, Arithmetic };
enum class Scheme { Euler, Milstein };

// Scalar diffusion with constant coefficients.
// Lognormal: dX = mu*X dt + sigma*X dW; Arithmetic: dX = mu dt + sigma dW.
struct SdeModel {
    SdeKind kind = SdeKind::Lognormal;
    double mu = 0.0;
    double sigma = 0.0; // >= 0
    double x0 = 1.0;    // > 0

    void validate() const;
};

// Uniform grid t_m = T*m/M, m = 0..M.
struct TimeGrid {
    double T = 0.0;
    int M = 0;
    std::vector<double> nodes;

    double dt() const { return T / M; }
};

TimeGrid build_time_grid(double T, int M);

// N x (M+1) matrix of simulated values, row n column m = X^n_{t_m}.
// Immutable after construction; safe to share read-only.
struct PathSet {
    TimeGrid grid;
    Eigen::MatrixXd values;
    std::uint64_t seed = 0;

    Eigen::Index n_paths() const { return values.rows(); }
};

// Parallel across paths; output is a pure function of the arguments,
// identical for any thread count.
PathSet simulate(const SdeModel& model, const TimeGrid& grid, Eigen::Index n_paths,
                 Scheme scheme, std::uint64_t seed);

// Serial reference kernel, kept for testing against the parallel one.
PathSet simulate_serial(const SdeModel& model, const TimeGrid& grid, Eigen::Index n_paths,
                        Scheme scheme, std::uint64_t seed);

} // namespace lsm
