#include "lsm/paths.hpp"

#include <cmath>
#include <stdexcept>

#include "lsm/rng.hpp"

namespace lsm {

void SdeModel::validate() const {
    if (sigma < 0.0) throw std::invalid_argument("SdeModel: sigma must be >= 0");
    if (!(x0 > 0.0)) throw std::invalid_argument("SdeModel: x0 must be > 0");
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(x0))
        throw std::invalid_argument("SdeModel: coefficients must be finite");
}

TimeGrid build_time_grid(double T, int M) {
    if (!(T > 0.0)) throw std::invalid_argument("build_time_grid: T must be > 0");
    if (M < 2) throw std::invalid_argument("build_time_grid: M must be >= 2");
    TimeGrid grid;
    grid.T = T;
    grid.M = M;
    grid.nodes.resize(M + 1);
    for (int m = 0; m <= M; ++m) grid.nodes[m] = T * m / M; // no cumulative rounding
    return grid;
}

namespace {

// One full path, row-local. Each (path, step) increment comes from its own
// counter-based substream, so scheduling cannot affect the output.
void step_path(const SdeModel& model, const TimeGrid& grid, Scheme scheme,
               std::uint64_t seed, Eigen::Index path, double* row) {
    const double dt = grid.dt();
    const double sqrt_dt = std::sqrt(dt);
    double x = model.x0;
    row[0] = x;
    for (int m = 0; m < grid.M; ++m) {
        const double dw = sqrt_dt * rng::normal_draw(seed, static_cast<std::uint64_t>(path),
                                                     static_cast<std::uint64_t>(m));
        if (model.kind == SdeKind::Lognormal) {
            double incr = model.mu * dt + model.sigma * dw;
            if (scheme == Scheme::Milstein)
                incr += 0.5 * model.sigma * model.sigma * (dw * dw - dt);
            x = x * (1.0 + incr);
        } else {
            // Arithmetic: Milstein correction vanishes (constant diffusion)
            x = x + model.mu * dt + model.sigma * dw;
        }
        row[m + 1] = x;
    }
}

PathSet simulate_impl(const SdeModel& model, const TimeGrid& grid, Eigen::Index n_paths,
                      Scheme scheme, std::uint64_t seed, bool parallel) {
    model.validate();
    if (grid.nodes.size() != static_cast<std::size_t>(grid.M) + 1 || grid.M < 2)
        throw std::invalid_argument("simulate: invalid time grid");
    if (n_paths < 1) throw std::invalid_argument("simulate: n_paths must be >= 1");

    PathSet ps;
    ps.grid = grid;
    ps.seed = seed;
    ps.values.resize(n_paths, grid.M + 1);

    // Row-major access pattern; Eigen's default is column-major, so hand each
    // path a strided row buffer instead.
    std::vector<double> row(grid.M + 1);
    if (parallel) {
#pragma omp parallel for schedule(static) firstprivate(row)
        for (Eigen::Index n = 0; n < n_paths; ++n) {
            step_path(model, grid, scheme, seed, n, row.data());
            for (int m = 0; m <= grid.M; ++m) ps.values(n, m) = row[m];
        }
    } else {
        for (Eigen::Index n = 0; n < n_paths; ++n) {
            step_path(model, grid, scheme, seed, n, row.data());
            for (int m = 0; m <= grid.M; ++m) ps.values(n, m) = row[m];
        }
    }
    return ps;
}

} // namespace

PathSet simulate(const SdeModel& model, const TimeGrid& grid, Eigen::Index n_paths,
                 Scheme scheme, std::uint64_t seed) {
    return simulate_impl(model, grid, n_paths, scheme, seed, true);
}

PathSet simulate_serial(const SdeModel& model, const TimeGrid& grid, Eigen::Index n_paths,
                        Scheme scheme, std::uint64_t seed) {
    return simulate_impl(model, grid, n_paths, scheme, seed, false);
}

} // namespace lsm
