// Compares the serial reference kernels against the OpenMP ones and checks
// that both produce identical output.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lsm/paths.hpp"
#include "lsm/stability.hpp"

namespace {

template <typename F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif

    const lsm::SdeModel model{lsm::SdeKind::Lognormal, 0.0, 0.15, 1.0};
    const lsm::TimeGrid grid = lsm::build_time_grid(1.0, 100);
    const Eigen::Index n_paths = 30000;

    lsm::PathSet serial, parallel;
    const double t_sim_serial =
        time_ms([&] { serial = lsm::simulate_serial(model, grid, n_paths, lsm::Scheme::Milstein, 42); });
    const double t_sim_parallel =
        time_ms([&] { parallel = lsm::simulate(model, grid, n_paths, lsm::Scheme::Milstein, 42); });
    const bool sim_match = serial.values == parallel.values;
    std::printf("simulate  N=%lld M=%d: serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  identical=%s\n",
                static_cast<long long>(n_paths), grid.M, t_sim_serial, t_sim_parallel,
                t_sim_serial / t_sim_parallel, sim_match ? "yes" : "NO");

    const lsm::BasisSet basis{lsm::BasisFamily::Monomial, 3, {}};
    lsm::ConditionScan scan_s, scan_p;
    const double t_scan_serial =
        time_ms([&] { scan_s = lsm::scan_condition_numbers_serial(serial, basis); });
    const double t_scan_parallel =
        time_ms([&] { scan_p = lsm::scan_condition_numbers(serial, basis); });
    const bool scan_match = scan_s.kappa == scan_p.kappa;
    std::printf("scan      N=%lld M=%d: serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  identical=%s\n",
                static_cast<long long>(n_paths), grid.M, t_scan_serial, t_scan_parallel,
                t_scan_serial / t_scan_parallel, scan_match ? "yes" : "NO");

    return (sim_match && scan_match) ? 0 : 1;
}
