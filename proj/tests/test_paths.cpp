#include <doctest.h>

#include <cmath>

#include "lsm/paths.hpp"
#include "lsm/rng.hpp"

using namespace lsm;

TEST_CASE("build_time_grid produces exact uniform nodes") {
    const TimeGrid g = build_time_grid(1.0, 4);
    REQUIRE(g.nodes.size() == 5);
    CHECK(g.nodes[0] == 0.0);
    CHECK(g.nodes[1] == 0.25);
    CHECK(g.nodes[2] == 0.5);
    CHECK(g.nodes[3] == 0.75);
    CHECK(g.nodes[4] == 1.0);

    const TimeGrid g100 = build_time_grid(1.0, 100);
    CHECK(g100.nodes.size() == 101);
    CHECK(g100.dt() == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(g100.nodes[100] == 1.0); // endpoint exact, no cumulative rounding

    const TimeGrid g2 = build_time_grid(2.0, 2);
    CHECK(g2.nodes[0] == 0.0);
    CHECK(g2.nodes[1] == 1.0);
    CHECK(g2.nodes[2] == 2.0);
}

TEST_CASE("build_time_grid rejects bad arguments") {
    CHECK_THROWS_AS(build_time_grid(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_time_grid(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_time_grid(1.0, 1), std::invalid_argument);
}

TEST_CASE("zero drift and volatility gives constant paths") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.0, 1.0};
    const TimeGrid grid = build_time_grid(1.0, 10);
    for (Scheme scheme : {Scheme::Euler, Scheme::Milstein}) {
        const PathSet ps = simulate(model, grid, 10, scheme, 7);
        REQUIRE(ps.values.rows() == 10);
        REQUIRE(ps.values.cols() == 11);
        CHECK((ps.values.array() == 1.0).all());
    }
}

TEST_CASE("single Milstein step matches the hand-computed update") {
    // X=1, mu=0, sigma=0.15, dt=0.01, dW=0.2:
    // X' = 1 + 0.03 + 0.5*0.0225*(0.04 - 0.01) = 1.0303375
    const double x = 1.0, sigma = 0.15, dt = 0.01, dw = 0.2;
    const double next = x * (1.0 + sigma * dw + 0.5 * sigma * sigma * (dw * dw - dt));
    CHECK(next == doctest::Approx(1.0303375).epsilon(1e-15));
}

TEST_CASE("figure-1 shape: 30000 x 101, column 0 is x0") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.15, 1.0};
    const TimeGrid grid = build_time_grid(1.0, 100);
    const PathSet ps = simulate(model, grid, 30000, Scheme::Milstein, 1);
    CHECK(ps.values.rows() == 30000);
    CHECK(ps.values.cols() == 101);
    CHECK((ps.values.col(0).array() == 1.0).all());
}

TEST_CASE("simulate rejects zero paths") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.15, 1.0};
    const TimeGrid grid = build_time_grid(1.0, 4);
    CHECK_THROWS_AS(simulate(model, grid, 0, Scheme::Euler, 1), std::invalid_argument);
}

TEST_CASE("reproducibility: identical arguments, bit-identical output") {
    const SdeModel model{SdeKind::Lognormal, 0.05, 0.2, 1.0};
    const TimeGrid grid = build_time_grid(1.0, 20);
    const PathSet a = simulate(model, grid, 500, Scheme::Milstein, 99);
    const PathSet b = simulate(model, grid, 500, Scheme::Milstein, 99);
    CHECK(a.values == b.values);
}

TEST_CASE("parallel kernel matches the serial reference bit-for-bit") {
    const SdeModel model{SdeKind::Arithmetic, 0.01, 0.03, 1.0};
    const TimeGrid grid = build_time_grid(1.0, 50);
    const PathSet p = simulate(model, grid, 2000, Scheme::Euler, 5);
    const PathSet s = simulate_serial(model, grid, 2000, Scheme::Euler, 5);
    CHECK(p.values == s.values);
}

TEST_CASE("substream independence: growing N keeps the first paths unchanged") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.15, 1.0};
    const TimeGrid grid = build_time_grid(1.0, 10);
    const PathSet small = simulate(model, grid, 100, Scheme::Euler, 3);
    const PathSet big = simulate(model, grid, 250, Scheme::Euler, 3);
    CHECK(big.values.topRows(100) == small.values);
}

TEST_CASE("Milstein equals Euler when sigma = 0 or kind is arithmetic") {
    const TimeGrid grid = build_time_grid(1.0, 10);
    {
        const SdeModel model{SdeKind::Lognormal, 0.05, 0.0, 1.0};
        CHECK(simulate(model, grid, 50, Scheme::Euler, 1).values ==
              simulate(model, grid, 50, Scheme::Milstein, 1).values);
    }
    {
        const SdeModel model{SdeKind::Arithmetic, 0.05, 0.1, 1.0};
        CHECK(simulate(model, grid, 50, Scheme::Euler, 1).values ==
              simulate(model, grid, 50, Scheme::Milstein, 1).values);
    }
}

TEST_CASE("weak-error sanity: mean of X_T near x0*exp(mu*T)") {
    const SdeModel model{SdeKind::Lognormal, 0.05, 0.2, 1.0};
    const TimeGrid grid = build_time_grid(1.0, 50);
    const PathSet ps = simulate(model, grid, 100000, Scheme::Milstein, 11);
    const Eigen::VectorXd xt = ps.values.col(grid.M);
    const double mean = xt.mean();
    const double sd = std::sqrt((xt.array() - mean).square().sum() / (xt.size() - 1));
    const double se = sd / std::sqrt(static_cast<double>(xt.size()));
    CHECK(std::abs(mean - model.x0 * std::exp(model.mu * grid.T)) < 4.0 * se);
}

TEST_CASE("arithmetic paths are not floored at zero") {
    const SdeModel model{SdeKind::Arithmetic, 0.0, 1.0, 0.01};
    const TimeGrid grid = build_time_grid(1.0, 10);
    const PathSet ps = simulate(model, grid, 200, Scheme::Euler, 2);
    CHECK(ps.values.minCoeff() < 0.0);
}

TEST_CASE("normal draws pass basic moment checks") {
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng::normal_draw(123, i, 0);
        sum += z;
        sum2 += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("inverse normal CDF round-trips the normal CDF") {
    for (double p : {1e-10, 1e-4, 0.02, 0.3, 0.5, 0.7, 0.98, 1.0 - 1e-4}) {
        const double x = rng::inverse_normal_cdf(p);
        const double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
        CHECK(back == doctest::Approx(p).epsilon(1e-12));
    }
}
