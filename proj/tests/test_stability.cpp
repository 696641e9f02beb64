#include <doctest.h>

#include <cmath>
#include <limits>

#include "lsm/pricing.hpp"
#include "lsm/regress.hpp"
#include "lsm/stability.hpp"

using namespace lsm;

TEST_CASE("constant paths give infinite kappa at every interior date") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.0, 1.0};
    const PathSet ps = simulate(model, build_time_grid(1.0, 8), 30, Scheme::Euler, 1);
    const ConditionScan scan = scan_condition_numbers(ps, BasisSet{BasisFamily::Monomial, 3, {}});
    REQUIRE(scan.t.size() == 7);
    for (double k : scan.kappa) CHECK(std::isinf(k));
}

TEST_CASE("K = 1 gives kappa = 1 everywhere") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.15, 1.0};
    const PathSet ps = simulate(model, build_time_grid(1.0, 8), 30, Scheme::Euler, 1);
    const ConditionScan scan = scan_condition_numbers(ps, BasisSet{BasisFamily::Monomial, 1, {}});
    for (double k : scan.kappa) CHECK(k == 1.0);
}

TEST_CASE("parallel scan matches the serial reference bit-for-bit") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.15, 1.0};
    const PathSet ps = simulate(model, build_time_grid(1.0, 40), 2000, Scheme::Milstein, 9);
    const BasisSet basis{BasisFamily::Monomial, 3, {}};
    const ConditionScan p = scan_condition_numbers(ps, basis);
    const ConditionScan s = scan_condition_numbers_serial(ps, basis);
    CHECK(p.kappa == s.kappa);
}

TEST_CASE("small-t kappa dominates large-t kappa under the figure-1 config") {
    const ConditionScan scan =
        reproduce_figure(FigureId::Fig1, FigureOverrides{.n_paths = 5000, .seed = 1});
    REQUIRE(scan.t.size() == 99);
    CHECK(scan.kappa.front() / scan.kappa.back() >= 50.0);
}

TEST_CASE("log-log fit on synthetic scans") {
    ConditionScan scan;
    for (int i = 1; i <= 50; ++i) {
        const double t = 0.01 * i;
        scan.t.push_back(t);
        scan.kappa.push_back(1.0 / t);
    }
    const SlopeFit fit = fit_loglog_slope(scan, 0.0, 1.0);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(fit.points_used == 50);

    for (auto& k : scan.kappa) k = 7.0;
    const SlopeFit flat = fit_loglog_slope(scan, 0.0, 1.0);
    CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit requires at least two finite points") {
    ConditionScan scan;
    scan.t = {0.1, 0.2, 0.3};
    scan.kappa = {std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), 5.0};
    CHECK_THROWS_AS(fit_loglog_slope(scan, 0.0, 1.0), InsufficientDataError);
    CHECK_THROWS_AS(spearman_loglog(scan, 0.0, 1.0), InsufficientDataError);
}

TEST_CASE("figure-1 slope near -1 in the small-t window") {
    const ConditionScan scan =
        reproduce_figure(FigureId::Fig1, FigureOverrides{.n_paths = 5000, .seed = 2});
    const SlopeFit fit = fit_loglog_slope(scan, 0.009, 0.2);
    CHECK(fit.slope >= -1.3);
    CHECK(fit.slope <= -0.7);
}

TEST_CASE("figure trends are monotone decreasing, both figures, fast variant") {
    for (FigureId id : {FigureId::Fig1, FigureId::Fig2}) {
        const ConditionScan scan = reproduce_figure(id, FigureOverrides{.n_paths = 1000, .seed = 3});
        CHECK(spearman_loglog(scan, 0.009, 0.2) <= -0.95);
    }
}

TEST_CASE("blow-up is seed robust under the figure-1 config") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ConditionScan scan =
            reproduce_figure(FigureId::Fig1, FigureOverrides{.n_paths = 1000, .seed = seed});
        CHECK(spearman_loglog(scan, 0.009, 0.2) <= -0.95);
    }
}

TEST_CASE("severity grows with basis count at fixed small t") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        double kappa_at_001[3];
        for (int K = 2; K <= 4; ++K) {
            const ConditionScan scan = reproduce_figure(
                FigureId::Fig1, FigureOverrides{.n_paths = 1000, .seed = seed, .basis_count = K});
            kappa_at_001[K - 2] = scan.kappa.front(); // t = 0.01
        }
        if (kappa_at_001[2] >= kappa_at_001[1] && kappa_at_001[1] >= kappa_at_001[0]) ++hits;
    }
    CHECK(hits >= 4);
}

TEST_CASE("verify_proposition_one across families, K, and x0") {
    for (auto family : {BasisFamily::Monomial, BasisFamily::Laguerre, BasisFamily::Legendre,
                        BasisFamily::Chebyshev, BasisFamily::Hermite}) {
        for (int K : {2, 3, 4}) {
            for (double x0 : {0.5, 1.0, 2.0}) {
                const PropositionReport rep =
                    verify_proposition_one(BasisSet{family, K, {}}, x0, 100);
                INFO(to_string(family) << " K=" << K << " x0=" << x0);
                CHECK(rep.passed);
            }
        }
    }
}

TEST_CASE("proposition check: frozen singular values") {
    PropositionReport rep = verify_proposition_one(BasisSet{BasisFamily::Monomial, 3, {}}, 1.0, 100);
    CHECK(rep.leading_singular_value == doctest::Approx(std::sqrt(300.0)).epsilon(1e-12));
    CHECK(std::isinf(rep.kappa));

    rep = verify_proposition_one(BasisSet{BasisFamily::Monomial, 2, {}}, 2.0, 4);
    CHECK(rep.leading_singular_value == doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));

    rep = verify_proposition_one(BasisSet{BasisFamily::Monomial, 1, {}}, 1.0, 10);
    CHECK(rep.rank == 1);
    CHECK(rep.kappa == 1.0);
}

TEST_CASE("lsm per-date kappas equal the standalone scan") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.15, 1.0};
    const PathSet ps = simulate(model, build_time_grid(1.0, 20), 2000, Scheme::Milstein, 6);
    const BasisSet basis{BasisFamily::Monomial, 3, {}};
    const PriceEstimate est = lsm_price(ps, Payoff{PayoffKind::Put, 1.1}, basis, RatePlan{0.0},
                                        Solver::TruncatedSVD, false);
    const ConditionScan scan = scan_condition_numbers(ps, basis);
    REQUIRE(est.per_date_kappa.size() == scan.kappa.size());
    for (std::size_t i = 0; i < scan.kappa.size(); ++i) {
        if (std::isinf(scan.kappa[i]))
            CHECK(std::isinf(est.per_date_kappa[i]));
        else
            CHECK(est.per_date_kappa[i] == doctest::Approx(scan.kappa[i]).epsilon(1e-12));
    }
}

TEST_CASE("gram_at_zero times N equals A^T A at date zero") {
    const SdeModel model{SdeKind::Lognormal, 0.0, 0.15, 2.0};
    const PathSet ps = simulate(model, build_time_grid(1.0, 4), 50, Scheme::Euler, 8);
    for (auto family : {BasisFamily::Monomial, BasisFamily::Hermite}) {
        const BasisSet basis{family, 3, {}};
        const Eigen::MatrixXd A = design_matrix(basis, ps, 0).entries;
        const Eigen::MatrixXd lhs = 50.0 * gram_at_zero(basis, 2.0);
        const Eigen::MatrixXd rhs = A.transpose() * A;
        CHECK(((lhs - rhs).array().abs() <= 1e-12 * rhs.array().abs().maxCoeff()).all());
    }
}
