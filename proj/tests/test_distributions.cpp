#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "fkummer/distributions.hpp"
#include "fkummer/subordination.hpp"

using namespace fk;

namespace {

double mp_density_formula(double lambda, double s, double x) {
    const double a = s * std::pow(1 - std::sqrt(lambda), 2), b = s * std::pow(1 + std::sqrt(lambda), 2);
    if (x <= a || x >= b) return 0;
    return std::sqrt((b - x) * (x - a)) / (2 * std::numbers::pi * s * x);
}

double interior_sup(const SpectralMeasure& mu, const std::function<double(double)>& f, double a, double b) {
    double e = 0;
    for (int i = 0; i <= 500; ++i) {
        const double x = a + (b - a) * (0.001 + 0.998 * i / 500);
        e = std::max(e, std::abs(mu.density(x) - f(x)));
    }
    return e;
}

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("endpoints solve the two-equation system and the law has unit mass") {
    for (double al : {0.5, 1.5, 2.0, 3.0})
        for (double be : {-1.0, 0.0, 1.0, 2.0})
            for (double ga : {0.5, 1.0, 2.0}) {
                CAPTURE(al);
                CAPTURE(be);
                CAPTURE(ga);
                const FreeKummerParams p = FreeKummerParams::make(al, be, ga);
                CHECK(kummer_endpoint_residual(al, be, ga, {p.a, p.b}) < 1e-12);
                const SpectralMeasure mu = kummer_measure(p);
                CHECK(std::abs(mu.mass() - 1) < 1e-9);
                CHECK(mu.atom0 == doctest::Approx(std::max(0.0, 1 - al)));
                CHECK(p.delta == doctest::Approx(kummer_delta(al, be, ga)).epsilon(1e-12));
            }
}

TEST_CASE("Cauchy transform solves the quadratic and matches quadrature") {
    for (auto [al, be, ga] : std::vector<std::array<double, 3>>{{2, 1, 1}, {0.5, -1, 2}, {1, 0.5, 1}, {1, -5, 1}}) {
        const FreeKummerParams p = FreeKummerParams::make(al, be, ga);
        const SpectralMeasure mu = kummer_measure(p);
        for (double z : negative_log_grid(0.05, 10, 50)) {
            const cplx G = kummer_cauchy(p, z);
            CHECK(std::abs(kummer_quadratic_residual(p, kummer_delta(al, be, ga), z, G)) < 1e-8);
            CHECK(std::abs(G - cauchy_transform(mu, z)) < 1e-9);
        }
        const cplx w(0.7, 0.4);
        CHECK(std::abs(kummer_quadratic_residual(p, p.delta, w, kummer_cauchy(p, w))) < 1e-10);
    }
}

TEST_CASE("the 1/z expansion of the quadratic fixes m_2 from m_1") {
    for (auto [al, be, ga] : std::vector<std::array<double, 3>>{{2, 1, 1}, {1.5, -0.5, 0.7}, {3, 2, 2}}) {
        const SpectralMeasure mu = kummer_measure(al, be, ga);
        const double m1 = mu.moment(1), m2 = mu.moment(2);
        CHECK(std::abs((2 * m1 + 1) - ga * m2 - (ga - al + 1 + be) * m1 + (al - 1)) < 1e-9);
    }
}

TEST_CASE("beta = 0 reduces to the free Poisson law nu(alpha, 1/gamma)") {
    for (double al : {0.5, 2.0, 3.0}) {
        const double ga = 1.5;
        const FreeKummerParams p = FreeKummerParams::make(al, 0, ga);
        CHECK(p.a == doctest::Approx(std::pow(std::sqrt(al) - 1, 2) / ga));
        CHECK(p.b == doctest::Approx(std::pow(std::sqrt(al) + 1, 2) / ga));
        for (int i = 1; i < 50; ++i) {
            const double x = p.a + (p.b - p.a) * i / 50;
            CHECK(kummer_density(p, x) == doctest::Approx(mp_density_formula(al, 1 / ga, x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("alpha = 1 closed-form endpoints") {
    // a, b = -1 + (1 -+ sqrt(1 - beta))^2 / gamma
    for (auto [be, ga] : std::vector<std::pair<double, double>>{{-5, 1}, {-8, 2}, {-20, 0.5}}) {
        const Endpoints e = kummer_endpoints(1, be, ga);
        CHECK(std::abs(e.a - (-1 + std::pow(1 - std::sqrt(1 - be), 2) / ga)) < 1e-12);
        CHECK(std::abs(e.b - (-1 + std::pow(1 + std::sqrt(1 - be), 2) / ga)) < 1e-12);
    }
}

TEST_CASE("K(1, beta, gamma) is a shifted free Poisson law beyond the threshold") {
    const double be = -5, ga = 1;
    const FreeKummerParams p = FreeKummerParams::make(1, be, ga);
    CHECK(p.regime == KummerRegime::ShiftedPoisson);
    const SpectralMeasure mu = kummer_measure(p);
    const double e = interior_sup(mu, [&](double x) { return mp_density_formula(1 - be, 1 / ga, x + 1); }, p.a, p.b);
    CHECK(e < 1e-10);
}

TEST_CASE("sigma regime: unit mass from the closed-form integrals") {
    for (auto [be, ga] : std::vector<std::pair<double, double>>{{0.5, 1}, {-1, 1}, {2, 0.5}}) {
        const SigmaCheck s = sigma_regime_check(be, ga);
        CHECK(s.nonnegative);
        CHECK(ga * s.b / 2 + be - be / std::sqrt(s.b + 1) == doctest::Approx(2));
        // mass = sigma b / 4 - beta (sqrt(1+b) - 1)^2 / (4 sqrt(b+1))
        const double mass = s.sigma * s.b / 4 - be * std::pow(std::sqrt(1 + s.b) - 1, 2) / (4 * std::sqrt(s.b + 1));
        CHECK(mass == doctest::Approx(1).epsilon(1e-12));
        CHECK(kummer_measure(1, be, ga).mass() == doctest::Approx(1).epsilon(1e-9));
    }
}

TEST_CASE("sign of sigma follows the threshold 1 - beta <= (1 + sqrt(gamma))^2") {
    for (double ga : {0.5, 1.0, 2.0}) {
        const double edge = -ga - 2 * std::sqrt(ga);
        CHECK(std::abs(sigma_regime_check(edge, ga).sigma) < 1e-10);
        for (double d : {-2.0, -0.3, 0.3, 2.0}) {
            const SigmaCheck s = sigma_regime_check(edge + d, ga);
            CHECK(s.nonnegative == (d > 0));
            CHECK((s.sigma >= 0) == (d > 0));
        }
    }
}

TEST_CASE("density from the quadratic matches the closed form") {
    for (auto [al, be, ga] : std::vector<std::array<double, 3>>{{2, 1, 1}, {1.5, -0.5, 1}, {0.75, 1.25, 1}}) {
        const FreeKummerParams p = FreeKummerParams::make(al, be, ga);
        const SpectralMeasure mu = kummer_from_quadratic(al, be, ga, p.delta);
        CHECK(interior_sup(mu, [&](double x) { return kummer_density(p, x); }, p.a, p.b) < 1e-6);
        CHECK(std::abs(mu.atom0 - p.atom0()) < 1e-6);
    }
}

TEST_CASE("pushforward of X to (1 + X)^{-1}") {
    const SpectralMeasure mu_X = kummer_measure(2, 0.5, 1);
    const SpectralMeasure mu_R = pushforward_resolvent_shift(mu_X);
    CHECK(mu_R.mass() == doctest::Approx(1).epsilon(1e-9));
    for (int k = 1; k <= 3; ++k) {
        const double want = mu_X.integrate([k](double x) { return std::pow(1 / (1 + x), k); });
        CHECK(mu_R.moment(k) == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("error contracts") {
    CHECK_THROWS_AS(FreeKummerParams::make(-1, 1, 1), DomainError);
    CHECK_THROWS_AS(FreeKummerParams::make(1, 1, 0), DomainError);
    const FreeKummerParams p = FreeKummerParams::make(2, 1, 1);
    CHECK_THROWS_AS(kummer_cauchy(p, cplx(0.5 * (p.a + p.b))), DomainError);
    CHECK_THROWS_AS(kummer_from_quadratic(0.5, -1, 1, kummer_delta(0.5, -1, 1)), DomainError);
    CHECK_THROWS_AS(kummer_from_quadratic(2, 1, 1, p.delta + 0.5), ValidationError);
    CHECK_THROWS_AS(pushforward_resolvent_shift(kummer_measure(0.5, 1, 1)), DomainError);
}

}
