#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fkummer/distributions.hpp"

using namespace fk;

namespace {

double narayana_moment(double lambda, double s, int n) {
    // sum_k N(n, k) lambda^k s^n with N(n, k) = C(n,k) C(n,k-1) / n
    double acc = 0;
    for (int k = 1; k <= n; ++k) {
        double c1 = 1, c2 = 1;
        for (int i = 1; i <= k; ++i) c1 = c1 * (n - k + i) / i;
        for (int i = 1; i <= k - 1; ++i) c2 = c2 * (n - k + 1 + i) / i;
        acc += c1 * c2 / n * std::pow(lambda, k);
    }
    return acc * std::pow(s, n);
}

double mp_density_formula(double lambda, double s, double x) {
    const double a = s * std::pow(1 - std::sqrt(lambda), 2), b = s * std::pow(1 + std::sqrt(lambda), 2);
    if (x <= a || x >= b) return 0;
    return std::sqrt((b - x) * (x - a)) / (2 * std::numbers::pi * s * x);
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("free Poisson moments by quadrature match Narayana sums") {
    for (auto [lambda, s] : std::vector<std::pair<double, double>>{{1, 1}, {0.5, 1}, {2, 0.7}, {3.5, 2}}) {
        const SpectralMeasure mu = mp_measure(FreePoissonParams(lambda, s));
        CHECK(std::abs(mu.mass() - 1) < 1e-10);
        for (int n = 1; n <= 8; ++n) {
            const double want = narayana_moment(lambda, s, n);
            CHECK(std::abs(mu.moment(n) - want) <= 1e-9 * want);
            CHECK(std::abs(mp_moment(FreePoissonParams(lambda, s), n) - want) <= 1e-12 * want);
        }
    }
    const SpectralMeasure std_mp = mp_measure(FreePoissonParams(1, 1));
    const std::vector<double> catalan{1, 2, 5, 14, 42};
    for (int n = 1; n <= 5; ++n) CHECK(std_mp.moment(n) == doctest::Approx(catalan[n - 1]).epsilon(1e-10));
}

TEST_CASE("Stieltjes inversion recovers the free Poisson density and atom") {
    for (auto [lambda, s] : std::vector<std::pair<double, double>>{{2, 1}, {0.5, 1}}) {
        const FreePoissonParams p(lambda, s);
        const ComplexFn G = [p](cplx z) { return mp_cauchy(p, z); };
        const SpectralMeasure mu = stieltjes_invert(G, p.lo(), p.hi());
        const double w = p.hi() - p.lo();
        double err = 0;
        for (int i = 0; i <= 400; ++i) {
            const double x = p.lo() + w * (0.001 + 0.998 * i / 400);
            err = std::max(err, std::abs(mu.density(x) - mp_density_formula(lambda, s, x)));
        }
        CHECK(err < 1e-6);
        CHECK(std::abs(mu.atom0 - p.atom0()) < 1e-6);
    }
}

TEST_CASE("Cauchy transform of the quadrature measure matches the closed form") {
    const FreePoissonParams p(1.7, 0.8);
    const SpectralMeasure mu = mp_measure(p);
    for (cplx z : {cplx(-0.5), cplx(-3), cplx(1, 2), cplx(8, 0.1)}) CHECK(std::abs(cauchy_transform(mu, z) - mp_cauchy(p, z)) < 1e-10);
    // G(1/z) = z (1 + M(z))
    const cplx z(-0.3, 0.2);
    CHECK(std::abs(cauchy_transform(mu, 1.0 / z) - z * (1.0 + moment_transform(mu, z))) < 1e-12);
}

TEST_CASE("S-transform of free Poisson is 1/(s z + lambda s)") {
    const double lambda = 2.5, s = 0.6;
    const SpectralMeasure mu = mp_measure(FreePoissonParams(lambda, s));
    const Series1 S = s_transform_series(mu, 6);
    // 1/(lambda s (1 + z/lambda)) = (1/(lambda s)) sum (-z/lambda)^k
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(S[k].real() - std::pow(-1 / lambda, k) / (lambda * s)) < 1e-9);
}

TEST_CASE("eta coefficients are Boolean cumulants") {
    const std::vector<double> m{1, 3, 11, 45, 197};
    const Series1 eta = eta_series(moment_series(m));
    const auto b = moments_to_boolean_cumulants(m);
    for (int k = 1; k <= 5; ++k) CHECK(std::abs(eta[k].real() - b[k - 1]) < 1e-12);
}

TEST_CASE("moment transform inversion on the negative axis") {
    const SpectralMeasure mu = mp_measure(FreePoissonParams(2, 1));
    const RealFn M = [&mu](double t) { return moment_transform(mu, t).real(); };
    for (double z : {-0.01, -0.4, -3.0, -40.0}) {
        const double m = M(z);
        CHECK(std::abs(invert_M_on_negative_axis(M, m) - z) <= 1e-9 * std::abs(z));
    }
}

TEST_CASE("Gauss rule integrates Laurent monomials exactly") {
    const std::vector<double> x{0.2, 0.5, 0.9, 1.4, 2.0, 3.1};
    const std::vector<double> w{0.1, 0.2, 0.15, 0.25, 0.2, 0.1};
    const DiscreteLaw<double> g = gauss_rule(x, w, 3, -2);
    for (int j = -2; j <= 3; ++j) {
        double want = 0, got = 0;
        for (std::size_t i = 0; i < x.size(); ++i) want += w[i] * std::pow(x[i], j);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) got += g.weights[i] * std::pow(g.nodes[i], j);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("error contracts") {
    CHECK_THROWS_AS(FreePoissonParams(-1, 1), DomainError);
    CHECK_THROWS_AS(FreePoissonParams(1, 0), DomainError);
}

}
