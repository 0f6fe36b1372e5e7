#include <doctest.h>

#include <cmath>

#include "fkummer/series.hpp"

using namespace fk;

namespace {

Rational binom(int n, int k) {
    Rational r(1);
    for (int i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
    return r;
}

Rational catalan(int n) { return binom(2 * n, n) / Rational(n + 1); }

}  // namespace

TEST_SUITE("series") {

TEST_CASE("geometric reciprocal is 1 - a z") {
    const ExactSeries1 g = ExactSeries1::geometric(Rational(3, 7), 10);
    const ExactSeries1 r = series_reciprocal(g);
    CHECK(r[0] == 1);
    CHECK(r[1] == Rational(-3, 7));
    for (int k = 2; k <= 10; ++k) CHECK(r[k] == 0);
}

TEST_CASE("reversion of z - z^2 gives Catalan numbers") {
    ExactSeries1 s(12);
    s[1] = 1;
    s[2] = -1;
    const ExactSeries1 t = series_revert(s);
    for (int k = 1; k <= 12; ++k) CHECK(t[k] == catalan(k - 1));
    const ExactSeries1 id = series_compose(s, t);
    CHECK(id.coeffs() == ExactSeries1::identity(12).coeffs());
}

TEST_CASE("composition with z/(1-z) matches binomial sums") {
    // 1/(1 - z/(1-z)) = (1-z)/(1-2z): coefficients 2^{k-1} for k >= 1
    const int n = 10;
    ExactSeries1 outer = ExactSeries1::geometric(Rational(1), n);
    ExactSeries1 inner = ExactSeries1::geometric(Rational(1), n).shift_up();
    const ExactSeries1 c = series_compose(outer, inner);
    CHECK(c[0] == 1);
    Rational p(1);
    for (int k = 1; k <= n; ++k) {
        CHECK(c[k] == p);
        p *= 2;
    }
}

TEST_CASE("derivative and evaluate agree with a polynomial") {
    Series1 s(std::vector<std::complex<double>>{1.0, 2.0, 0.0, -1.0});
    CHECK(std::abs(s.evaluate(std::complex<double>(0.5)) - (1 + 1 - 0.125)) < 1e-15);
    const Series1 d = series_derivative(s);
    CHECK(std::abs(d.evaluate(std::complex<double>(0.5)) - (2 - 0.75)) < 1e-15);
}

TEST_CASE("divided differences telescope exactly") {
    const int n = 8;
    ExactSeries1 f(n);
    for (int k = 0; k <= n; ++k) f[k] = Rational(k * k + 1, k + 2);
    const ExactSeries2 d = divided_difference(f);
    // (z - w) DD[f] = f(z) - f(w)
    const ExactSeries2 back = d.truncated(n).times_z_minus_w();
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            Rational want = (j == 0 && i > 0 ? f[i] : Rational(0)) - (i == 0 && j > 0 ? f[j] : Rational(0));
            CHECK(back.at(i, j) == want);
        }
    // diagonal limit f'(z)
    const double z = 0.3;
    const double diag = d.evaluate(z, z);
    double fp = 0;
    for (int k = 1; k <= n; ++k) fp += k * f[k].convert_to<double>() * std::pow(z, k - 1);
    CHECK(std::abs(diag - fp) < 1e-12);
}

TEST_CASE("cross divided difference equals z w DD[f/z]") {
    const int n = 7;
    ExactSeries1 f(n);
    for (int k = 1; k <= n; ++k) f[k] = Rational(1, k);
    const ExactSeries2 c = cross_divided_difference(f);
    const double z = 0.2, w = -0.35;
    double fz = 0, fw = 0;
    for (int k = 1; k <= n; ++k) {
        fz += std::pow(z, k) / k;
        fw += std::pow(w, k) / k;
    }
    CHECK(std::abs(c.evaluate(z, w) - (w * fz - z * fw) / (z - w)) < 1e-5);
}

TEST_CASE("bivariate reciprocal") {
    ExactSeries2 s = ExactSeries2::constant(Rational(1), 6);
    s.at(1, 0) = Rational(-1);
    s.at(0, 1) = Rational(-1);
    // 1/(1 - z - w) = sum binom(i+j, i) z^i w^j
    const ExactSeries2 r = series_reciprocal(s);
    for (int i = 0; i <= 6; ++i)
        for (int j = 0; i + j <= 6; ++j) CHECK(r.at(i, j) == binom(i + j, i));
}

TEST_CASE("error contracts") {
    CHECK_THROWS_AS(ExactSeries1(-1), UsageError);
    ExactSeries1 s(4);
    CHECK_THROWS_AS(series_reciprocal(s), DomainError);
    CHECK_THROWS_AS(series_revert(s), DomainError);
    CHECK_THROWS_AS(s.coefficient(5), UsageError);
    CHECK_THROWS_AS(s * ExactSeries1(3), UsageError);
    ExactSeries1 c = ExactSeries1::constant(Rational(1), 4);
    CHECK_THROWS_AS(series_compose(s, c), DomainError);
}

}
