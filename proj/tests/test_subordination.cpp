#include <doctest.h>

#include <cmath>

#include "fkummer/subordination.hpp"

using namespace fk;

TEST_SUITE("subordination") {

TEST_CASE("S-transform of the product is the product of S-transforms") {
    for (std::uint64_t s = 0; s < 4; ++s) {
        Rng rng = Rng(3).split(s);
        const MomentOracle o = random_oracle(rng);
        const int n = 7;
        const SubordinationSeries sub = subordination_series_t(o, n + 1);
        const Series1 SU = s_transform_series(sub.M_U, n);
        const Series1 SR = s_transform_series(sub.M_R, n), SY = s_transform_series(sub.M_Y, n);
        CHECK(max_coeff_diff(SU, SR * SY) < 1e-9 * std::max(1.0, std::abs(SU[n])));
    }
}

TEST_CASE("exact pairs: omega coefficients are alternating Boolean cumulants") {
    Rng rng(9);
    const ExactMomentOracle o = random_exact_oracle(rng);
    const auto s = subordination_series_t(o, 6);
    CHECK(s.cumulant_residual == 0);
    const ExactSeries1 lhs = series_compose(s.M_Y, s.omega1);
    CHECK(max_coeff_diff(lhs, s.M_U) == 0);
    CHECK(max_coeff_diff(s.omega1 * s.omega2, eta_of(s.M_U).shift_up()) == 0);
}

TEST_CASE("useful identity on seeded pairs, series and pointwise") {
    const auto grid = negative_log_grid(0.05, 5, 40);
    for (std::uint64_t i = 0; i < 5; ++i) {
        Rng rng = Rng(21).split(i);
        const MomentOracle o = random_oracle(rng);
        const SubordinationPair p = subordination_series(o, 8);
        const UsefulIdentityReport r = verify_useful_identity(p, 8, grid, 0.01);
        CHECK(r.max() < 1e-9);
        CHECK(p.series.cumulant_residual < 1e-10);
    }
}

TEST_CASE("subordination values are negative and omega1 omega2 = z eta") {
    Rng rng(4);
    const SubordinationPair p = subordination_series(random_oracle(rng), 6);
    for (double z : {-0.1, -1.0, -4.0}) {
        const SubordinationPoint pt = p.at(z);
        CHECK(pt.m < 0);
        CHECK(pt.m > -1);
        CHECK(pt.omega1 < 0);
        CHECK(pt.omega2 < 0);
        CHECK(std::abs(pt.omega1 * pt.omega2 - z * pt.m / (1 + pt.m)) < 1e-12);
    }
}

TEST_CASE("eta^h constructions agree and decompose") {
    Rng rng(13);
    const ExactMomentOracle eo = random_exact_oracle(rng, true);
    for (RFunc h : {RFunc::unit(), RFunc::r(), RFunc::one_minus_r(), RFunc::r_over_one_minus_r()}) {
        const auto e = eta_h_series_t(eo, h, 5);
        CHECK(e.dual_residual == 0);
        CHECK(eta_h_decomposition_residual(eo, e) == 0);
    }
    Rng rng2(14);
    const MomentOracle o = random_oracle(rng2, true);
    const EtaH e = eta_h_series(o, RFunc::r_over_one_minus_r(), 6);
    CHECK(eta_h_decomposition_residual(o, e) < 1e-10);
}

TEST_CASE("conditional subordination phi((1 - zU)^{-1} h(R))") {
    Rng rng(17);
    const ExactMomentOracle eo = random_exact_oracle(rng, true);
    CHECK(verify_conditional_subordination_t(eo, RFunc::r(), 5) == 0);
    CHECK(verify_conditional_subordination_t(eo, RFunc::one_minus_r(), 5) == 0);
}

TEST_CASE("negative log grid") {
    const auto g = negative_log_grid(0.05, 5, 40);
    CHECK(g.size() == 40);
    CHECK(g.front() == doctest::Approx(-0.05));
    CHECK(g.back() == doctest::Approx(-5));
    CHECK_THROWS_AS(negative_log_grid(1, 0.5, 4), UsageError);
}

TEST_CASE("error contracts") {
    Rng rng(2);
    const SubordinationPair p = subordination_series(random_oracle(rng), 4);
    CHECK_THROWS_AS(p.at(0.5), DomainError);
    CHECK_THROWS_AS(verify_useful_identity(p, 6, {-1.0}), UsageError);
    CHECK_THROWS_AS(subordination_series_t(random_oracle(rng), 0), UsageError);
}

}
