#include <doctest.h>

#include <cmath>

#include "fkummer/partitions.hpp"

using namespace fk;

namespace {

// m_n = sum over interval partitions of the product of block cumulants
template <class T>
T moment_by_enumeration(const std::vector<T>& b, int n) {
    T acc(0);
    for (const auto& p : enumerate_interval_partitions(n)) {
        T prod(1);
        for (int s : p.block_sizes()) prod *= b[s - 1];
        acc += prod;
    }
    return acc;
}

}  // namespace

TEST_SUITE("partitions") {

TEST_CASE("interval partitions of n number 2^{n-1}") {
    for (int n = 1; n <= 10; ++n) CHECK(enumerate_interval_partitions(n).size() == (1u << (n - 1)));
}

TEST_CASE("join is the coarsest common coarsening") {
    const auto p = IntervalPartition::from_sizes({2, 1, 3});
    const auto q = IntervalPartition::from_sizes({1, 3, 2});
    const auto j = partition_join(p, q);
    CHECK(j.block_sizes() == std::vector<int>{6});
    const auto r = IntervalPartition::from_sizes({2, 4});
    CHECK(partition_join(p, r).block_sizes() == std::vector<int>{2, 4});
    CHECK(p.finer_than(partition_join(p, r)));
    CHECK(IntervalPartition::one(5).block_count() == 1);
}

TEST_CASE("cumulant recursion agrees with the partition sum") {
    const std::vector<Rational> b{Rational(1, 2), Rational(-1, 3), Rational(2), Rational(1, 5), Rational(-3, 4), Rational(1, 7)};
    const auto m = boolean_cumulants_to_moments(b);
    for (int n = 1; n <= 6; ++n) CHECK(m[n - 1] == moment_by_enumeration(b, n));
    CHECK(moments_to_boolean_cumulants(m) == b);
}

TEST_CASE("point mass and symmetric Bernoulli cumulants") {
    const std::vector<double> point{3, 9, 27, 81, 243};
    const auto b = moments_to_boolean_cumulants(point);
    CHECK(b[0] == doctest::Approx(3));
    for (int k = 1; k < 5; ++k) CHECK(std::abs(b[k]) < 1e-12);
    const std::vector<double> bern{0, 1, 0, 1, 0, 1};
    const auto c = moments_to_boolean_cumulants(bern);
    CHECK(c[1] == doctest::Approx(1));
    for (int k : {0, 2, 3, 4, 5}) CHECK(std::abs(c[k]) < 1e-15);
}

TEST_CASE("free mixed moments of short alternating words") {
    Rng rng(11);
    const ExactMomentOracle o = random_exact_oracle(rng);
    const Rational r1 = o.phi_r(RFunc::r()), r2 = o.phi_r(RFunc::r(2));
    const Rational y1 = o.phi_y(1), y2 = o.phi_y(2);
    CHECK(free_mixed_moment(MixedWord{Letter::rf(), Letter::y()}, o) == r1 * y1);
    // phi(RYRY) = phi(R^2) phi(Y)^2 + phi(R)^2 phi(Y^2) - phi(R)^2 phi(Y)^2
    const MixedWord w{Letter::rf(), Letter::y(), Letter::rf(), Letter::y()};
    CHECK(free_mixed_moment(w, o) == r2 * y1 * y1 + r1 * r1 * y2 - r1 * r1 * y1 * y1);
    // beta_2(R, Y) = phi(RY) - phi(R) phi(Y) = 0
    CHECK(boolean_cumulant_of_word(MixedWord{Letter::rf(), Letter::y()}, o) == 0);
}

TEST_CASE("product formula and alternating formulas on random pairs") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng rng = Rng(5).split(s);
        const MomentOracle o = random_oracle(rng);
        const MixedWord w{Letter::rf(), Letter::y(), Letter::y(2), Letter::rf(RFunc::r(2)), Letter::y()};
        CHECK(verify_product_formula({2, 3}, w, o) < 1e-10);
        CHECK(verify_product_formula({1, 2, 2}, w, o) < 1e-10);
        for (int n = 1; n <= 6; ++n) {
            CHECK(verify_alternating_formula(1, n, o) < 1e-10);
            CHECK(verify_alternating_formula(3, n, o, true) < 1e-10);
        }
    }
}

TEST_CASE("alternating formulas hold exactly over rationals") {
    Rng rng(12);
    const ExactMomentOracle o = random_exact_oracle(rng);
    for (int n = 1; n <= 5; ++n)
        for (bool swap : {false, true}) {
            CHECK(verify_alternating_formula(1, n, o, swap) == 0);
            CHECK(verify_alternating_formula(3, n, o, swap) == 0);
        }
}

TEST_CASE("seeded oracles are reproducible") {
    Rng a(42), b(42);
    const MomentOracle x = random_oracle(a), y = random_oracle(b);
    CHECK(x.r.nodes == y.r.nodes);
    CHECK(x.y.weights == y.y.weights);
    CHECK(Rng(1).split(3).next() == Rng(1).split(3).next());
    CHECK(Rng(1).split(3).next() != Rng(1).split(4).next());
}

TEST_CASE("error contracts") {
    CHECK_THROWS_AS(moments_to_boolean_cumulants(std::vector<double>{}), UsageError);
    Rng rng(1);
    const MomentOracle o = random_oracle(rng);
    CHECK_THROWS(verify_alternating_formula(2, 3, o));
}

}
