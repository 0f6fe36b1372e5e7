#pragma once

// Interval partitions, Boolean cumulants and the mixed-moment engine for a
// free pair (R, Y).
//
// Each family is modelled by a finitely supported law (nodes, weights). An
// element of the R-algebra is a function of R and therefore a vector of values
// on the R-nodes; products inside a family are pointwise and the state is the
// weighted sum. Mixed moments are obtained from the action of the word on the
// free product Fock space: letters act right to left on a stack of centered
// tensor factors, and the state is the coefficient of the vacuum.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fkummer/errors.hpp"
#include "fkummer/rng.hpp"
#include "fkummer/series.hpp"

namespace fk {

struct IntervalPartition {
    int n = 1;
    // bit i set: cut between positions i and i+1 (0-based, i < n-1)
    std::uint32_t cuts = 0;

    static IntervalPartition one(int n);
    static IntervalPartition from_sizes(const std::vector<int>& sizes);

    // [begin, end) ranges, 0-based
    std::vector<std::pair<int, int>> blocks() const;
    std::vector<int> block_sizes() const;
    int block_count() const;
    // reversed refinement order: every block of *this inside a block of q
    bool finer_than(const IntervalPartition& q) const;
    std::string to_string() const;

    friend bool operator==(const IntervalPartition& a, const IntervalPartition& b) {
        return a.n == b.n && a.cuts == b.cuts;
    }
};

std::vector<IntervalPartition> enumerate_interval_partitions(int n);
IntervalPartition partition_join(const IntervalPartition& p, const IntervalPartition& q);

// m = (m_1, ..., m_n) with m_0 = 1 implied; returns (beta_1, ..., beta_n).
template <class T>
std::vector<T> moments_to_boolean_cumulants(const std::vector<T>& m) {
    if (m.empty()) throw UsageError("moment sequence is empty");
    const std::size_t n = m.size();
    std::vector<T> b(n, T(0));
    for (std::size_t k = 1; k <= n; ++k) {
        T acc = m[k - 1];
        for (std::size_t j = 1; j < k; ++j) acc -= b[j - 1] * m[k - j - 1];
        b[k - 1] = acc;
    }
    return b;
}

template <class T>
std::vector<T> boolean_cumulants_to_moments(const std::vector<T>& b) {
    if (b.empty()) throw UsageError("cumulant sequence is empty");
    const std::size_t n = b.size();
    std::vector<T> m(n, T(0));
    for (std::size_t k = 1; k <= n; ++k) {
        T acc = b[k - 1];
        for (std::size_t j = 1; j < k; ++j) acc += b[j - 1] * m[k - j - 1];
        m[k - 1] = acc;
    }
    return m;
}

// r^rpow (1 - r)^ompow; covers 1, R, 1-R, R(1-R)^{-1}, X = R^{-1} - 1, ...
struct RFunc {
    int rpow = 0;
    int ompow = 0;

    static RFunc unit() { return {0, 0}; }
    static RFunc r(int k = 1) { return {k, 0}; }
    static RFunc one_minus_r() { return {0, 1}; }
    static RFunc r_over_one_minus_r() { return {1, -1}; }
    static RFunc x() { return {-1, 1}; }

    friend RFunc operator*(RFunc a, RFunc b) { return {a.rpow + b.rpow, a.ompow + b.ompow}; }
    friend bool operator==(RFunc a, RFunc b) { return a.rpow == b.rpow && a.ompow == b.ompow; }

    template <class T>
    T operator()(const T& v) const {
        T out(1);
        const T om = T(1) - v;
        for (int k = 0; k < (rpow < 0 ? -rpow : rpow); ++k) out = rpow > 0 ? T(out * v) : T(out / v);
        for (int k = 0; k < (ompow < 0 ? -ompow : ompow); ++k) out = ompow > 0 ? T(out * om) : T(out / om);
        return out;
    }

    std::string name() const;
};

enum class Family { R, Y };

struct Letter {
    Family family = Family::Y;
    RFunc f;       // used when family == R
    int ypow = 1;  // Y^ypow when family == Y

    static Letter rf(RFunc f = RFunc::r()) { return {Family::R, f, 0}; }
    static Letter y(int pow = 1) { return {Family::Y, RFunc::unit(), pow}; }
    std::string name() const;
};

using MixedWord = std::vector<Letter>;

MixedWord concat(const MixedWord& a, const MixedWord& b);
std::string word_name(const MixedWord& w);

template <class T>
struct DiscreteLaw {
    std::vector<T> nodes;
    std::vector<T> weights;
    // Laurent monomials v^j with min_power <= j <= max_power are integrated
    // exactly; INT_MAX / INT_MIN for an exact finitely supported law.
    int max_power = INT_MAX;
    int min_power = INT_MIN;

    T phi(const std::vector<T>& values) const {
        T acc(0);
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * values[i];
        return acc;
    }
    T moment(int k) const {
        T acc(0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            T p(1);
            for (int j = 0; j < k; ++j) p *= nodes[i];
            acc += weights[i] * p;
        }
        return acc;
    }
};

// Moment data of a free pair: laws of R and of Y.
template <class T>
struct BasicMomentOracle {
    DiscreteLaw<T> r;
    DiscreteLaw<T> y;

    // phi(f(R) R^k)
    T phi_r(RFunc f, int k = 0) const {
        T acc(0);
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            T p = f(r.nodes[i]);
            for (int j = 0; j < k; ++j) p *= r.nodes[i];
            acc += r.weights[i] * p;
        }
        return acc;
    }
    T phi_y(int k) const { return y.moment(k); }
};

using MomentOracle = BasicMomentOracle<double>;
using ExactMomentOracle = BasicMomentOracle<Rational>;

namespace detail {

template <class T>
struct Element {
    Family family;
    std::vector<T> v;
};

template <class T>
class FockEngine {
public:
    FockEngine(std::vector<Element<T>> elts, const BasicMomentOracle<T>& o) : e_(std::move(elts)), o_(o) {
        stack_.reserve(e_.size());
    }

    T run() {
        if (e_.empty()) return T(1);
        return rec(static_cast<int>(e_.size()) - 1, T(1));
    }

private:
    struct Frame {
        Family family;
        std::vector<T> v;
    };

    const DiscreteLaw<T>& law(Family f) const { return f == Family::R ? o_.r : o_.y; }

    T rec(int pos, const T& coef) {
        if (pos < 0) return stack_.empty() ? coef : T(0);
        // each remaining letter lowers the depth by at most one
        if (static_cast<int>(stack_.size()) > pos + 1) return T(0);
        const Element<T>& a = e_[static_cast<std::size_t>(pos)];
        const DiscreteLaw<T>& L = law(a.family);
        T total(0);
        if (stack_.empty() || stack_.back().family != a.family) {
            const T m = L.phi(a.v);
            if (m != T(0)) total += rec(pos - 1, T(coef * m));
            Frame f{a.family, a.v};
            for (auto& x : f.v) x -= m;
            stack_.push_back(std::move(f));
            total += rec(pos - 1, coef);
            stack_.pop_back();
        } else {
            Frame saved = stack_.back();
            std::vector<T> prod(a.v.size());
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a.v[i] * saved.v[i];
            const T m = L.phi(prod);
            stack_.pop_back();
            if (m != T(0)) total += rec(pos - 1, T(coef * m));
            Frame f{a.family, std::move(prod)};
            for (auto& x : f.v) x -= m;
            stack_.push_back(std::move(f));
            total += rec(pos - 1, coef);
            stack_.back() = std::move(saved);
        }
        return total;
    }

    std::vector<Element<T>> e_;
    const BasicMomentOracle<T>& o_;
    std::vector<Frame> stack_;
};

template <class T>
void check_depth(const MixedWord& w, const BasicMomentOracle<T>& o) {
    long rpos = 0, rneg = 0, ytot = 0;
    for (const Letter& l : w) {
        if (l.family == Family::R) {
            // (1 - R)^{-1} is not a Laurent polynomial: only exact laws integrate it
            if (l.f.ompow < 0 && o.r.max_power != INT_MAX)
                throw UsageError("moment oracle cannot integrate " + l.name());
            rpos += std::max(l.f.rpow, 0) + std::max(l.f.ompow, 0);
            rneg += std::min(l.f.rpow, 0);
        } else {
            ytot += l.ypow;
        }
    }
    if (rpos > o.r.max_power || rneg < o.r.min_power || ytot > o.y.max_power)
        throw UsageError("moment oracle is not deep enough for word " + word_name(w));
}

}  // namespace detail

// phi(word) for a word in the free pair (R, Y).
template <class T>
T free_mixed_moment(const MixedWord& w, const BasicMomentOracle<T>& o) {
    detail::check_depth(w, o);
    std::vector<detail::Element<T>> elts;
    for (const Letter& l : w) {
        const DiscreteLaw<T>& L = l.family == Family::R ? o.r : o.y;
        std::vector<T> vals(L.nodes.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (l.family == Family::R) {
                vals[i] = l.f(L.nodes[i]);
            } else {
                T p(1);
                for (int j = 0; j < l.ypow; ++j) p *= L.nodes[i];
                vals[i] = p;
            }
        }
        if (!elts.empty() && elts.back().family == l.family) {
            auto& back = elts.back().v;
            for (std::size_t i = 0; i < vals.size(); ++i) back[i] *= vals[i];
        } else {
            elts.push_back({l.family, std::move(vals)});
        }
    }
    detail::FockEngine<T> eng(std::move(elts), o);
    return eng.run();
}

// beta(i, j) for every contiguous range of entries, i <= j (0-based); entry k is
// the product of the letters of entries[k].
template <class T>
std::vector<std::vector<T>> boolean_cumulant_table(const std::vector<MixedWord>& entries,
                                                   const BasicMomentOracle<T>& o) {
    const std::size_t n = entries.size();
    if (n == 0) throw UsageError("boolean cumulant of an empty argument list");
    std::vector<std::vector<T>> mom(n, std::vector<T>(n, T(0)));
    for (std::size_t i = 0; i < n; ++i) {
        MixedWord w;
        for (std::size_t j = i; j < n; ++j) {
            w = concat(w, entries[j]);
            mom[i][j] = free_mixed_moment(w, o);
        }
    }
    std::vector<std::vector<T>> beta(n, std::vector<T>(n, T(0)));
    for (std::size_t len = 1; len <= n; ++len)
        for (std::size_t i = 0; i + len <= n; ++i) {
            const std::size_t j = i + len - 1;
            T acc = mom[i][j];
            for (std::size_t k = i; k < j; ++k) acc -= beta[i][k] * mom[k + 1][j];
            beta[i][j] = acc;
        }
    return beta;
}

template <class T>
T boolean_cumulant(const std::vector<MixedWord>& entries, const BasicMomentOracle<T>& o) {
    return boolean_cumulant_table(entries, o)[0][entries.size() - 1];
}

// beta_n(w_1, ..., w_n) with one letter per argument.
template <class T>
T boolean_cumulant_of_word(const MixedWord& w, const BasicMomentOracle<T>& o) {
    std::vector<MixedWord> entries;
    for (const Letter& l : w) entries.push_back({l});
    return boolean_cumulant(entries, o);
}

// Random free pair: 2-4 atoms per family on (0, 2]. With r_below_one the R
// atoms lie in (0.05, 0.9) so that (1 - R)^{-1} stays bounded.
MomentOracle random_oracle(Rng& rng, bool r_below_one = false);
// Exact counterpart with atoms k/8 and small integer weights.
ExactMomentOracle random_exact_oracle(Rng& rng, bool r_below_one = false);

// |beta_m(products along split) - sum over pi with pi v split = 1_n of beta_pi|
// for the letters args (n = args.size() <= 8).
double verify_product_formula(const std::vector<int>& split, const MixedWord& args,
                              const MomentOracle& o);

// Residual of the two formulas for alternating words in two free collections
// (variant 1: moment formula, variant 3: cumulant formula), n <= 6. With
// swap the roles of the families are exchanged. The floating version is
// relative to max(1, |lhs|); the exact one is |lhs - rhs|.
double verify_alternating_formula(int variant, int n, const MomentOracle& o, bool swap = false);
Rational verify_alternating_formula(int variant, int n, const ExactMomentOracle& o, bool swap = false);

}  // namespace fk
