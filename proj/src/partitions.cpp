#include "fkummer/partitions.hpp"

#include <cmath>
#include <sstream>

namespace fk {

IntervalPartition IntervalPartition::one(int n) {
    if (n < 1 || n > 32) throw UsageError("partition size out of range");
    return {n, 0};
}

IntervalPartition IntervalPartition::from_sizes(const std::vector<int>& sizes) {
    int n = 0;
    std::uint32_t cuts = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] < 1) throw UsageError("block sizes must be positive");
        n += sizes[k];
        if (k + 1 < sizes.size()) cuts |= 1u << (n - 1);
    }
    if (n < 1 || n > 32) throw UsageError("partition size out of range");
    return {n, cuts};
}

std::vector<std::pair<int, int>> IntervalPartition::blocks() const {
    std::vector<std::pair<int, int>> out;
    int start = 0;
    for (int i = 0; i < n - 1; ++i)
        if (cuts & (1u << i)) {
            out.emplace_back(start, i + 1);
            start = i + 1;
        }
    out.emplace_back(start, n);
    return out;
}

std::vector<int> IntervalPartition::block_sizes() const {
    std::vector<int> s;
    for (auto [a, b] : blocks()) s.push_back(b - a);
    return s;
}

int IntervalPartition::block_count() const {
    int c = 1;
    for (int i = 0; i < n - 1; ++i)
        if (cuts & (1u << i)) ++c;
    return c;
}

bool IntervalPartition::finer_than(const IntervalPartition& q) const {
    return n == q.n && (q.cuts & ~cuts) == 0;
}

std::string IntervalPartition::to_string() const {
    std::ostringstream os;
    os << '{';
    for (int i = 0; i < n; ++i) {
        os << (i + 1);
        if (i + 1 < n && (cuts & (1u << i))) os << '|';
    }
    os << '}';
    return os.str();
}

std::vector<IntervalPartition> enumerate_interval_partitions(int n) {
    if (n < 1 || n > 16) throw UsageError("enumerate_interval_partitions: n must be in [1, 16]");
    std::vector<IntervalPartition> out;
    const std::uint32_t count = 1u << (n - 1);
    out.reserve(count);
    for (std::uint32_t c = 0; c < count; ++c) out.push_back({n, c});
    return out;
}

IntervalPartition partition_join(const IntervalPartition& p, const IntervalPartition& q) {
    if (p.n != q.n) throw UsageError("partition_join: size mismatch");
    return {p.n, p.cuts & q.cuts};
}

std::string RFunc::name() const {
    if (rpow == 0 && ompow == 0) return "1";
    std::ostringstream os;
    auto part = [&](const char* base, int p) {
        if (p == 0) return;
        os << base;
        if (p != 1) os << '^' << p;
    };
    part("R", rpow);
    part("(1-R)", ompow);
    return os.str();
}

std::string Letter::name() const {
    if (family == Family::R) return f.name();
    return ypow == 1 ? "Y" : "Y^" + std::to_string(ypow);
}

MixedWord concat(const MixedWord& a, const MixedWord& b) {
    MixedWord w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

std::string word_name(const MixedWord& w) {
    std::string s;
    for (const Letter& l : w) {
        if (!s.empty()) s += ' ';
        s += l.name();
    }
    return s;
}

namespace {

template <class T, class Make>
DiscreteLaw<T> random_law(Rng& rng, Make&& atom) {
    DiscreteLaw<T> L;
    const int k = rng.uniform_int(2, 4);
    T total(0);
    for (int i = 0; i < k; ++i) {
        L.nodes.push_back(atom());
        T w = T(rng.uniform_int(1, 9));
        L.weights.push_back(w);
        total += w;
    }
    for (auto& w : L.weights) w /= total;
    return L;
}

}  // namespace

MomentOracle random_oracle(Rng& rng, bool r_below_one) {
    MomentOracle o;
    Rng rr = rng.split(1), ry = rng.split(2);
    rng.next();
    const double rlo = r_below_one ? 0.05 : 0.0, rhi = r_below_one ? 0.9 : 2.0;
    o.r = random_law<double>(rr, [&] { return rr.uniform(rlo, rhi) + (r_below_one ? 0.0 : 1e-3); });
    o.y = random_law<double>(ry, [&] { return ry.uniform(0.0, 2.0) + 1e-3; });
    for (auto& x : o.r.nodes) x = std::min(x, 2.0);
    for (auto& x : o.y.nodes) x = std::min(x, 2.0);
    return o;
}

ExactMomentOracle random_exact_oracle(Rng& rng, bool r_below_one) {
    ExactMomentOracle o;
    Rng rr = rng.split(1), ry = rng.split(2);
    rng.next();
    o.r = random_law<Rational>(rr, [&] {
        return r_below_one ? Rational(rr.uniform_int(1, 7), 8) : Rational(rr.uniform_int(1, 16), 8);
    });
    o.y = random_law<Rational>(ry, [&] { return Rational(ry.uniform_int(1, 16), 8); });
    return o;
}

double verify_product_formula(const std::vector<int>& split, const MixedWord& args, const MomentOracle& o) {
    const int n = static_cast<int>(args.size());
    if (n < 1 || n > 8) throw UsageError("verify_product_formula: n must be in [1, 8]");
    const IntervalPartition sigma = IntervalPartition::from_sizes(split);
    if (sigma.n != n) throw UsageError("verify_product_formula: split does not sum to n");

    std::vector<MixedWord> singles;
    for (const Letter& l : args) singles.push_back({l});
    const auto beta = boolean_cumulant_table(singles, o);

    std::vector<MixedWord> products;
    for (auto [a, b] : sigma.blocks()) products.emplace_back(args.begin() + a, args.begin() + b);
    const double lhs = boolean_cumulant(products, o);

    double rhs = 0;
    const IntervalPartition top = IntervalPartition::one(n);
    for (const IntervalPartition& pi : enumerate_interval_partitions(n)) {
        if (!(partition_join(pi, sigma) == top)) continue;
        double term = 1;
        for (auto [a, b] : pi.blocks()) term *= beta[a][b - 1];
        rhs += term;
    }
    return std::abs(lhs - rhs);
}

namespace {

// Fixed distinct elements of each collection.
Letter first_collection(int j, bool swap) {
    if (swap) return Letter::y(1 + (j % 3));
    return Letter::rf(RFunc{1 + (j % 3), j % 2});
}
Letter second_collection(int j, bool swap) {
    if (swap) return Letter::rf(RFunc{1 + (j % 2), (j + 1) % 2});
    return Letter::y(1 + (j % 2));
}

template <class T>
T cumulant_of(const std::vector<Letter>& letters, const BasicMomentOracle<T>& o) {
    std::vector<MixedWord> e;
    for (const Letter& l : letters) e.push_back({l});
    return boolean_cumulant(e, o);
}

template <class T>
std::pair<T, T> alternating_sides(int variant, int n, const BasicMomentOracle<T>& o, bool swap) {
    if (n < 1 || n > 6) throw UsageError("verify_alternating_formula: n must be in [1, 6]");
    // X_1..X_{n+1} from the first collection, Y_1..Y_n from the second (1-based)
    std::vector<Letter> X(static_cast<std::size_t>(n) + 2), Y(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n + 1; ++j) X[j] = first_collection(j, swap);
    for (int j = 1; j <= n; ++j) Y[j] = second_collection(j, swap);

    if (variant == 1) {
        MixedWord w;
        for (int j = 1; j <= n; ++j) {
            w.push_back(Y[j]);
            w.push_back(X[j]);
        }
        const T lhs = free_mixed_moment(w, o);
        T rhs(0);
        // 0 = j_0 < j_1 < ... < j_{k+1} = n; interior points from subsets of {1..n-1}
        for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
            std::vector<int> js{0};
            for (int i = 1; i <= n - 1; ++i)
                if (mask & (1u << (i - 1))) js.push_back(i);
            js.push_back(n);
            MixedWord xs;
            for (std::size_t t = 1; t < js.size(); ++t) xs.push_back(X[js[t]]);
            T term = free_mixed_moment(xs, o);
            for (std::size_t l = 0; l + 1 < js.size(); ++l) {
                std::vector<Letter> args;
                for (int i = js[l] + 1; i <= js[l + 1]; ++i) {
                    args.push_back(Y[i]);
                    if (i < js[l + 1]) args.push_back(X[i]);
                }
                term *= cumulant_of(args, o);
            }
            rhs += term;
        }
        return {lhs, rhs};
    }
    if (variant == 3) {
        std::vector<Letter> all;
        for (int j = 1; j <= n; ++j) {
            all.push_back(X[j]);
            all.push_back(Y[j]);
        }
        all.push_back(X[n + 1]);
        const T lhs = cumulant_of(all, o);
        T rhs(0);
        // 1 = j_1 < ... < j_k = n + 1, k >= 2; interior points from {2..n}
        for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
            std::vector<int> js{1};
            for (int i = 2; i <= n; ++i)
                if (mask & (1u << (i - 2))) js.push_back(i);
            js.push_back(n + 1);
            std::vector<Letter> xs;
            for (int j : js) xs.push_back(X[j]);
            T term = cumulant_of(xs, o);
            for (std::size_t l = 0; l + 1 < js.size(); ++l) {
                std::vector<Letter> args;
                for (int i = js[l]; i < js[l + 1]; ++i) {
                    args.push_back(Y[i]);
                    if (i + 1 < js[l + 1]) args.push_back(X[i + 1]);
                }
                term *= cumulant_of(args, o);
            }
            rhs += term;
        }
        return {lhs, rhs};
    }
    throw UsageError("verify_alternating_formula: variant must be 1 or 3");
}

}  // namespace

double verify_alternating_formula(int variant, int n, const MomentOracle& o, bool swap) {
    const auto [lhs, rhs] = alternating_sides(variant, n, o, swap);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

Rational verify_alternating_formula(int variant, int n, const ExactMomentOracle& o, bool swap) {
    const auto [lhs, rhs] = alternating_sides(variant, n, o, swap);
    return abs(lhs - rhs);
}

}  // namespace fk
