#pragma once

// Truncated power series in one variable (degree <= N) and two variables
// (total degree <= N). Coefficient type is a template parameter so the same
// code runs in complex floating point and in exact rationals.

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fkummer/errors.hpp"

namespace fk {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int default_series_order = 12;

template <class T>
class BasicSeries1 {
public:
    explicit BasicSeries1(int order = default_series_order) {
        if (order < 0) throw UsageError("series order must be >= 0");
        c_.assign(static_cast<std::size_t>(order) + 1, T(0));
    }
    explicit BasicSeries1(std::vector<T> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw UsageError("series needs at least one coefficient");
    }

    static BasicSeries1 identity(int order) {
        BasicSeries1 s(order);
        if (order >= 1) s.c_[1] = T(1);
        return s;
    }
    static BasicSeries1 constant(const T& v, int order) {
        BasicSeries1 s(order);
        s.c_[0] = v;
        return s;
    }
    // 1/(1 - a z) truncated.
    static BasicSeries1 geometric(const T& a, int order) {
        BasicSeries1 s(order);
        T p(1);
        for (int k = 0; k <= order; ++k) {
            s.c_[k] = p;
            p = p * a;
        }
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<T>& coeffs() const { return c_; }

    const T& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    T& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    T coefficient(int i) const {
        if (i < 0 || i > order()) throw UsageError("coefficient index outside truncation order");
        return c_[static_cast<std::size_t>(i)];
    }

    BasicSeries1 truncated(int order) const {
        BasicSeries1 s(order);
        for (int k = 0; k <= order && k <= this->order(); ++k) s.c_[k] = c_[k];
        return s;
    }

    // f(z)/z for f(0) = 0; one order is lost.
    BasicSeries1 shift_down() const {
        if (c_[0] != T(0)) throw DomainError("shift_down needs zero constant term");
        if (order() == 0) return BasicSeries1(0);
        BasicSeries1 s(order() - 1);
        for (int k = 0; k < order(); ++k) s.c_[k] = c_[k + 1];
        return s;
    }
    // z f(z), truncated at the same order.
    BasicSeries1 shift_up() const {
        BasicSeries1 s(order());
        for (int k = 1; k <= order(); ++k) s.c_[k] = c_[k - 1];
        return s;
    }

    template <class Z>
    Z evaluate(const Z& z) const {
        Z acc(0);
        for (int k = order(); k >= 0; --k) acc = acc * z + Z(c_[k]);
        return acc;
    }

    BasicSeries1& operator+=(const BasicSeries1& o) {
        check_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    BasicSeries1& operator-=(const BasicSeries1& o) {
        check_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    BasicSeries1& operator*=(const T& a) {
        for (auto& v : c_) v *= a;
        return *this;
    }

    friend BasicSeries1 operator+(BasicSeries1 a, const BasicSeries1& b) { return a += b; }
    friend BasicSeries1 operator-(BasicSeries1 a, const BasicSeries1& b) { return a -= b; }
    friend BasicSeries1 operator-(BasicSeries1 a) {
        for (auto& v : a.c_) v = -v;
        return a;
    }
    friend BasicSeries1 operator*(BasicSeries1 a, const T& s) { return a *= s; }
    friend BasicSeries1 operator*(const T& s, BasicSeries1 a) { return a *= s; }
    friend BasicSeries1 operator*(const BasicSeries1& a, const BasicSeries1& b) {
        a.check_same(b);
        const int n = a.order();
        BasicSeries1 r(n);
        for (int i = 0; i <= n; ++i) {
            if (a.c_[i] == T(0)) continue;
            for (int j = 0; i + j <= n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }

    void check_same(const BasicSeries1& o) const {
        if (o.order() != order())
            throw UsageError("series order mismatch: " + std::to_string(order()) + " vs " +
                             std::to_string(o.order()));
    }

private:
    std::vector<T> c_;
};

template <class T>
BasicSeries1<T> series_mul(const BasicSeries1<T>& a, const BasicSeries1<T>& b) {
    return a * b;
}

template <class T>
BasicSeries1<T> series_add(const BasicSeries1<T>& a, const BasicSeries1<T>& b) {
    return a + b;
}

template <class T>
BasicSeries1<T> series_reciprocal(const BasicSeries1<T>& s) {
    if (s[0] == T(0)) throw DomainError("reciprocal of a series with zero constant term");
    const int n = s.order();
    BasicSeries1<T> r(n);
    const T inv0 = T(1) / s[0];
    r[0] = inv0;
    for (int k = 1; k <= n; ++k) {
        T acc(0);
        for (int j = 1; j <= k; ++j) acc += s[j] * r[k - j];
        r[k] = -acc * inv0;
    }
    return r;
}

template <class T>
BasicSeries1<T> series_div(const BasicSeries1<T>& a, const BasicSeries1<T>& b) {
    return a * series_reciprocal(b);
}

// outer(inner(z)); inner must vanish at 0.
template <class T>
BasicSeries1<T> series_compose(const BasicSeries1<T>& outer, const BasicSeries1<T>& inner) {
    outer.check_same(inner);
    if (inner[0] != T(0)) throw DomainError("compose: inner series has nonzero constant term");
    const int n = outer.order();
    BasicSeries1<T> acc = BasicSeries1<T>::constant(outer[n], n);
    for (int k = n - 1; k >= 0; --k) {
        acc = acc * inner;
        acc[0] += outer[k];
    }
    return acc;
}

// Compositional inverse t with s(t(z)) = z.
template <class T>
BasicSeries1<T> series_revert(const BasicSeries1<T>& s) {
    const int n = s.order();
    if (n < 1) throw UsageError("revert needs order >= 1");
    if (s[0] != T(0)) throw DomainError("revert: series has nonzero constant term");
    if (s[1] == T(0)) throw DomainError("revert: vanishing linear coefficient");
    BasicSeries1<T> t(n);
    const T inv1 = T(1) / s[1];
    t[1] = inv1;
    // powers[j] = t^j, refreshed after each new coefficient
    for (int k = 2; k <= n; ++k) {
        // coefficient of z^k in s(t) with t_k = 0
        BasicSeries1<T> tk = t.truncated(k);
        BasicSeries1<T> pw = tk;
        T ck(0);
        for (int j = 1; j <= k; ++j) {
            if (j > 1) pw = pw * tk;
            ck += s[j] * pw[k];
        }
        t[k] = -ck * inv1;
    }
    return t;
}

template <class T>
BasicSeries1<T> series_derivative(const BasicSeries1<T>& s) {
    const int n = s.order();
    BasicSeries1<T> d(n);
    for (int k = 1; k <= n; ++k) d[k - 1] = s[k] * T(k);
    return d;
}

template <class T>
class BasicSeries2 {
public:
    explicit BasicSeries2(int order = default_series_order) : n_(order) {
        if (order < 0) throw UsageError("series order must be >= 0");
        c_.assign(static_cast<std::size_t>((n_ + 1) * (n_ + 1)), T(0));
    }

    static BasicSeries2 constant(const T& v, int order) {
        BasicSeries2 s(order);
        s.at(0, 0) = v;
        return s;
    }
    // f(z) as a bivariate series.
    static BasicSeries2 in_z(const BasicSeries1<T>& f, int order) {
        BasicSeries2 s(order);
        for (int i = 0; i <= order && i <= f.order(); ++i) s.at(i, 0) = f[i];
        return s;
    }
    // f(w) as a bivariate series.
    static BasicSeries2 in_w(const BasicSeries1<T>& f, int order) {
        BasicSeries2 s(order);
        for (int j = 0; j <= order && j <= f.order(); ++j) s.at(0, j) = f[j];
        return s;
    }

    int order() const { return n_; }

    T& at(int i, int j) { return c_[static_cast<std::size_t>(i * (n_ + 1) + j)]; }
    const T& at(int i, int j) const { return c_[static_cast<std::size_t>(i * (n_ + 1) + j)]; }

    T coefficient2(int i, int j) const {
        if (i < 0 || j < 0 || i + j > n_) throw UsageError("coefficient index outside total degree");
        return at(i, j);
    }

    BasicSeries2 truncated(int order) const {
        BasicSeries2 s(order);
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j)
                if (i + j <= n_) s.at(i, j) = at(i, j);
        return s;
    }

    BasicSeries2 transposed() const {
        BasicSeries2 s(n_);
        for (int i = 0; i <= n_; ++i)
            for (int j = 0; i + j <= n_; ++j) s.at(j, i) = at(i, j);
        return s;
    }

    // z w f(z, w), truncated at the same total degree.
    BasicSeries2 times_zw() const {
        BasicSeries2 s(n_);
        for (int i = 0; i + 2 <= n_; ++i)
            for (int j = 0; i + j + 2 <= n_; ++j) s.at(i + 1, j + 1) = at(i, j);
        return s;
    }
    // f(z, w) / (z w) for f vanishing on both axes; two orders are lost.
    BasicSeries2 divided_by_zw() const {
        for (int k = 0; k <= n_; ++k)
            if (at(k, 0) != T(0) || at(0, k) != T(0))
                throw DomainError("divided_by_zw: series does not vanish on the axes");
        const int m = n_ >= 2 ? n_ - 2 : 0;
        BasicSeries2 s(m);
        for (int i = 0; i <= m; ++i)
            for (int j = 0; i + j <= m; ++j)
                if (i + j + 2 <= n_) s.at(i, j) = at(i + 1, j + 1);
        return s;
    }
    // (z - w) f(z, w), truncated at the same total degree.
    BasicSeries2 times_z_minus_w() const {
        BasicSeries2 s(n_);
        for (int i = 0; i <= n_; ++i)
            for (int j = 0; i + j + 1 <= n_; ++j) {
                s.at(i + 1, j) += at(i, j);
                s.at(i, j + 1) -= at(i, j);
            }
        return s;
    }

    template <class Z>
    Z evaluate(const Z& z, const Z& w) const {
        Z acc(0);
        for (int i = n_; i >= 0; --i) {
            Z row(0);
            for (int j = n_ - i; j >= 0; --j) row = row * w + Z(at(i, j));
            acc = acc * z + row;
        }
        return acc;
    }

    BasicSeries2& operator+=(const BasicSeries2& o) {
        check_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    BasicSeries2& operator-=(const BasicSeries2& o) {
        check_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    BasicSeries2& operator*=(const T& a) {
        for (auto& v : c_) v *= a;
        return *this;
    }
    friend BasicSeries2 operator+(BasicSeries2 a, const BasicSeries2& b) { return a += b; }
    friend BasicSeries2 operator-(BasicSeries2 a, const BasicSeries2& b) { return a -= b; }
    friend BasicSeries2 operator*(BasicSeries2 a, const T& s) { return a *= s; }
    friend BasicSeries2 operator*(const T& s, BasicSeries2 a) { return a *= s; }
    friend BasicSeries2 operator*(const BasicSeries2& a, const BasicSeries2& b) {
        a.check_same(b);
        const int n = a.n_;
        BasicSeries2 r(n);
        for (int i1 = 0; i1 <= n; ++i1)
            for (int j1 = 0; i1 + j1 <= n; ++j1) {
                const T& x = a.at(i1, j1);
                if (x == T(0)) continue;
                for (int i2 = 0; i1 + j1 + i2 <= n; ++i2)
                    for (int j2 = 0; i1 + j1 + i2 + j2 <= n; ++j2)
                        r.at(i1 + i2, j1 + j2) += x * b.at(i2, j2);
            }
        return r;
    }

    void check_same(const BasicSeries2& o) const {
        if (o.n_ != n_)
            throw UsageError("series order mismatch: " + std::to_string(n_) + " vs " +
                             std::to_string(o.n_));
    }

private:
    int n_;
    std::vector<T> c_;
};

template <class T>
BasicSeries2<T> series_reciprocal(const BasicSeries2<T>& s) {
    if (s.at(0, 0) == T(0)) throw DomainError("reciprocal of a series with zero constant term");
    const int n = s.order();
    BasicSeries2<T> r(n);
    const T inv0 = T(1) / s.at(0, 0);
    for (int deg = 0; deg <= n; ++deg)
        for (int i = 0; i <= deg; ++i) {
            const int j = deg - i;
            T acc = deg == 0 ? T(1) : T(0);
            for (int a = 0; a <= i; ++a)
                for (int b = 0; b <= j; ++b) {
                    if (a == 0 && b == 0) continue;
                    acc -= s.at(a, b) * r.at(i - a, j - b);
                }
            r.at(i, j) = acc * inv0;
        }
    return r;
}

template <class T>
BasicSeries2<T> series_div(const BasicSeries2<T>& a, const BasicSeries2<T>& b) {
    return a * series_reciprocal(b);
}

// (f(z) - f(w)) / (z - w) computed coefficientwise: z^i w^j gets f_{i+j+1}.
template <class T>
BasicSeries2<T> divided_difference(const BasicSeries1<T>& f) {
    const int n = f.order() - 1;
    if (n < 0) throw UsageError("divided difference needs order >= 1");
    BasicSeries2<T> d(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) d.at(i, j) = f[i + j + 1];
    return d;
}

// (w f(z) - z f(w)) / (z - w) for f(0) = 0, equal to z w DD[f(z)/z].
template <class T>
BasicSeries2<T> cross_divided_difference(const BasicSeries1<T>& f) {
    BasicSeries2<T> dd = divided_difference(f.shift_down());
    BasicSeries2<T> up(dd.order() + 2);
    for (int i = 0; i <= dd.order(); ++i)
        for (int j = 0; i + j <= dd.order(); ++j) up.at(i + 1, j + 1) = dd.at(i, j);
    return up;
}

// sum_{i,j} c(i,j) s(z)^i s(w)^j with s(0) = 0, truncated at the order of c.
template <class T>
BasicSeries2<T> compose_both(const BasicSeries2<T>& c, const BasicSeries1<T>& s) {
    const int n = c.order();
    if (s.order() < n) throw UsageError("compose_both: inner series order too small");
    if (s[0] != T(0)) throw DomainError("compose_both: inner series has nonzero constant term");
    BasicSeries1<T> inner = s.truncated(n);
    std::vector<BasicSeries1<T>> pw;
    pw.push_back(BasicSeries1<T>::constant(T(1), n));
    for (int k = 1; k <= n; ++k) pw.push_back(pw.back() * inner);
    BasicSeries2<T> r(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            const T& cij = c.at(i, j);
            if (cij == T(0)) continue;
            for (int a = i; a <= n; ++a) {
                const T& pa = pw[i][a];
                if (pa == T(0)) continue;
                for (int b = j; a + b <= n; ++b) r.at(a, b) += cij * pa * pw[j][b];
            }
        }
    return r;
}

using Series1 = BasicSeries1<std::complex<double>>;
using Series2 = BasicSeries2<std::complex<double>>;
using ExactSeries1 = BasicSeries1<Rational>;
using ExactSeries2 = BasicSeries2<Rational>;

template <class T>
double coeff_abs(const T& v) {
    using std::abs;
    return static_cast<double>(abs(v));
}

// Max coefficientwise distance up to the smaller order.
template <class T>
double max_coeff_diff(const BasicSeries1<T>& a, const BasicSeries1<T>& b) {
    double m = 0;
    const int n = std::min(a.order(), b.order());
    for (int k = 0; k <= n; ++k) m = std::max(m, coeff_abs(T(a[k] - b[k])));
    return m;
}

template <class T>
double max_coeff_diff(const BasicSeries2<T>& a, const BasicSeries2<T>& b) {
    double m = 0;
    const int n = std::min(a.order(), b.order());
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) m = std::max(m, coeff_abs(T(a.at(i, j) - b.at(i, j))));
    return m;
}

}  // namespace fk
