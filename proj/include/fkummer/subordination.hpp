#pragma once

// Subordination functions of the free multiplicative pair (R, Y),
// U = R^{1/2} Y R^{1/2}:  M_U(z) = M_Y(omega1(z)) = M_R(omega2(z)).

#include <functional>
#include <type_traits>
#include <vector>

#include "fkummer/partitions.hpp"
#include "fkummer/series.hpp"
#include "fkummer/transforms.hpp"

namespace fk {

// coefficient type of the series built from an oracle with values in T
template <class T>
using CoeffOf = std::conditional_t<std::is_same_v<T, double>, std::complex<double>, T>;

namespace words {

inline MixedWord alternating(Family first, int len) {
    MixedWord w;
    for (int i = 0; i < len; ++i) {
        const bool r = (i % 2 == 0) == (first == Family::R);
        w.push_back(r ? Letter::rf(RFunc::r()) : Letter::y());
    }
    return w;
}

// phi(U^n h(R)) after cycling: Y (R Y)^{n-1} [R h]
inline MixedWord power_times(int n, RFunc h) {
    if (n == 0) return {Letter::rf(h)};
    MixedWord w = alternating(Family::Y, 2 * n - 1);
    w.push_back(Letter::rf(RFunc::r() * h));
    return w;
}

// phi(g1 U^m g2 U^n) after cycling R^{1/2} factors into integer powers
inline MixedWord two_resolvent(RFunc g1, int m, RFunc g2, int n) {
    if (m == 0 && n == 0) return {Letter::rf(g1 * g2)};
    if (m == 0 || n == 0) return power_times(m + n, g1 * g2);
    MixedWord w{Letter::rf(RFunc::r() * g1)};
    MixedWord a = alternating(Family::Y, 2 * m - 1);
    w.insert(w.end(), a.begin(), a.end());
    w.push_back(Letter::rf(RFunc::r() * g2));
    MixedWord b = alternating(Family::Y, 2 * n - 1);
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

}  // namespace words

// sum_{k=0}^{n} phi(h(R) R^k) t^k
template <class T>
BasicSeries1<CoeffOf<T>> resolvent_series(const BasicMomentOracle<T>& o, RFunc h, int n) {
    BasicSeries1<CoeffOf<T>> s(n);
    for (int k = 0; k <= n; ++k) s[k] = CoeffOf<T>(o.phi_r(h, k));
    return s;
}

// M_R, M_Y and M_U (coefficient n = phi((RY)^n)) to order n
template <class T>
BasicSeries1<CoeffOf<T>> product_moment_series(const BasicMomentOracle<T>& o, int n) {
    BasicSeries1<CoeffOf<T>> s(n);
    for (int k = 1; k <= n; ++k) s[k] = CoeffOf<T>(free_mixed_moment(words::alternating(Family::R, 2 * k), o));
    return s;
}

template <class T>
BasicSeries1<CoeffOf<T>> law_moment_series(const DiscreteLaw<T>& L, int n) {
    BasicSeries1<CoeffOf<T>> s(n);
    for (int k = 1; k <= n; ++k) s[k] = CoeffOf<T>(L.moment(k));
    return s;
}

template <class T>
BasicSeries1<T> eta_of(const BasicSeries1<T>& M) {
    BasicSeries1<T> one = BasicSeries1<T>::constant(T(1), M.order());
    return M * series_reciprocal(M + one);
}

template <class T>
struct BasicSubordinationSeries {
    using S1 = BasicSeries1<CoeffOf<T>>;
    S1 M_R, M_Y, M_U, omega1, omega2;
    // max |omega_k coefficient - alternating Boolean cumulant| for orders <= 5
    double cumulant_residual = 0;
};

template <class T>
BasicSubordinationSeries<T> subordination_series_t(const BasicMomentOracle<T>& o, int n) {
    if (n < 1) throw UsageError("subordination series needs order >= 1");
    BasicSubordinationSeries<T> s;
    s.M_R = law_moment_series(o.r, n);
    s.M_Y = law_moment_series(o.y, n);
    if (s.M_R[1] == CoeffOf<T>(0) || s.M_Y[1] == CoeffOf<T>(0))
        throw DomainError("subordination needs nonzero first moments");
    s.M_U = product_moment_series(o, n);
    s.omega1 = series_compose(series_revert(s.M_Y), s.M_U);
    s.omega2 = series_compose(series_revert(s.M_R), s.M_U);
    const int check = std::min(n, 5);
    for (int k = 1; k <= check; ++k) {
        const auto b1 = CoeffOf<T>(boolean_cumulant_of_word(words::alternating(Family::R, 2 * k - 1), o));
        const auto b2 = CoeffOf<T>(boolean_cumulant_of_word(words::alternating(Family::Y, 2 * k - 1), o));
        s.cumulant_residual = std::max({s.cumulant_residual, coeff_abs(CoeffOf<T>(s.omega1[k] - b1)),
                                        coeff_abs(CoeffOf<T>(s.omega2[k] - b2))});
    }
    return s;
}

// eta^h_R(z) and eta^h_R(z, w)
template <class T>
struct BasicEtaH {
    RFunc h;
    BasicSeries1<CoeffOf<T>> eta1;
    BasicSeries2<CoeffOf<T>> eta2;
    double dual_residual = 0;
};

// Built from Boolean cumulants and from the resolvent quotients; the two
// constructions must agree to tol (relative to the coefficient size).
template <class T>
BasicEtaH<T> eta_h_series_t(const BasicMomentOracle<T>& o, RFunc h, int n, double tol = 1e-10) {
    using C = CoeffOf<T>;
    BasicEtaH<T> e{h, BasicSeries1<C>(n), BasicSeries2<C>(n), 0};
    const Letter R = Letter::rf(RFunc::r()), H = Letter::rf(h);
    {
        MixedWord w{H};
        for (int k = 0; k < n; ++k) w.push_back(R);
        const auto table = boolean_cumulant_table([&] {
            std::vector<MixedWord> ent;
            for (const Letter& l : w) ent.push_back({l});
            return ent;
        }(), o);
        for (int k = 0; k <= n; ++k) e.eta1[k] = C(table[0][k]);
    }
    for (int l = 0; l <= n; ++l) {
        std::vector<MixedWord> ent;
        for (int i = 0; i < l; ++i) ent.push_back({R});
        ent.push_back({H});
        for (int k = 0; l + k < n; ++k) ent.push_back({R});
        const auto table = boolean_cumulant_table(ent, o);
        for (int k = 0; l + k <= n; ++k) e.eta2.at(l, k) = C(table[0][l + k]);
    }
    // quotient forms
    const auto num1 = resolvent_series(o, h, n);
    const auto den1 = resolvent_series(o, RFunc::unit(), n);
    const auto q1 = series_div(num1, den1);
    BasicSeries2<C> num2(n);
    for (int l = 0; l <= n; ++l)
        for (int k = 0; l + k <= n; ++k) num2.at(l, k) = C(o.phi_r(h, l + k));
    const auto den2 = BasicSeries2<C>::in_z(den1, n) * BasicSeries2<C>::in_w(den1, n);
    const auto q2 = series_div(num2, den2);
    double scale = 1;
    for (int k = 0; k <= n; ++k) scale = std::max(scale, coeff_abs(e.eta1[k]));
    e.dual_residual = std::max(max_coeff_diff(q1, e.eta1), max_coeff_diff(q2, e.eta2)) / scale;
    if (e.dual_residual > tol)
        throw NumericError("eta^h constructions disagree: residual " + std::to_string(e.dual_residual));
    return e;
}

// (z - w) eta^h(z, w) - [z eta^h(z) - w eta^h(w) + eta_R(z) w eta^h(w) - eta_R(w) z eta^h(z)]
template <class T>
double eta_h_decomposition_residual(const BasicMomentOracle<T>& o, const BasicEtaH<T>& e) {
    using C = CoeffOf<T>;
    using S2 = BasicSeries2<C>;
    const int n = e.eta2.order();
    const auto etaR = eta_of(law_moment_series(o.r, n));
    const auto zeta = e.eta1.truncated(n).shift_up().truncated(n);
    const S2 lhs = e.eta2.times_z_minus_w();
    const S2 rhs = S2::in_z(zeta, n) - S2::in_w(zeta, n) + S2::in_z(etaR, n) * S2::in_w(zeta, n) -
                   S2::in_w(etaR, n) * S2::in_z(zeta, n);
    return max_coeff_diff(lhs, rhs);
}

// max coefficient difference between phi((1 - zU)^{-1} h(R)) from mixed
// moments and phi((1 - omega2(z) R)^{-1} h(R)) by composition
template <class T>
double verify_conditional_subordination_t(const BasicMomentOracle<T>& o, RFunc h, int n) {
    using C = CoeffOf<T>;
    BasicSeries1<C> lhs(n);
    for (int k = 0; k <= n; ++k) lhs[k] = C(free_mixed_moment(words::power_times(k, h), o));
    const auto sub = subordination_series_t(o, n);
    const auto rhs = series_compose(resolvent_series(o, h, n), sub.omega2);
    return max_coeff_diff(lhs, rhs);
}

using SubordinationSeries = BasicSubordinationSeries<double>;
using EtaH = BasicEtaH<double>;

struct SubordinationPoint {
    double z;
    double m;  // M_U(z)
    double omega1;
    double omega2;
};

struct SubordinationPair {
    SubordinationSeries series;
    RealFn M_R;  // pointwise on the negative axis
    RealFn M_Y;
    std::function<SubordinationPoint(double)> at;
    bool closed_form_M_U = false;  // true when M_U is an independent input
};

double law_moment_transform(const DiscreteLaw<double>& L, double t);
double measure_moment_transform(const SpectralMeasure& mu, double t);

// Discrete pair; pointwise values through the S-transform relation
// M_U^{<-1>}(m) = (1+m)/m M_R^{<-1>}(m) M_Y^{<-1>}(m).
SubordinationPair subordination_series(const MomentOracle& o, int n);
// Series from the oracle, pointwise values from the laws of R and Y and an
// independently known M_U.
SubordinationPair subordination_pair(const MomentOracle& o, const SpectralMeasure& mu_R,
                                     const SpectralMeasure& mu_Y, RealFn M_U, int n);

// M_U(z) for z < 0 from M_U^{<-1>}(m) = (1+m)/m M_R^{<-1>}(m) M_Y^{<-1>}(m)
double s_route_moment(const RealFn& M_R, const RealFn& M_Y, double z);

double omega2_pointwise(const SpectralMeasure& mu_R, const RealFn& M_U, double z);

struct UsefulIdentityReport {
    double composition_series = 0;     // M_Y(omega1) - M_U and M_R(omega2) - M_U
    double product_series = 0;     // omega1 omega2 - z eta_U
    double composition_pointwise = 0;
    double product_pointwise = 0;
    double series_vs_pointwise = 0;  // near the origin, |z| <= near_origin
    double max() const;
};

UsefulIdentityReport verify_useful_identity(const SubordinationPair& pair, int n,
                                            const std::vector<double>& grid, double near_origin = 0.02);

EtaH eta_h_series(const MomentOracle& o, RFunc h, int n);
double verify_conditional_subordination(const MomentOracle& o, RFunc h, int n);

// n log-spaced points in [-hi, -lo] (0 < lo < hi)
std::vector<double> negative_log_grid(double lo, double hi, int n);

}  // namespace fk
