#pragma once

// The HV map (X, Y) -> (U, V),
//   U = (1+X)^{-1/2} Y (1+X)^{-1/2},  V = (1+U)^{1/2} X (1+U)^{1/2},
// the two-resolvent function k(z, w) = phi(g1(R)(1-zU)^{-1} g2(R)(1-wU)^{-1})
// with R = (1+X)^{-1}, and the scalar identities implied by the regression
// conditions phi(V^k | U) = const.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fkummer/distributions.hpp"
#include "fkummer/subordination.hpp"

namespace fk {

// Gauss rules behind the moment oracle of an instance: the R rule integrates
// r^j exactly for -8 <= j <= 23, the Y rule y^j for 0 <= j <= 31.
inline constexpr int hv_gauss_points = 16;
inline constexpr int hv_negative_depth = 8;

// Transforms on the negative real axis.
struct PointwiseTransforms {
    RealFn M_U;
    RealFn M_R;
    RealFn dM_R;
    RealFn omega2;  // M_R(omega2(z)) = M_U(z)
};

struct KummerPoissonParams {
    double alpha;
    double beta;
    double gamma;
};

struct HvInstance {
    SpectralMeasure mu_X;
    SpectralMeasure mu_Y;
    std::optional<SpectralMeasure> mu_R;  // absent when X has an atom at 0
    MomentOracle oracle;
    PointwiseTransforms transforms;
    // X ~ K(alpha, alpha+beta, gamma), Y ~ nu(alpha+beta, 1/gamma)
    std::optional<KummerPoissonParams> params;
    std::optional<SpectralMeasure> mu_U;  // closed-form law of U when known
    std::optional<SpectralMeasure> mu_V;

    bool x_strictly_positive() const { return mu_X.atom0 == 0 && mu_X.lo > 0; }
};

// Free pair with the given laws; both must be non-degenerate.
HvInstance hv_instance(const SpectralMeasure& mu_X, const SpectralMeasure& mu_Y);
// X ~ K(alpha, alpha+beta, gamma), Y ~ nu(alpha+beta, 1/gamma), with the
// closed-form laws U ~ K(alpha+beta, alpha, gamma), V ~ nu(alpha, 1/gamma).
HvInstance hv_instance(double alpha, double beta, double gamma);

bool in_hv_regime(double alpha, double beta, double gamma);

struct HvMoments {
    std::vector<double> U;  // U[n] = phi(U^n), U[0] = 1
    std::vector<double> V;
};

// phi((RY)^n) and phi((X + (1-R)Y)^n) from the mixed-moment engine
HvMoments hv_moments(const HvInstance& inst, int n);

struct HvReport {
    KummerPoissonParams params;
    int order = 0;
    HvMoments computed;
    std::vector<double> reference_U;
    std::vector<double> reference_V;
    // max over orders of |computed - reference| / max(1, |reference|)
    double deviation_U = 0;
    double deviation_V = 0;
    bool exploratory = false;
    bool pass = false;  // always false in exploratory mode
};

// Outside alpha > 1, beta > 1 - alpha, gamma > 0 only with exploratory set.
HvReport verify_hv_property(double alpha, double beta, double gamma, int n, double tol,
                            bool exploratory = false);

// ---------------------------------------------------------------------------
// k(z, w) as a double series

// coefficient (m, n) = phi(g1(R) U^m g2(R) U^n)
template <class T>
BasicSeries2<CoeffOf<T>> k_series_bruteforce(const BasicMomentOracle<T>& o, RFunc g1, RFunc g2, int n) {
    using C = CoeffOf<T>;
    BasicSeries2<C> k(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) k.at(i, j) = C(free_mixed_moment(words::two_resolvent(g1, i, g2, j), o));
    return k;
}

// sum c(i, j) omega2(z)^i omega2(w)^j with c(i, j) = phi(f(R) R^{i+j})
template <class T>
BasicSeries2<CoeffOf<T>> double_resolvent_series(const BasicMomentOracle<T>& o, RFunc f,
                                                 const BasicSeries1<CoeffOf<T>>& omega2, int n) {
    using C = CoeffOf<T>;
    BasicSeries2<C> c(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) c.at(i, j) = C(o.phi_r(f, i + j));
    return compose_both(c, omega2);
}

// k1 + (w omega2(z) - z omega2(w))/(z - w) A1 A2 / B
template <class T>
BasicSeries2<CoeffOf<T>> k_series_closedform(const BasicMomentOracle<T>& o, RFunc g1, RFunc g2, int n) {
    using C = CoeffOf<T>;
    const auto sub = subordination_series_t(o, n + 1);
    const auto& w2 = sub.omega2;
    const auto k1 = double_resolvent_series(o, g1 * g2, w2, n);
    const auto A1 = double_resolvent_series(o, RFunc::r() * g1, w2, n);
    const auto A2 = double_resolvent_series(o, RFunc::r() * g2, w2, n);
    const auto B = double_resolvent_series(o, RFunc::r(), w2, n);
    if (B.at(0, 0) == C(0)) throw NumericError("k series: B has zero leading coefficient");
    const auto cdd = cross_divided_difference(w2).truncated(n);
    return k1 + cdd * series_div(A1 * A2, B);
}

// y_n = beta_{2n+1}(Y,R,...,Y), r_n = beta_{2n+1}(R,Y,...,R),
// s_{m,n} = beta(Y,R,..,Y [2m+1], h, Y,R,..,Y [2n+1]),
// t_{m,n} = beta((R,Y)^m, h, (Y,R)^n)
template <class T>
struct BasicMixedCumulantTable {
    using C = CoeffOf<T>;
    RFunc h;
    int order = 0;
    std::vector<C> y, r;
    BasicSeries2<C> s{0}, t{0};  // s to total order max(order-2, 0)

    double symmetry_residual() const {
        double m = 0;
        m = std::max(m, max_coeff_diff(s, s.transposed()));
        m = std::max(m, max_coeff_diff(t, t.transposed()));
        return m;
    }
};

namespace detail {

template <class T>
std::vector<MixedWord> split_letters(const MixedWord& w) {
    std::vector<MixedWord> e;
    for (const Letter& l : w) e.push_back({l});
    return e;
}

}  // namespace detail

template <class T>
BasicMixedCumulantTable<T> mixed_cumulant_table(const BasicMomentOracle<T>& o, RFunc h, int n) {
    using C = CoeffOf<T>;
    if (n < 0) throw UsageError("mixed cumulant table needs order >= 0");
    BasicMixedCumulantTable<T> tab;
    tab.h = h;
    tab.order = n;
    for (Family f : {Family::Y, Family::R}) {
        const auto beta = boolean_cumulant_table(detail::split_letters<T>(words::alternating(f, 2 * n + 1)), o);
        auto& out = f == Family::Y ? tab.y : tab.r;
        for (int k = 0; k <= n; ++k) out.push_back(C(beta[0][2 * k]));
    }
    const Letter H = Letter::rf(h);
    tab.t = BasicSeries2<C>(n);
    for (int m = 0; m <= n; ++m) {
        MixedWord w = words::alternating(Family::R, 2 * m);
        w.push_back(H);
        const MixedWord tail = words::alternating(Family::Y, 2 * (n - m));
        w.insert(w.end(), tail.begin(), tail.end());
        const auto beta = boolean_cumulant_table(detail::split_letters<T>(w), o);
        for (int k = 0; m + k <= n; ++k) tab.t.at(m, k) = C(beta[0][2 * m + 2 * k]);
    }
    const int ns = std::max(n - 2, 0);
    tab.s = BasicSeries2<C>(ns);
    if (n >= 2)
        for (int m = 0; m <= ns; ++m) {
            MixedWord w = words::alternating(Family::Y, 2 * m + 1);
            w.push_back(H);
            const MixedWord tail = words::alternating(Family::Y, 2 * (ns - m) + 1);
            w.insert(w.end(), tail.begin(), tail.end());
            const auto beta = boolean_cumulant_table(detail::split_letters<T>(w), o);
            for (int k = 0; m + k <= ns; ++k) tab.s.at(m, k) = C(beta[0][2 * m + 2 * k + 2]);
        }
    return tab;
}

template <class T>
struct BasicGH {
    using S2 = BasicSeries2<CoeffOf<T>>;
    S2 G{0}, H{0};                // from Boolean cumulants
    S2 G_closed{0}, H_closed{0};  // subordination closed forms
    double closed_form_residual = 0;
    double g_by_h_residual = 0;   // G DD[omega1] = H CDD[omega2]
    double h_by_g_residual = 0;   // H DD[omega2] = G DD[omega1/z] + eta^h(omega2, omega2) DD[omega2]
    double eta_decomposition_residual = 0;
    double cumulant_residual = 0; // r_n, y_n against the omega coefficients
    double max() const {
        return std::max({closed_form_residual, g_by_h_residual, h_by_g_residual, eta_decomposition_residual,
                         cumulant_residual});
    }
};

template <class T>
BasicGH<T> GH_series(const BasicMomentOracle<T>& o, RFunc h, int n) {
    using C = CoeffOf<T>;
    using S1 = BasicSeries1<C>;
    using S2 = BasicSeries2<C>;
    if (n < 2) throw UsageError("GH series needs order >= 2");
    const auto tab = mixed_cumulant_table(o, h, n);
    BasicGH<T> r;
    r.G = S2(n);
    r.H = tab.t;
    for (int i = 0; i <= tab.s.order(); ++i)
        for (int j = 0; i + j <= tab.s.order(); ++j) r.G.at(i + 1, j + 1) = tab.s.at(i, j);

    const auto sub = subordination_series_t(o, n + 2);
    const S1& w1 = sub.omega1;
    const S1& w2 = sub.omega2;
    for (int k = 0; k <= n; ++k)
        r.cumulant_residual = std::max({r.cumulant_residual, coeff_abs(C(tab.r[k] - w1[k + 1])),
                                        coeff_abs(C(tab.y[k] - w2[k + 1]))});
    const auto eh = eta_h_series_t(o, h, n);
    r.eta_decomposition_residual = eta_h_decomposition_residual(o, eh);
    const S2 eta_at = compose_both(eh.eta2, w2.truncated(n));
    const S2 dd1 = divided_difference(w1).truncated(n);
    const S2 dd2 = divided_difference(w2).truncated(n);
    const S2 dd1z = divided_difference(w1.shift_down()).truncated(n);
    const S2 cdd2 = cross_divided_difference(w2).truncated(n);
    const S2 ddU = divided_difference(eta_of(sub.M_U)).truncated(n);
    const S2 ratio = series_div(dd2, ddU);
    r.G_closed = cdd2 * ratio * eta_at;
    r.H_closed = dd1 * ratio * eta_at;
    r.closed_form_residual = std::max(max_coeff_diff(r.G, r.G_closed), max_coeff_diff(r.H, r.H_closed));
    r.g_by_h_residual = max_coeff_diff(r.G * dd1, r.H * cdd2);
    r.h_by_g_residual = max_coeff_diff(r.H * dd2, r.G * dd1z + eta_at * dd2);
    return r;
}

using MixedCumulantTable = BasicMixedCumulantTable<double>;
using GHSeries = BasicGH<double>;

// ---------------------------------------------------------------------------
// pointwise k for g(R) = R(1-R)^{-1} = X^{-1}

struct KPoint {
    double z;
    double omega;  // omega2(z)
    double m;      // M_U(z)
};

KPoint k_point(const PointwiseTransforms& t, double z);

// k(z, w) from the closed formula; phi_g = phi(g(R)), phi_g2 = phi(g(R)^2).
// The diagonal z = w uses the limiting formula.
double k_special_pointwise(const PointwiseTransforms& t, double phi_g, double phi_g2, KPoint zp, KPoint wp);
double k_special_pointwise(const HvInstance& inst, double z, double w);

// k(z, w) for general g1, g2 from the two-resolvent formula with quadrature
// over the law of R; needs mu_R.
double k_general_pointwise(const HvInstance& inst, RFunc g1, RFunc g2, double z, double w);

// ---------------------------------------------------------------------------
// regression constants and identities

struct RegressionConstants {
    double a = 0;  // phi(V)
    double b = 0;  // phi(V^2)
    double c = 0;  // phi(V^{-1})
    double d = 0;  // phi(V^{-2})
    double lambda = 0;
    double p = 0;  // phi(X)
    double q = 0;  // phi(X^{-1}) for case 1, phi(X^2) for case 3
    double K = 0;  // M_U(-1)
    double p2 = 0; // omega2(-1)
    double x_inv = 0;   // phi(X^{-1})
    double x_inv2 = 0;  // phi(X^{-2})
    double x2 = 0;      // phi(X^2)
    double lambda_y = 0;  // phi(Y)
    int characterization = 0;

    std::vector<std::pair<std::string, double>> named() const;
    double& field(const std::string& name);
};

// All constants available for the instance; q and lambda follow the given
// characterization (1, 2 or 3; 0 leaves them unset). Negative moments of V
// come from the closed-form law nu(alpha, 1/gamma) and are NaN otherwise.
RegressionConstants compute_constants(const HvInstance& inst, int characterization = 0);

// Identities implied by phi(V^k | U) = const:
//   1: k = 1,  (omega2 - 1) M + omega2 = z/(z+1) (a M + a - phi(X))
//   2: k = -1, z (M - phi(X^{-1}))/(omega2 - 1) = c z + c (z+1) M
//   3: k = 2,  with D = (omega2 - 1) M + omega2,
//      phi(X^2) + phi(Y) phi(X) + omega2 phi(X) + (omega2 - 1) D + D^2/(z M)
//        = b (1 + K)/(z+1) + b z/(z+1) (M + 1) + phi(Y) D / M
//   4: k = -2, k(z, -1) = d + d (1 + 1/z) M
struct RegressionSides {
    double lhs;
    double rhs;
};

RegressionSides regression_sides(int identity, const HvInstance& inst, const RegressionConstants& k, double z);
double regression_residual(int identity, const HvInstance& inst, const RegressionConstants& k,
                           const std::vector<double>& grid);
// 40 log-spaced points in [-5, -0.05]
std::vector<double> default_residual_grid();

struct Recovered {
    FreeKummerParams x;
    FreePoissonParams y;
    double lambda = 0;
    double rho = 0;
    SpectralMeasure x_law;  // solution of the quadratic for G_X
};

// Characterization pipelines: 1 (phi(V|U), phi(V^{-1}|U)), 2 (phi(V^{-1}|U),
// phi(V^{-2}|U)), 3 (phi(V|U), phi(V^2|U)).
Recovered determine_from_equations(int characterization, const RegressionConstants& k);

struct CharacterizationReport {
    int characterization = 0;
    RegressionConstants constants;
    bool inequality = false;
    std::vector<std::pair<std::string, double>> residuals;
    double max_residual = 0;
    std::optional<Recovered> recovered;
    std::string recovery_error;
    double parameter_error = 0;  // max over alpha_X, beta_X, gamma_X, lambda_Y, scale_Y
    // smallest (over perturbed constants) of the largest residual after +delta
    double min_perturbed_residual = 0;
    std::string least_sensitive_constant;
};

std::vector<int> identities_of(int characterization);
std::vector<std::string> constants_of(int characterization);
// residuals of the case's identities and constant relations
std::vector<std::pair<std::string, double>> characterization_residuals(int characterization, const HvInstance& inst,
                                                                       const RegressionConstants& k,
                                                                       const std::vector<double>& grid);
CharacterizationReport characterize(int characterization, double alpha, double beta, double gamma,
                                    const std::vector<double>& grid, double perturbation = 0.1);

}  // namespace fk
