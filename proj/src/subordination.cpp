#include "fkummer/subordination.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

namespace fk {

double law_moment_transform(const DiscreteLaw<double>& L, double t) {
    double acc = 0;
    for (std::size_t i = 0; i < L.nodes.size(); ++i) acc += L.weights[i] * t * L.nodes[i] / (1 - t * L.nodes[i]);
    return acc;
}

double measure_moment_transform(const SpectralMeasure& mu, double t) { return moment_transform(mu, t).real(); }

std::vector<double> negative_log_grid(double lo, double hi, int n) {
    if (!(lo > 0 && hi > lo) || n < 2) throw UsageError("negative_log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = -std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    return g;
}

namespace {

double solve_increasing(const std::function<double(double)>& f, double lo, double hi) {
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if (!(flo < 0 && fhi > 0)) throw NumericError("monotone solve: root not bracketed");
    boost::uintmax_t iters = 200;
    auto tol = [](double a, double b) {
        return std::abs(a - b) <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    };
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

double s_route_moment(const RealFn& MR, const RealFn& MY, double z) {
    if (!(z < 0)) throw DomainError("pointwise subordination needs z < 0");
    auto inverse_u = [&](double m) {
        return (1 + m) / m * invert_M_on_negative_axis(MR, m) * invert_M_on_negative_axis(MY, m);
    };
    double gap = 0.5;
    while (inverse_u(-1 + gap) >= z) {
        gap *= 0.5;
        if (gap < 1e-15) throw DomainError("pointwise subordination: z outside the reachable range");
    }
    return solve_increasing([&](double mm) { return inverse_u(mm) - z; }, -1 + gap,
                            -std::numeric_limits<double>::min());
}

SubordinationPair subordination_series(const MomentOracle& o, int n) {
    SubordinationPair p;
    p.series = subordination_series_t(o, n);
    const DiscreteLaw<double> r = o.r, y = o.y;
    p.M_R = [r](double t) { return law_moment_transform(r, t); };
    p.M_Y = [y](double t) { return law_moment_transform(y, t); };
    p.at = [MR = p.M_R, MY = p.M_Y](double z) {
        const double m = s_route_moment(MR, MY, z);
        return SubordinationPoint{z, m, invert_M_on_negative_axis(MY, m), invert_M_on_negative_axis(MR, m)};
    };
    return p;
}

SubordinationPair subordination_pair(const MomentOracle& o, const SpectralMeasure& mu_R,
                                     const SpectralMeasure& mu_Y, RealFn M_U, int n) {
    SubordinationPair p;
    p.series = subordination_series_t(o, n);
    p.M_R = [mu_R](double t) { return measure_moment_transform(mu_R, t); };
    p.M_Y = [mu_Y](double t) { return measure_moment_transform(mu_Y, t); };
    p.closed_form_M_U = true;
    p.at = [MR = p.M_R, MY = p.M_Y, M_U](double z) {
        if (!(z < 0)) throw DomainError("pointwise subordination needs z < 0");
        const double m = M_U(z);
        return SubordinationPoint{z, m, invert_M_on_negative_axis(MY, m), invert_M_on_negative_axis(MR, m)};
    };
    return p;
}

double omega2_pointwise(const SpectralMeasure& mu_R, const RealFn& M_U, double z) {
    if (!(z < 0)) throw DomainError("omega2_pointwise needs z < 0");
    return invert_M_on_negative_axis([&mu_R](double t) { return measure_moment_transform(mu_R, t); }, M_U(z));
}

double UsefulIdentityReport::max() const {
    return std::max({composition_series, product_series, composition_pointwise, product_pointwise, series_vs_pointwise});
}

UsefulIdentityReport verify_useful_identity(const SubordinationPair& pair, int n, const std::vector<double>& grid,
                                            double near_origin) {
    const auto& s = pair.series;
    if (n > s.M_U.order()) throw UsageError("verify_useful_identity: order exceeds the series order");
    UsefulIdentityReport rep;
    const Series1 MU = s.M_U.truncated(n), w1 = s.omega1.truncated(n), w2 = s.omega2.truncated(n);
    rep.composition_series = std::max(max_coeff_diff(series_compose(s.M_Y.truncated(n), w1), MU),
                              max_coeff_diff(series_compose(s.M_R.truncated(n), w2), MU));
    rep.product_series = max_coeff_diff(w1 * w2, eta_of(MU).shift_up());
    for (double z : grid) {
        const SubordinationPoint p = pair.at(z);
        rep.composition_pointwise = std::max({rep.composition_pointwise, std::abs(pair.M_Y(p.omega1) - p.m),
                                      std::abs(pair.M_R(p.omega2) - p.m)});
        rep.product_pointwise = std::max(rep.product_pointwise, std::abs(p.omega1 * p.omega2 - z * p.m / (1 + p.m)));
    }
    const SubordinationPoint p0 = pair.at(-near_origin);
    rep.series_vs_pointwise = std::max(
        {std::abs(s.omega1.evaluate(cplx(-near_origin)).real() - p0.omega1),
         std::abs(s.omega2.evaluate(cplx(-near_origin)).real() - p0.omega2),
         std::abs(s.M_U.evaluate(cplx(-near_origin)).real() - p0.m)});
    return rep;
}

EtaH eta_h_series(const MomentOracle& o, RFunc h, int n) { return eta_h_series_t(o, h, n); }

double verify_conditional_subordination(const MomentOracle& o, RFunc h, int n) {
    return verify_conditional_subordination_t(o, h, n);
}

}  // namespace fk
