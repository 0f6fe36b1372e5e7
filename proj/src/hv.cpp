#include "fkummer/hv.hpp"

#include <cmath>
#include <limits>

namespace fk {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double variance(const SpectralMeasure& mu) {
    const double m1 = mu.moment(1);
    return mu.moment(2) - m1 * m1;
}

// law of R = (1+X)^{-1} and of Y as Gauss rules
MomentOracle gauss_oracle(const SpectralMeasure& mu_X, const SpectralMeasure& mu_Y) {
    std::vector<double> r, wr;
    for (std::size_t i = 0; i < mu_X.nodes.size(); ++i) {
        r.push_back(1 / (1 + mu_X.nodes[i]));
        wr.push_back(mu_X.weights[i]);
    }
    if (mu_X.atom0 > 0) {
        r.push_back(1);
        wr.push_back(mu_X.atom0);
    }
    std::vector<double> y = mu_Y.nodes, wy = mu_Y.weights;
    if (mu_Y.atom0 > 0) {
        y.push_back(0);
        wy.push_back(mu_Y.atom0);
    }
    MomentOracle o;
    o.r = gauss_rule(r, wr, hv_gauss_points, -hv_negative_depth);
    o.y = gauss_rule(y, wy, hv_gauss_points, 0);
    return o;
}

// integral of t/(1+x-t) and of (1+x)/(1+x-t)^2 against the law of X
double quadrature_M_R(const SpectralMeasure& mu_X, double t) {
    double v = mu_X.integrate_continuous([t](double x) { return t / (1 + x - t); });
    if (mu_X.atom0 > 0) v += mu_X.atom0 * t / (1 - t);
    return v;
}

double quadrature_dM_R(const SpectralMeasure& mu_X, double t) {
    double v = mu_X.integrate_continuous([t](double x) { return (1 + x) / ((1 + x - t) * (1 + x - t)); });
    if (mu_X.atom0 > 0) v += mu_X.atom0 / ((1 - t) * (1 - t));
    return v;
}

double derivative(const RealFn& f, double z) {
    const double h = 1e-2 * std::abs(z);
    auto D = [&](double s) { return (f(z + s) - f(z - s)) / (2 * s); };
    return (4 * D(h / 2) - D(h)) / 3;
}

bool same_point(double z, double w) { return std::abs(z - w) <= 1e-9 * std::max(1.0, std::abs(z)); }

void check_case(int c) {
    if (c < 1 || c > 3) throw UsageError("characterization case must be 1, 2 or 3");
}

}  // namespace

HvInstance hv_instance(const SpectralMeasure& mu_X, const SpectralMeasure& mu_Y) {
    if (!(variance(mu_X) > 1e-12)) throw DomainError("X is degenerate");
    if (!(variance(mu_Y) > 1e-12)) throw DomainError("Y is degenerate");
    HvInstance inst;
    inst.mu_X = mu_X;
    inst.mu_Y = mu_Y;
    if (mu_X.atom0 == 0) inst.mu_R = pushforward_resolvent_shift(mu_X);
    inst.oracle = gauss_oracle(mu_X, mu_Y);
    auto& t = inst.transforms;
    t.M_R = [mu_X](double s) { return quadrature_M_R(mu_X, s); };
    t.dM_R = [mu_X](double s) { return quadrature_dM_R(mu_X, s); };
    RealFn M_Y = [mu_Y](double s) { return measure_moment_transform(mu_Y, s); };
    t.M_U = [MR = t.M_R, M_Y](double z) { return z == 0 ? 0.0 : s_route_moment(MR, M_Y, z); };
    t.omega2 = [MR = t.M_R, MU = t.M_U](double z) { return invert_M_on_negative_axis(MR, MU(z)); };
    return inst;
}

bool in_hv_regime(double alpha, double beta, double gamma) {
    return alpha > 1 && beta > 1 - alpha && gamma > 0;
}

HvInstance hv_instance(double alpha, double beta, double gamma) {
    if (!(alpha + beta > 0)) throw DomainError("HV instance needs alpha + beta > 0");
    const FreeKummerParams xp = FreeKummerParams::make(alpha, alpha + beta, gamma);
    const FreePoissonParams yp(alpha + beta, 1 / gamma);
    HvInstance inst = hv_instance(kummer_measure(xp), mp_measure(yp));
    inst.params = KummerPoissonParams{alpha, beta, gamma};
    const FreeKummerParams up = FreeKummerParams::make(alpha + beta, alpha, gamma);
    inst.mu_U = kummer_measure(up);
    inst.mu_V = mp_measure(FreePoissonParams(alpha, 1 / gamma));
    auto& t = inst.transforms;
    t.M_R = [xp, mu_X = inst.mu_X](double s) {
        if (std::abs(s) < 1e-3) return quadrature_M_R(mu_X, s);
        return (-s * kummer_cauchy(xp, cplx(s - 1, 0))).real();
    };
    t.M_U = [up, mu_U = *inst.mu_U](double z) {
        if (z == 0) return 0.0;
        if (std::abs(z + 1) < 1e-3) return measure_moment_transform(mu_U, z);
        return (kummer_cauchy(up, cplx(1 / z, 0)) / z).real() - 1;
    };
    t.omega2 = [MR = t.M_R, MU = t.M_U](double z) { return invert_M_on_negative_axis(MR, MU(z)); };
    return inst;
}

HvMoments hv_moments(const HvInstance& inst, int n) {
    if (n < 0) throw UsageError("hv_moments needs n >= 0");
    if (n > 20) throw UsageError("hv_moments: order too large");
    HvMoments m;
    m.U.push_back(1);
    m.V.push_back(1);
    const Letter X = Letter::rf(RFunc::x()), OmR = Letter::rf(RFunc::one_minus_r()), Y = Letter::y();
    for (int k = 1; k <= n; ++k) {
        m.U.push_back(free_mixed_moment(words::alternating(Family::R, 2 * k), inst.oracle));
        // V^k ~ (X (1 + R Y))^k = (X + (1 - R) Y)^k after conjugation by R^{1/2}
        double acc = 0;
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            MixedWord w;
            for (int j = 0; j < k; ++j) {
                if (mask & (1u << j)) {
                    w.push_back(OmR);
                    w.push_back(Y);
                } else {
                    w.push_back(X);
                }
            }
            acc += free_mixed_moment(w, inst.oracle);
        }
        m.V.push_back(acc);
    }
    return m;
}

HvReport verify_hv_property(double alpha, double beta, double gamma, int n, double tol, bool exploratory) {
    if (!exploratory && !in_hv_regime(alpha, beta, gamma))
        throw UsageError("HV property needs alpha > 1, beta > 1 - alpha, gamma > 0 (use exploratory mode)");
    if (n < 1 || n > 8) throw UsageError("HV verification order must be in 1..8");
    if (!(tol > 0)) throw UsageError("tolerance must be positive");
    HvReport rep;
    rep.params = {alpha, beta, gamma};
    rep.order = n;
    rep.exploratory = exploratory;
    const HvInstance inst = hv_instance(alpha, beta, gamma);
    rep.computed = hv_moments(inst, n);
    const FreePoissonParams vp(alpha, 1 / gamma);
    rep.reference_U.push_back(1);
    rep.reference_V.push_back(1);
    for (int k = 1; k <= n; ++k) {
        rep.reference_U.push_back(inst.mu_U->moment(k));
        rep.reference_V.push_back(mp_moment(vp, k));
        auto rel = [](double c, double r) { return std::abs(c - r) / std::max(1.0, std::abs(r)); };
        rep.deviation_U = std::max(rep.deviation_U, rel(rep.computed.U[k], rep.reference_U[k]));
        rep.deviation_V = std::max(rep.deviation_V, rel(rep.computed.V[k], rep.reference_V[k]));
    }
    rep.pass = !exploratory && rep.deviation_U <= tol && rep.deviation_V <= tol;
    return rep;
}

// ---------------------------------------------------------------------------

KPoint k_point(const PointwiseTransforms& t, double z) {
    if (z == 0) return {0, 0, 0};
    if (!(z < 0)) throw DomainError("pointwise k needs z <= 0");
    return {z, t.omega2(z), t.M_U(z)};
}

double k_special_pointwise(const PointwiseTransforms& t, double phi_g, double phi_g2, KPoint zp, KPoint wp) {
    const double s = phi_g + phi_g2;
    if (same_point(zp.z, wp.z)) {
        const double z = zp.z, om = zp.omega, M = zp.m;
        if (z == 0) return phi_g2;
        const double dM = t.dM_R(om);
        const double dom = derivative(t.M_U, z) / dM;
        const double e = om - 1;
        const double dF = (M - phi_g + om * dM) / (e * e) - 2 * om * (M - phi_g) / (e * e * e);
        const double k1 = dF + s / (e * e);
        const double A = dM / e - (M - phi_g) / (e * e);
        const double cdd = z * dom - om;
        return k1 + cdd * A * A / dM;
    }
    const double oz = zp.omega, ow = wp.omega, Mz = zp.m, Mw = wp.m, z = zp.z, w = wp.z;
    if (oz == ow) throw NumericError("k: omega2 takes the same value at distinct points");
    auto F = [phi_g](double om, double M) { return om * (M - phi_g) / ((om - 1) * (om - 1)); };
    auto F2 = [phi_g](double om, double M) { return (M - phi_g) / (om - 1); };
    const double k1 = (F(oz, Mz) - F(ow, Mw)) / (oz - ow) + s / ((oz - 1) * (ow - 1));
    const double dA = F2(oz, Mz) - F2(ow, Mw);
    const double k2 = (w * oz - z * ow) / ((Mz - Mw) * (oz - ow) * (z - w)) * dA * dA;
    return k1 + k2;
}

double k_special_pointwise(const HvInstance& inst, double z, double w) {
    if (!inst.x_strictly_positive()) throw DomainError("k with g = X^{-1} needs X strictly positive");
    const auto& t = inst.transforms;
    return k_special_pointwise(t, inst.mu_X.moment(-1), inst.mu_X.moment(-2), k_point(t, z), k_point(t, w));
}

double k_general_pointwise(const HvInstance& inst, RFunc g1, RFunc g2, double z, double w) {
    if (!inst.mu_R) throw DomainError("k_general_pointwise needs the law of R");
    const SpectralMeasure& mu = *inst.mu_R;
    const auto& t = inst.transforms;
    const KPoint zp = k_point(t, z), wp = k_point(t, w);
    const double oz = zp.omega, ow = wp.omega;
    auto res = [&](RFunc f) {
        return mu.integrate_continuous([&](double r) { return f(r) / ((1 - oz * r) * (1 - ow * r)); });
    };
    const double k1 = res(g1 * g2);
    if (z == 0 && w == 0) return k1;
    const double A1 = res(RFunc::r() * g1), A2 = res(RFunc::r() * g2), B = res(RFunc::r());
    double cdd;
    if (same_point(z, w))
        cdd = z * derivative(t.M_U, z) / t.dM_R(oz) - oz;
    else
        cdd = (w * oz - z * ow) / (z - w);
    return k1 + cdd * A1 * A2 / B;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, double>> RegressionConstants::named() const {
    return {{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"lambda", lambda}, {"p", p}, {"q", q}, {"K", K},
            {"p2", p2}, {"x_inv", x_inv}, {"x_inv2", x_inv2}, {"x2", x2}, {"lambda_y", lambda_y}};
}

double& RegressionConstants::field(const std::string& n) {
    if (n == "a") return a;
    if (n == "b") return b;
    if (n == "c") return c;
    if (n == "d") return d;
    if (n == "lambda") return lambda;
    if (n == "p") return p;
    if (n == "q") return q;
    if (n == "K") return K;
    if (n == "p2") return p2;
    if (n == "x_inv") return x_inv;
    if (n == "x_inv2") return x_inv2;
    if (n == "x2") return x2;
    if (n == "lambda_y") return lambda_y;
    throw UsageError("unknown regression constant " + n);
}

RegressionConstants compute_constants(const HvInstance& inst, int characterization) {
    if (characterization != 0) check_case(characterization);
    RegressionConstants k;
    k.characterization = characterization;
    const HvMoments mv = hv_moments(inst, 2);
    k.a = mv.V[1];
    k.b = mv.V[2];
    if (inst.mu_V && inst.mu_V->atom0 == 0) {
        k.c = inst.mu_V->moment(-1);
        k.d = inst.mu_V->moment(-2);
    } else {
        k.c = k.d = nan;
    }
    k.p = inst.mu_X.moment(1);
    k.x2 = inst.mu_X.moment(2);
    if (inst.mu_X.atom0 == 0) {
        k.x_inv = inst.mu_X.moment(-1);
        k.x_inv2 = inst.mu_X.moment(-2);
    } else {
        k.x_inv = k.x_inv2 = nan;
    }
    k.lambda_y = inst.mu_Y.moment(1);
    k.K = inst.transforms.M_U(-1);
    k.p2 = inst.transforms.omega2(-1);
    switch (characterization) {
        case 1:
            k.q = k.x_inv;
            k.lambda = k.c * (k.a - k.p) + k.q - k.c;
            break;
        case 2:
            k.q = k.x_inv;
            k.lambda = k.x_inv * k.c * k.c - k.c * k.c * k.c - k.d * k.K;
            break;
        case 3:
            k.q = k.x2;
            k.lambda = k.lambda_y;
            break;
        default:
            k.q = k.lambda = nan;
    }
    return k;
}

RegressionSides regression_sides(int identity, const HvInstance& inst, const RegressionConstants& k, double z) {
    if (!(z < 0) || z == -1) throw DomainError("regression identities are evaluated at z < 0, z != -1");
    const auto& t = inst.transforms;
    const KPoint P = k_point(t, z);
    const double om = P.omega, M = P.m;
    switch (identity) {
        case 1:
            return {(om - 1) * M + om, z / (z + 1) * (k.a * M + k.a - k.p)};
        case 2:
            return {z * (M - k.x_inv) / (om - 1), k.c * z + k.c * (z + 1) * M};
        case 3: {
            const double D = (om - 1) * M + om;
            const double lhs = k.x2 + k.lambda_y * k.p + om * k.p + (om - 1) * D + D * D / (z * M);
            const double rhs = k.b * (1 + k.K) / (z + 1) + k.b * z / (z + 1) * (M + 1) + k.lambda_y * D / M;
            return {lhs, rhs};
        }
        case 4: {
            const double lhs = k_special_pointwise(t, k.x_inv, k.x_inv2, P, KPoint{-1, k.p2, k.K});
            return {lhs, k.d + k.d * (1 + 1 / z) * M};
        }
        default:
            throw UsageError("regression identity must be 1, 2, 3 or 4");
    }
}

double regression_residual(int identity, const HvInstance& inst, const RegressionConstants& k,
                           const std::vector<double>& grid) {
    if (identity < 1 || identity > 4) throw UsageError("regression identity must be 1, 2, 3 or 4");
    if ((identity == 2 || identity == 4) && !inst.x_strictly_positive())
        throw DomainError("identities with V^{-1} need X strictly positive");
    double r = 0;
    for (double z : grid) {
        const RegressionSides s = regression_sides(identity, inst, k, z);
        const double e = std::abs(s.lhs - s.rhs);
        r = std::isfinite(e) ? std::max(r, e) : std::numeric_limits<double>::infinity();
    }
    return r;
}

std::vector<double> default_residual_grid() { return negative_log_grid(0.05, 5, 40); }

Recovered determine_from_equations(int characterization, const RegressionConstants& k) {
    check_case(characterization);
    double den, lambda, ax, bx, gx, rho, ly, sy;
    switch (characterization) {
        case 1: {
            den = k.a * k.c - 1;
            if (!(den > 0)) throw DomainError("case 1 needs ac > 1");
            lambda = k.c * (k.a - k.p) + k.x_inv - k.c;
            ax = k.a * k.c / den;
            bx = lambda / den;
            gx = k.c / den;
            rho = k.c * (k.p - k.a) / den;
            ly = lambda / den;
            sy = den / k.c;
            break;
        }
        case 2: {
            den = k.d - k.c * k.c;
            if (!(den > 0)) throw DomainError("case 2 needs d > c^2");
            const double c3 = k.c * k.c * k.c;
            lambda = k.x_inv * k.c * k.c - c3 - k.d * k.K;
            ax = k.d / den;
            bx = lambda / den;
            gx = c3 / den;
            rho = (k.c * k.c * k.x_inv - c3 - lambda) / den;
            ly = lambda / den;
            sy = den / c3;
            break;
        }
        default: {
            den = k.b - k.a * k.a;
            if (!(den > 0)) throw DomainError("case 3 needs b > a^2");
            lambda = k.lambda_y;
            ax = k.a * k.a / den;
            bx = k.a * lambda / den;
            gx = k.a / den;
            rho = k.a * (k.p - k.a) / den;
            ly = k.a * lambda / den;
            sy = den / k.a;
            break;
        }
    }
    if (!std::isfinite(lambda)) throw DomainError("constants needed by this case are not available");
    if (!(lambda > 0)) throw InconsistencyError("derived lambda is not positive");
    if (!(bx >= 0 || ax > 1)) throw DomainError("quadratic for G_X lies outside the uniqueness hypothesis");
    Recovered r{FreeKummerParams::make(ax, bx, gx), FreePoissonParams(ly, sy), lambda, rho, {}};
    r.x_law = kummer_from_quadratic(ax, bx, gx, bx + gx + rho);
    return r;
}

std::vector<int> identities_of(int characterization) {
    check_case(characterization);
    if (characterization == 1) return {1, 2};
    if (characterization == 2) return {2, 4};
    return {1, 3};
}

std::vector<std::string> constants_of(int characterization) {
    check_case(characterization);
    if (characterization == 1) return {"a", "c", "p", "x_inv"};
    if (characterization == 2) return {"c", "d", "x_inv", "x_inv2", "K", "p2"};
    return {"a", "b", "p", "x2", "lambda_y", "K"};
}

std::vector<std::pair<std::string, double>> characterization_residuals(int characterization, const HvInstance& inst,
                                                                       const RegressionConstants& k,
                                                                       const std::vector<double>& grid) {
    std::vector<std::pair<std::string, double>> out;
    for (int id : identities_of(characterization))
        out.emplace_back("identity " + std::to_string(id), regression_residual(id, inst, k, grid));
    if (characterization == 2) {
        out.emplace_back("p2 relation",
                         std::abs(k.p2 - 1 - k.c * (k.c - k.x_inv - k.x_inv2) / (k.x_inv * k.d)));
        out.emplace_back("K relation", std::abs(k.K - k.x_inv - k.c * (k.p2 - 1)));
    }
    if (characterization == 3) {
        out.emplace_back("second moment relation",
                         std::abs(k.b * k.p / k.a - (k.x2 + k.lambda_y * k.p - (k.a - k.p))));
        out.emplace_back("resolvent relation", std::abs(1 + k.K - k.p / k.a));
    }
    for (auto& [name, v] : out)
        if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
    return out;
}

CharacterizationReport characterize(int characterization, double alpha, double beta, double gamma,
                                    const std::vector<double>& grid, double perturbation) {
    check_case(characterization);
    CharacterizationReport rep;
    rep.characterization = characterization;
    const HvInstance inst = hv_instance(alpha, beta, gamma);
    if (characterization != 3 && !inst.x_strictly_positive())
        throw DomainError("cases 1 and 2 need X strictly positive");
    rep.constants = compute_constants(inst, characterization);
    const RegressionConstants& k = rep.constants;
    rep.inequality = characterization == 1   ? k.a * k.c > 1
                     : characterization == 2 ? k.d > k.c * k.c
                                             : k.b > k.a * k.a;
    rep.residuals = characterization_residuals(characterization, inst, k, grid);
    for (const auto& [name, v] : rep.residuals) rep.max_residual = std::max(rep.max_residual, v);
    try {
        rep.recovered = determine_from_equations(characterization, k);
        const Recovered& r = *rep.recovered;
        rep.parameter_error = std::max({std::abs(r.x.alpha - alpha), std::abs(r.x.beta - (alpha + beta)),
                                        std::abs(r.x.gamma - gamma), std::abs(r.y.lambda - (alpha + beta)),
                                        std::abs(r.y.scale - 1 / gamma)});
    } catch (const Error& e) {
        rep.recovery_error = e.what();
        rep.parameter_error = std::numeric_limits<double>::infinity();
    }
    rep.min_perturbed_residual = std::numeric_limits<double>::infinity();
    for (const std::string& name : constants_of(characterization)) {
        RegressionConstants kp = k;
        kp.field(name) += perturbation;
        double worst = 0;
        for (const auto& [n, v] : characterization_residuals(characterization, inst, kp, grid))
            worst = std::max(worst, v);
        if (worst < rep.min_perturbed_residual) {
            rep.min_perturbed_residual = worst;
            rep.least_sensitive_constant = name;
        }
    }
    return rep;
}

}  // namespace fk
