#include "fkummer/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/tools/roots.hpp>

namespace fk {

namespace {

constexpr double pi = std::numbers::pi;

// root of f on [lo, hi] with f(lo), f(hi) of opposite signs
template <class F>
double bracket_root(F f, double lo, double hi) {
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw NumericError("root is not bracketed");
    boost::uintmax_t iters = 200;
    auto tol = [](double a, double b) {
        return std::abs(a - b) <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    };
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
}

cplx sqrt_product(cplx z, double a, double b) { return std::sqrt(z - a) * std::sqrt(z - b); }

bool shifted_poisson_regime(double beta, double gamma) {
    const double r = 1 + std::sqrt(gamma);
    return 1 - beta > r * r;
}

void check_kummer_args(double alpha, double gamma) {
    if (!(alpha > 0) || !(gamma > 0)) throw DomainError("free-Kummer parameters need alpha > 0 and gamma > 0");
}

// Central interpolation around a removable singularity of f at z0.
template <class F>
cplx removable_limit(const F& f, cplx z) {
    const double h = 2e-3;
    auto S = [&](double s) { return 0.5 * (f(z + s) + f(z - s)); };
    return (4.0 * S(h / 2) - S(h)) / 3.0;
}

}  // namespace

FreePoissonParams::FreePoissonParams(double l, double s) : lambda(l), scale(s) {
    if (!(l > 0) || !(s > 0)) throw DomainError("free Poisson parameters need lambda > 0 and scale > 0");
}

SpectralMeasure mp_measure(const FreePoissonParams& p, int nodes) {
    const double l = p.lambda, s = p.scale, lo = p.lo(), hi = p.hi();
    auto f = [l, s](double x) {
        const double r = 4 * l * s * s - (x - s * (1 + l)) * (x - s * (1 + l));
        return r > 0 ? std::sqrt(r) / (2 * pi * s * x) : 0.0;
    };
    return SpectralMeasure::from_density(p.atom0(), lo, hi, f, nodes);
}

cplx mp_cauchy(const FreePoissonParams& p, cplx z) {
    if (z == cplx(0)) throw DomainError("free Poisson Cauchy transform evaluated at zero");
    if (z.imag() == 0 && z.real() >= p.lo() && z.real() <= p.hi())
        throw DomainError("free Poisson Cauchy transform evaluated on the support");
    const double s = p.scale;
    return (z + s * (1 - p.lambda) - sqrt_product(z, p.lo(), p.hi())) / (2 * s * z);
}

double mp_moment(const FreePoissonParams& p, int n) {
    if (n == 0) return 1;
    double acc = 0;
    for (int k = 1; k <= n; ++k) {
        const double nar = boost::math::binomial_coefficient<double>(n, k) *
                           boost::math::binomial_coefficient<double>(n, k - 1) / n;
        acc += nar * std::pow(p.lambda, k);
    }
    return acc * std::pow(p.scale, n);
}

SigmaCheck sigma_regime_check(double beta, double gamma) {
    if (!(gamma > 0)) throw DomainError("sigma_regime_check needs gamma > 0");
    auto f = [&](double b) { return gamma * b / 2 + beta - beta / std::sqrt(b + 1) - 2; };
    double hi = 1;
    while (f(hi) < 0) {
        hi *= 2;
        if (hi > 1e300) throw NumericError("equation for b has no bracket");
    }
    const double b = bracket_root(f, 0.0, hi);
    const double r = 1 + std::sqrt(gamma);
    return {1 - beta <= r * r, b, gamma + beta / std::sqrt(b + 1)};
}

Endpoints kummer_endpoints(double alpha, double beta, double gamma) {
    check_kummer_args(alpha, gamma);
    if (alpha == 1) {
        if (shifted_poisson_regime(beta, gamma)) {
            const double r = std::sqrt(1 - beta);
            return {-1 + (1 - r) * (1 - r) / gamma, -1 + (1 + r) * (1 + r) / gamma};
        }
        return {0.0, sigma_regime_check(beta, gamma).b};
    }
    const double A = std::abs(alpha - 1);
    auto from_u = [](double u, double t) {
        const double v = std::sqrt(u * u - t * t);
        return Endpoints{u - v, u + v};
    };
    if (beta == 0) return from_u((alpha + 1) / gamma, A / gamma);

    // Reduce to u = (a+b)/2: s = sqrt((a+1)(b+1)), t = sqrt(ab) are explicit in u
    // through the two equations, and s^2 - t^2 = 2u + 1 closes the system.
    auto st = [&](double u) {
        return std::pair{beta / (gamma * u - alpha - 1 + beta), A / (gamma * (u + 1) + beta - alpha - 1)};
    };
    auto F = [&](double u) {
        auto [s, t] = st(u);
        return s * s - t * t - (2 * u + 1);
    };
    const double us = (alpha + 1 - beta) / gamma;
    double lo, hi;
    if (beta > 0) {
        lo = us + 1e-12 * (1 + std::abs(us));
        hi = std::max(us, 0.0) + 1;
        while (F(hi) > 0) {
            hi = 2 * hi + 1;
            if (hi > 1e300) throw NumericError("endpoint system: no bracket");
        }
    } else {
        lo = us - 1 + 1e-12;
        hi = us - 1e-12;
    }
    const int n = 4000;
    std::vector<Endpoints> sols;
    double x0 = lo, f0 = F(lo);
    for (int i = 1; i <= n; ++i) {
        const double x1 = lo + (hi - lo) * i / n, f1 = F(x1);
        if (std::isfinite(f0) && std::isfinite(f1) && (f0 > 0) != (f1 > 0)) {
            const double u = bracket_root(F, x0, x1);
            auto [s, t] = st(u);
            if (s > 0 && t > 0 && u * u > t * t) {
                Endpoints e = from_u(u, t);
                if (e.a > 0) sols.push_back(e);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    if (sols.size() != 1)
        throw DomainError("endpoint system has " + std::to_string(sols.size()) +
                          " admissible solutions; parameters outside a supported regime");
    return sols.front();
}

double kummer_endpoint_residual(double alpha, double beta, double gamma, Endpoints e) {
    if (alpha == 1 && !shifted_poisson_regime(beta, gamma))
        return std::abs(gamma * e.b / 2 + beta - beta / std::sqrt(e.b + 1) - 2) + std::abs(e.a);
    const double s = std::sqrt((e.a + 1) * (e.b + 1)), t = std::sqrt(e.a * e.b);
    const double r1 = gamma + beta / s - std::abs(alpha - 1) / t;
    const double r2 = gamma * (e.a + e.b) / 2 - alpha + 1 + beta - beta / s - 2;
    return std::max(std::abs(r1), std::abs(r2));
}

FreeKummerParams FreeKummerParams::make(double alpha, double beta, double gamma) {
    check_kummer_args(alpha, gamma);
    FreeKummerParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    if (alpha != 1)
        p.regime = KummerRegime::General;
    else
        p.regime = shifted_poisson_regime(beta, gamma) ? KummerRegime::ShiftedPoisson : KummerRegime::Sigma;
    const Endpoints e = kummer_endpoints(alpha, beta, gamma);
    p.a = e.a;
    p.b = e.b;
    if (p.regime == KummerRegime::Sigma) {
        p.sigma = gamma + beta / std::sqrt(p.b + 1);
        if (p.sigma < -1e-12) throw DomainError("sigma is negative: parameters outside the supported regime");
    }
    const SpectralMeasure mu = kummer_measure(p);
    p.delta = gamma * mu.moment(1) + gamma + beta - alpha;
    return p;
}

double kummer_density(const FreeKummerParams& p, double x) {
    if (!(x > p.a && x < p.b)) return 0;
    const double root = std::sqrt((x - p.a) * (p.b - x));
    switch (p.regime) {
        case KummerRegime::ShiftedPoisson:
            return p.gamma / (2 * pi) * root / (x + 1);
        case KummerRegime::Sigma:
            return root / (2 * pi) * (p.sigma / x - p.beta / ((1 + x) * std::sqrt(p.b + 1)));
        case KummerRegime::General:
            break;
    }
    return root / (2 * pi) *
           (std::abs(p.alpha - 1) / (x * std::sqrt(p.a * p.b)) -
            p.beta / ((1 + x) * std::sqrt((p.a + 1) * (p.b + 1))));
}

SpectralMeasure kummer_measure(const FreeKummerParams& p, int nodes) {
    return SpectralMeasure::from_density(p.atom0(), p.a, p.b, [p](double x) { return kummer_density(p, x); },
                                         nodes);
}

SpectralMeasure kummer_measure(double alpha, double beta, double gamma) {
    return kummer_measure(FreeKummerParams::make(alpha, beta, gamma));
}

cplx kummer_cauchy(const FreeKummerParams& p, cplx z) {
    if (z.imag() == 0 && z.real() >= p.a && z.real() <= p.b)
        throw DomainError("free-Kummer Cauchy transform evaluated on the support");
    if (z == cplx(0)) throw DomainError("free-Kummer Cauchy transform evaluated at zero");
    if (p.regime == KummerRegime::ShiftedPoisson)
        return mp_cauchy(FreePoissonParams(1 - p.beta, 1 / p.gamma), z + 1.0);
    auto G = [&p](cplx w) -> cplx {
        const cplx s = sqrt_product(w, p.a, p.b);
        if (p.regime == KummerRegime::Sigma)
            return 0.5 * (p.gamma + p.beta / (w + 1.0) +
                          s * (p.beta / ((w + 1.0) * std::sqrt(p.b + 1)) - p.sigma / w));
        return 0.5 * (p.gamma - (p.alpha - 1) / w + p.beta / (w + 1.0) +
                      s * (p.beta / ((w + 1.0) * std::sqrt((p.a + 1) * (p.b + 1))) -
                           std::abs(p.alpha - 1) / (w * std::sqrt(p.a * p.b))));
    };
    if (std::abs(z + 1.0) < 1e-3) return removable_limit(G, z);
    return G(z);
}

cplx kummer_cauchy(double alpha, double beta, double gamma, cplx z) {
    return kummer_cauchy(FreeKummerParams::make(alpha, beta, gamma), z);
}

cplx kummer_quadratic_residual(const FreeKummerParams& p, double delta, cplx z, cplx G) {
    const cplx P = p.gamma * z * (z + 1.0) - (p.alpha - 1) * (z + 1.0) + p.beta * z;
    return z * (z + 1.0) * G * G - P * G + p.gamma * z + delta;
}

double kummer_delta(double alpha, double beta, double gamma) {
    return FreeKummerParams::make(alpha, beta, gamma).delta;
}

namespace {

struct Quadratic {
    double alpha, beta, gamma, delta;

    std::pair<cplx, cplx> roots(cplx z) const {
        const cplx Q = z * (z + 1.0);
        const cplx P = gamma * z * (z + 1.0) - (alpha - 1) * (z + 1.0) + beta * z;
        const cplx C = gamma * z + delta;
        const cplx d = std::sqrt(P * P - 4.0 * Q * C);
        return {(P - d) / (2.0 * Q), (P + d) / (2.0 * Q)};
    }

    // continuation from Re z + iH down to z (Im z >= 0), starting at the root ~ 1/z
    cplx branch(cplx z, double scale) const {
        const double x = z.real(), yend = z.imag();
        const double H = 1e3 * (1 + std::abs(x) + scale + 1 / gamma);
        cplx zt(x, H);
        auto [r1, r2] = roots(zt);
        cplx g = std::abs(r1 - 1.0 / zt) < std::abs(r2 - 1.0 / zt) ? r1 : r2;
        double ylow = yend > 0 ? yend : 1e-12 * H;
        if (yend <= 0 && x != 0) ylow = std::min(ylow, 1e-3 * std::abs(x));
        const int K = std::max(80, static_cast<int>(std::ceil(std::log(H / ylow) / 0.35)));
        auto step = [&](cplx w) {
            auto [s1, s2] = roots(w);
            g = std::abs(s1 - g) < std::abs(s2 - g) ? s1 : s2;
        };
        for (int k = 1; k <= K; ++k) step(cplx(x, H * std::pow(ylow / H, double(k) / K)));
        if (yend <= 0) step(cplx(x, 0));
        return g;
    }

    // coefficients of the discriminant P^2 - 4QC, constant term first
    std::array<double, 5> discriminant() const {
        const double p1 = gamma - alpha + 1 + beta, p0 = -(alpha - 1);
        return {p0 * p0, 2 * p1 * p0 - 4 * delta, p1 * p1 + 2 * gamma * p0 - 4 * delta - 4 * gamma,
                2 * gamma * p1 - 4 * gamma, gamma * gamma};
    }
};

double polish_root(const std::array<double, 5>& c, double x) {
    for (int it = 0; it < 20; ++it) {
        double p = 0, dp = 0;
        for (int k = 4; k >= 0; --k) {
            dp = dp * x + p;
            p = p * x + c[k];
        }
        if (dp == 0) break;
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) <= 1e-16 * (1 + std::abs(x))) break;
    }
    return x;
}

Endpoints discriminant_support(const Quadratic& q) {
    const auto c = q.discriminant();
    Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
    for (int i = 1; i < 4; ++i) comp(i, i - 1) = 1;
    for (int i = 0; i < 4; ++i) comp(i, 3) = -c[i] / c[4];
    Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
    std::array<cplx, 4> r;
    for (int i = 0; i < 4; ++i) r[i] = es.eigenvalues()(i);
    // the closest pair is the double root of the linear factor
    int bi = 0, bj = 1;
    double best = std::abs(r[0] - r[1]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(r[i] - r[j]) < best) {
                best = std::abs(r[i] - r[j]);
                bi = i;
                bj = j;
            }
    std::vector<cplx> rest;
    for (int i = 0; i < 4; ++i)
        if (i != bi && i != bj) rest.push_back(r[i]);
    for (const cplx& v : rest)
        if (std::abs(v.imag()) > 1e-6 * (1 + std::abs(v))) throw DomainError("quadratic has no real support");
    double a = polish_root(c, rest[0].real()), b = polish_root(c, rest[1].real());
    if (a > b) std::swap(a, b);
    if (std::abs(a) < 1e-12) a = 0;
    if (a < 0 || !(b > a)) throw DomainError("quadratic has no admissible support in [0, inf)");
    return {a, b};
}

}  // namespace

cplx quadratic_branch(double alpha, double beta, double gamma, double delta, cplx z) {
    const Quadratic q{alpha, beta, gamma, delta};
    if (z.imag() < 0) return std::conj(q.branch(std::conj(z), 1.0));
    return q.branch(z, 1.0);
}

SpectralMeasure kummer_from_quadratic(double alpha, double beta, double gamma, double delta,
                                      const InversionOptions& opt) {
    check_kummer_args(alpha, gamma);
    if (!(beta >= 0 || alpha > 1))
        throw DomainError("uniqueness of delta needs beta >= 0 or alpha > 1");
    const double expected = kummer_delta(alpha, beta, gamma);
    if (std::abs(delta - expected) > 1e-6 * std::max(1.0, std::abs(expected)))
        throw ValidationError("delta " + std::to_string(delta) + " does not match the free-Kummer value " +
                              std::to_string(expected));
    const Quadratic q{alpha, beta, gamma, delta};
    const Endpoints e = discriminant_support(q);
    const double scale = e.b;
    ComplexFn G = [q, scale](cplx z) {
        if (z.imag() < 0) return std::conj(q.branch(std::conj(z), scale));
        return q.branch(z, scale);
    };
    SpectralMeasure mu = stieltjes_invert(G, e.a, e.b, opt);
    try {
        mu.validate(1e-6);
    } catch (const ValidationError& err) {
        throw DomainError(std::string("no valid branch: ") + err.what());
    }
    return mu;
}

SpectralMeasure pushforward_resolvent_shift(const SpectralMeasure& mu_X, int nodes) {
    if (mu_X.atom0 > 0) throw DomainError("pushforward of a law with an atom at zero is not supported");
    if (mu_X.is_point_mass()) return SpectralMeasure::point_mass(1 / (1 + mu_X.lo));
    RealFn fX = mu_X.density;
    auto f = [fX](double r) { return fX(1 / r - 1) / (r * r); };
    return SpectralMeasure::from_density(0.0, 1 / (1 + mu_X.hi), 1 / (1 + mu_X.lo), f, nodes);
}

}  // namespace fk
