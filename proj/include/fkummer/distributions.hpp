#pragma once

// Free Poisson (Marchenko-Pastur) laws nu(lambda, s) and free-Kummer laws
// K(alpha, beta, gamma).

#include <cmath>
#include <limits>

#include "fkummer/transforms.hpp"

namespace fk {

struct FreePoissonParams {
    double lambda = 1;
    double scale = 1;

    FreePoissonParams() = default;
    FreePoissonParams(double lambda, double scale);  // validates
    double lo() const { return scale * (1 - std::sqrt(lambda)) * (1 - std::sqrt(lambda)); }
    double hi() const { return scale * (1 + std::sqrt(lambda)) * (1 + std::sqrt(lambda)); }
    double atom0() const { return std::max(0.0, 1 - lambda); }
};

SpectralMeasure mp_measure(const FreePoissonParams& p, int nodes = default_quadrature_nodes);
cplx mp_cauchy(const FreePoissonParams& p, cplx z);
// sum_k N(n, k) lambda^k s^n
double mp_moment(const FreePoissonParams& p, int n);

enum class KummerRegime {
    General,        // alpha != 1
    ShiftedPoisson, // alpha = 1, 1 - beta > (1 + sqrt(gamma))^2: nu(1 - beta, 1/gamma) shifted by -1
    Sigma,          // alpha = 1 otherwise: a = 0, density with the sigma term
};

struct FreeKummerParams {
    double alpha = 2;
    double beta = 1;
    double gamma = 1;
    KummerRegime regime = KummerRegime::General;
    double a = 0;
    double b = 0;
    double sigma = std::numeric_limits<double>::quiet_NaN();
    double delta = std::numeric_limits<double>::quiet_NaN();

    // solves for the endpoints, sigma and delta; throws DomainError/NumericError
    static FreeKummerParams make(double alpha, double beta, double gamma);
    double atom0() const { return std::max(0.0, 1 - alpha); }
};

struct Endpoints {
    double a;
    double b;
};

Endpoints kummer_endpoints(double alpha, double beta, double gamma);
// residuals of the two endpoint equations (alpha != 1) or of the equation for b
double kummer_endpoint_residual(double alpha, double beta, double gamma, Endpoints e);

double kummer_density(const FreeKummerParams& p, double x);
SpectralMeasure kummer_measure(const FreeKummerParams& p, int nodes = default_quadrature_nodes);
SpectralMeasure kummer_measure(double alpha, double beta, double gamma);
cplx kummer_cauchy(const FreeKummerParams& p, cplx z);
cplx kummer_cauchy(double alpha, double beta, double gamma, cplx z);
// z(z+1)G^2 - (gamma z(z+1) - (alpha-1)(z+1) + beta z)G + gamma z + delta
cplx kummer_quadratic_residual(const FreeKummerParams& p, double delta, cplx z, cplx G);

// gamma m_1 + gamma + beta - alpha
double kummer_delta(double alpha, double beta, double gamma);

// Solves the quadratic for G, selects the Nevanlinna branch by continuation
// from +i infinity and inverts. Requires beta >= 0 or alpha > 1.
SpectralMeasure kummer_from_quadratic(double alpha, double beta, double gamma, double delta,
                                      const InversionOptions& opt = {});
// the branch-selected root of the quadratic at z (Im z >= 0)
cplx quadratic_branch(double alpha, double beta, double gamma, double delta, cplx z);

struct SigmaCheck {
    bool nonnegative;  // 1 - beta <= (1 + sqrt(gamma))^2
    double b;          // positive root of gamma b/2 + beta - beta/sqrt(b+1) = 2
    double sigma;      // gamma + beta/sqrt(b+1)
};
SigmaCheck sigma_regime_check(double beta, double gamma);

// law of (1 + X)^{-1}; X must have no atom at zero
SpectralMeasure pushforward_resolvent_shift(const SpectralMeasure& mu_X,
                                            int nodes = default_quadrature_nodes);

}  // namespace fk
