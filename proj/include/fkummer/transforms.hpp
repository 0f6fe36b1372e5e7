#pragma once

// Spectral measures on [0, inf) and their analytic transforms.

#include <complex>
#include <functional>
#include <vector>

#include "fkummer/partitions.hpp"
#include "fkummer/series.hpp"

namespace fk {

using cplx = std::complex<double>;
using ComplexFn = std::function<cplx(cplx)>;
using RealFn = std::function<double(double)>;

inline constexpr int default_quadrature_nodes = 2048;

// atom0 at x = 0 plus a density on (lo, hi). A law with lo == hi is a point
// mass of weight 1 - atom0 at lo.
struct SpectralMeasure {
    double atom0 = 0;
    double lo = 0;
    double hi = 0;
    RealFn density;
    // x = mid + half cos(theta), midpoint rule in theta; weights include f(x)
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> density_values;

    static SpectralMeasure from_density(double atom0, double lo, double hi, RealFn f,
                                        int n = default_quadrature_nodes);
    static SpectralMeasure point_mass(double x);

    bool is_point_mass() const { return lo == hi; }
    double continuous_mass() const;
    double mass() const { return atom0 + continuous_mass(); }

    // integral of g over the continuous part only
    template <class F>
    auto integrate_continuous(F&& g) const -> decltype(g(0.0)) {
        decltype(g(0.0)) acc{};
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * g(nodes[i]);
        return acc;
    }
    template <class F>
    auto integrate(F&& g) const -> decltype(g(0.0)) {
        auto acc = integrate_continuous(g);
        if (atom0 > 0) acc += atom0 * g(0.0);
        return acc;
    }

    // m_k for k = 0..n; negative k needs atom0 == 0
    double moment(int k) const;
    std::vector<double> moments(int n) const;

    // mass, density sign and support checks; throws ValidationError
    void validate(double mass_tol = 1e-8) const;
};

cplx cauchy_transform(const SpectralMeasure& mu, cplx z);
cplx moment_transform(const SpectralMeasure& mu, cplx z);
cplx eta_transform(const SpectralMeasure& mu, cplx z);

// M(z) = sum_{k>=1} m_k z^k from (m_1, ..., m_N)
Series1 moment_series(const std::vector<double>& m);
Series1 moment_transform_series(const SpectralMeasure& mu, int n);
Series1 eta_series(const Series1& M);
// S(z) = (1 + z)/z M^{<-1>}(z) to order n; M must have order >= n + 1
Series1 s_transform_series(const Series1& M, int n);
Series1 s_transform_series(const SpectralMeasure& mu, int n);

struct InversionOptions {
    // eps = ladder[k] * (hi - lo), capped at edge_ratio * distance to the edge
    std::vector<double> eps_ladder{1e-6, 5e-7, 2.5e-7};
    double edge_ratio = 1e-3;
    int nodes = default_quadrature_nodes;
    double atom_floor = 1e-9;
};

// Density -Im G(x + i0)/pi by two-step Richardson over the eps ladder; atom at
// zero from -t G(-t) as t -> 0+, extrapolated in sqrt(t).
SpectralMeasure stieltjes_invert(const ComplexFn& G, double lo, double hi,
                                 const InversionOptions& opt = {});
double stieltjes_density(const ComplexFn& G, double x, double lo, double hi,
                         const InversionOptions& opt = {});
double stieltjes_atom(const ComplexFn& G);

// Unique z < 0 with M(z) = target for M increasing on (-inf, 0), M(0) = 0.
double invert_M_on_negative_axis(const RealFn& M, double target, double max_abs = 1e12);

// k-point Gauss rule for the measure sum_i w_i delta_{x_i} (x_i > 0), built
// for the weight x^shift so that x^j is exact for shift <= j <= shift + 2k - 1.
DiscreteLaw<double> gauss_rule(const std::vector<double>& x, const std::vector<double>& w, int k,
                               int shift = 0);

}  // namespace fk
