#include "fkummer/transforms.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

namespace fk {

SpectralMeasure SpectralMeasure::from_density(double atom0, double lo, double hi, RealFn f, int n) {
    if (!(atom0 >= 0 && atom0 <= 1)) throw DomainError("atom weight must lie in [0, 1]");
    if (!(lo >= 0 && hi > lo)) throw DomainError("support must satisfy 0 <= lo < hi");
    if (n < 2) throw UsageError("quadrature needs at least two nodes");
    SpectralMeasure mu;
    mu.atom0 = atom0;
    mu.lo = lo;
    mu.hi = hi;
    mu.density = std::move(f);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    mu.nodes.resize(n);
    mu.weights.resize(n);
    mu.density_values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double th = std::numbers::pi * (i + 0.5) / n;
        const double x = mid + half * std::cos(th);
        const double fx = mu.density(x);
        mu.nodes[i] = x;
        mu.density_values[i] = fx;
        mu.weights[i] = std::numbers::pi / n * half * std::sin(th) * fx;
    }
    return mu;
}

SpectralMeasure SpectralMeasure::point_mass(double x) {
    if (!(x >= 0)) throw DomainError("point mass must sit in [0, inf)");
    SpectralMeasure mu;
    if (x == 0) {
        mu.atom0 = 1;
    } else {
        mu.nodes = {x};
        mu.weights = {1.0};
        mu.density_values = {0.0};
    }
    mu.lo = mu.hi = x;
    mu.density = [](double) { return 0.0; };
    return mu;
}

double SpectralMeasure::continuous_mass() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

double SpectralMeasure::moment(int k) const {
    if (k == 0) return mass();
    if (k < 0 && atom0 > 0) throw DomainError("negative moment of a law with an atom at zero");
    const double acc = integrate_continuous([k](double x) { return std::pow(x, k); });
    return acc;
}

std::vector<double> SpectralMeasure::moments(int n) const {
    std::vector<double> m(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) m[k] = moment(k);
    return m;
}

void SpectralMeasure::validate(double mass_tol) const {
    if (!(lo >= 0 && hi >= lo)) throw ValidationError("support must lie in [0, inf)");
    if (std::abs(mass() - 1) > mass_tol)
        throw ValidationError("total mass " + std::to_string(mass()) + " differs from 1");
    for (double f : density_values)
        if (!(f >= -1e-12)) throw ValidationError("density is negative at a quadrature node");
}

cplx cauchy_transform(const SpectralMeasure& mu, cplx z) {
    if (z.imag() == 0 && z.real() >= mu.lo && z.real() <= mu.hi)
        throw DomainError("Cauchy transform evaluated on the support");
    if (mu.atom0 > 0 && z == cplx(0)) throw DomainError("Cauchy transform evaluated at the atom");
    cplx g = mu.integrate_continuous([z](double x) { return 1.0 / (z - x); });
    if (mu.atom0 > 0) g += mu.atom0 / z;
    return g;
}

cplx moment_transform(const SpectralMeasure& mu, cplx z) {
    if (z.imag() == 0 && z.real() != 0) {
        const double x = 1 / z.real();
        if (x >= mu.lo && x <= mu.hi) throw DomainError("moment transform is singular at this point");
    }
    return mu.integrate_continuous([z](double x) { return z * x / (1.0 - z * x); });
}

cplx eta_transform(const SpectralMeasure& mu, cplx z) {
    const cplx m = moment_transform(mu, z);
    if (std::abs(1.0 + m) < 1e-14) throw PoleError("eta transform: M(z) = -1");
    return m / (1.0 + m);
}

Series1 moment_series(const std::vector<double>& m) {
    Series1 s(static_cast<int>(m.size()));
    for (std::size_t k = 0; k < m.size(); ++k) s[static_cast<int>(k) + 1] = m[k];
    return s;
}

Series1 moment_transform_series(const SpectralMeasure& mu, int n) {
    std::vector<double> m;
    for (int k = 1; k <= n; ++k) m.push_back(mu.moment(k));
    return moment_series(m);
}

Series1 eta_series(const Series1& M) {
    return M * series_reciprocal(M + Series1::constant(1.0, M.order()));
}

Series1 s_transform_series(const Series1& M, int n) {
    if (M.order() < n + 1) throw UsageError("s_transform_series: moment series too short");
    if (std::abs(M[1]) == 0) throw DomainError("S-transform needs a nonzero first moment");
    const Series1 inv = series_revert(M.truncated(n + 1)).shift_down();
    Series1 onep = Series1::identity(n);
    onep[0] = 1;
    return onep * inv;
}

Series1 s_transform_series(const SpectralMeasure& mu, int n) {
    return s_transform_series(moment_transform_series(mu, n + 1), n);
}

namespace {

// value at 0 of the polynomial through (h[i], v[i])
double neville_at_zero(std::vector<double> h, std::vector<double> v) {
    const std::size_t n = h.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            v[i] = (h[i + m] * v[i] - h[i] * v[i + 1]) / (h[i + m] - h[i]);
    return v[0];
}

}  // namespace

double stieltjes_density(const ComplexFn& G, double x, double lo, double hi, const InversionOptions& opt) {
    if (opt.eps_ladder.size() < 2) throw UsageError("eps ladder needs at least two entries");
    const double d = std::min(x - lo, hi - x);
    if (!(d > 0)) return 0;
    const double e0 = std::min(opt.eps_ladder[0] * (hi - lo), opt.edge_ratio * d);
    std::vector<double> h, v;
    for (double e : opt.eps_ladder) {
        const double eps = e0 * e / opt.eps_ladder[0];
        h.push_back(eps);
        v.push_back(-G(cplx(x, eps)).imag() / std::numbers::pi);
    }
    return neville_at_zero(h, v);
}

double stieltjes_atom(const ComplexFn& G) {
    std::vector<double> h, v;
    for (double t : {1e-8, 2.5e-9, 6.25e-10}) {
        h.push_back(std::sqrt(t));
        v.push_back((-t * G(cplx(-t, 0))).real());
    }
    return neville_at_zero(h, v);
}

SpectralMeasure stieltjes_invert(const ComplexFn& G, double lo, double hi, const InversionOptions& opt) {
    const double zfar = -1e6 * (1 + std::abs(hi));
    const cplx tail = zfar * G(cplx(zfar, 0));
    if (!std::isfinite(tail.real()) || std::abs(tail - 1.0) > 1e-3)
        throw DomainError("stieltjes_invert: G(z) does not decay like 1/z");
    double atom = stieltjes_atom(G);
    if (atom < opt.atom_floor) atom = 0;
    if (atom > 1 + 1e-9) throw NumericError("stieltjes_invert: atom weight exceeds one");
    atom = std::min(atom, 1.0);
    if (hi <= lo) {
        if (atom < 1 - 1e-9) throw DomainError("stieltjes_invert: empty support but mass is missing");
        return SpectralMeasure::point_mass(0);
    }
    RealFn dens = [G, lo, hi, opt](double x) { return stieltjes_density(G, x, lo, hi, opt); };
    return SpectralMeasure::from_density(atom, lo, hi, std::move(dens), opt.nodes);
}

double invert_M_on_negative_axis(const RealFn& M, double target, double max_abs) {
    if (target == 0) return 0;
    if (!(target < 0)) throw DomainError("target outside the range of M on the negative axis");
    double hi = 0, mhi = 0;
    double lo = -1, mlo = M(lo);
    while (mlo >= target) {
        if (!(mlo < mhi)) throw NumericError("M is not increasing on the negative axis");
        hi = lo;
        mhi = mlo;
        lo *= 2;
        if (-lo > max_abs) throw DomainError("target outside the range of M on the negative axis");
        mlo = M(lo);
    }
    auto f = [&](double z) {
        const double v = M(z);
        if (v < mlo || v > mhi) throw NumericError("M is not monotone on the bracket");
        return v - target;
    };
    boost::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(a - b) <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)); };
    auto r = boost::math::tools::toms748_solve(f, lo, hi, mlo - target, mhi - target, tol, iters);
    return 0.5 * (r.first + r.second);
}

DiscreteLaw<double> gauss_rule(const std::vector<double>& x, const std::vector<double>& w, int k, int shift) {
    const std::size_t n = x.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw UsageError("gauss_rule: bad number of nodes");
    std::vector<double> v(n);
    double mu0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0) && shift != 0) throw DomainError("gauss_rule: shifted weight needs positive nodes");
        v[i] = w[i] * std::pow(x[i], shift);
        mu0 += v[i];
    }
    // Stieltjes procedure with full reorthogonalization
    std::vector<std::vector<double>> q;
    q.emplace_back(n, 1 / std::sqrt(mu0));
    Eigen::VectorXd a(k), b(k);
    b.setZero();
    for (int j = 0; j < k; ++j) {
        const auto& qj = q[j];
        double aj = 0;
        for (std::size_t i = 0; i < n; ++i) aj += v[i] * x[i] * qj[i] * qj[i];
        a(j) = aj;
        if (j + 1 == k) break;
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = x[i] * qj[i];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& ql : q) {
                double c = 0;
                for (std::size_t i = 0; i < n; ++i) c += v[i] * r[i] * ql[i];
                for (std::size_t i = 0; i < n; ++i) r[i] -= c * ql[i];
            }
        double nr = 0;
        for (std::size_t i = 0; i < n; ++i) nr += v[i] * r[i] * r[i];
        nr = std::sqrt(nr);
        if (!(nr > 0)) throw NumericError("gauss_rule: measure has too few support points");
        b(j + 1) = nr;
        for (auto& ri : r) ri /= nr;
        q.push_back(std::move(r));
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        J(j, j) = a(j);
        if (j > 0) J(j, j - 1) = J(j - 1, j) = b(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw NumericError("gauss_rule: eigensolver failed");
    DiscreteLaw<double> law;
    for (int j = 0; j < k; ++j) {
        const double t = es.eigenvalues()(j);
        const double v0 = es.eigenvectors()(0, j);
        law.nodes.push_back(t);
        law.weights.push_back(mu0 * v0 * v0 / std::pow(t, shift));
    }
    law.min_power = shift;
    law.max_power = shift + 2 * k - 1;
    return law;
}

}  // namespace fk
