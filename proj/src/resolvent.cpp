#include "zrs/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <boost/math/differentiation/autodiff.hpp>

#include "zrs/spherical.hpp"

namespace zrs {

namespace {

template <class T>
T smooth_step(const T& t) {
    using std::exp;
    if (static_cast<double>(t) <= 0.0) return T(0.0);
    return exp(-1.0 / t);
}

template <class T>
T bump_profile(const ReproductionOptions& opt, const T& r) {
    using std::exp;
    const T outer = smooth_step(T(opt.cutoff_outer) - r);
    const T inner = smooth_step(r - T(opt.cutoff_inner));
    if (static_cast<double>(outer) == 0.0) return T(0.0);
    const T chi = outer / (outer + inner);
    return exp(-r * r / (2.0 * opt.sigma * opt.sigma)) * chi;
}

// (-Laplace - z) phi for the radial profile, evaluated at distance r from its centre.
dcomplex bump_source(const ReproductionOptions& opt, double r) {
    using boost::math::differentiation::make_fvar;
    if (r >= opt.cutoff_outer) return 0.0;
    const auto x = make_fvar<double, 2>(r);
    const auto y = bump_profile(opt, x);
    const double f = y.derivative(0);
    const double d1 = y.derivative(1);
    const double d2 = y.derivative(2);
    const double lap = r > 1e-12 ? d2 + 2.0 * d1 / r : 3.0 * d2;
    return -lap - opt.z * f;
}

}  // namespace

CVector ResolventKernel::g(const Vec3& x) const {
    const ScattererSet& s = *scatterers;
    CVector v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t m = 0; m < s.size(); ++m)
        v(static_cast<Eigen::Index>(m)) = free_green(energy, x - s.point(m));
    return v;
}

dcomplex ResolventKernel::free(const Vec3& x, const Vec3& xprime) const {
    return free_green(energy, x - xprime);
}

dcomplex ResolventKernel::value(const Vec3& x, const Vec3& xprime) const {
    return free(x, xprime) - (g(x).transpose() * C * g(xprime))(0, 0);
}

ResolventKernel resolvent_kernel(dcomplex z, const ScattererSet& s) {
    if (z.imag() == 0.0) throw BadParams("resolvent kernel requires Im z != 0");
    ResolventKernel k;
    k.energy = ComplexEnergy::at(z);
    k.C = krein_C(k.energy, s);
    k.scatterers = std::make_shared<const ScattererSet>(s);
    return k;
}

double hilbert_identity_residual(dcomplex z1, dcomplex z2, const CMatrix& c1, const CMatrix& c2,
                                 const CMatrix& q1, const CMatrix& q2) {
    const CMatrix phi = (q1 - q2) / (z1 - z2);
    return spectral_norm(CMatrix(c1 - c2 + (z1 - z2) * (c1 * phi * c2)));
}

double hilbert_identity_residual(dcomplex z1, dcomplex z2, const ScattererSet& s) {
    if (z1.imag() == 0.0 || z2.imag() == 0.0) throw BadParams("Hilbert identity needs Im z != 0");
    if (z1 == z2) throw BadParams("Hilbert identity needs z1 != z2");
    const auto e1 = ComplexEnergy::at(z1);
    const auto e2 = ComplexEnergy::at(z2);
    return hilbert_identity_residual(z1, z2, krein_C(e1, s), krein_C(e2, s), build_Q(e1, s),
                                     build_Q(e2, s));
}

double symmetry_residual(dcomplex z, const ScattererSet& s) {
    if (z.imag() == 0.0) throw BadParams("symmetry residual needs Im z != 0");
    const CMatrix c = krein_C(ComplexEnergy::at(z), s);
    const CMatrix cc = krein_C(ComplexEnergy::at(std::conj(z)), s);
    return spectral_norm(CMatrix(c.adjoint() - cc));
}

std::vector<double> default_boundary_radii(double eta) {
    return log_grid(1e-5 * eta, 1e-3 * eta, 6);
}

std::vector<BoundaryFit> boundary_fits(dcomplex z, const ScattererSet& s, const Vec3& source,
                                       const std::vector<double>& radii) {
    const ResolventKernel k = resolvent_kernel(z, s);
    const Vec3 dir = Vec3(1.0, 2.0, 3.0).normalized();
    std::vector<BoundaryFit> fits;
    fits.reserve(s.size());
    for (std::size_t m = 0; m < s.size(); ++m) {
        const Vec3& xm = s.point(m);
        double eta = (xm - source).norm();
        if (!(eta > 0.0)) throw BadParams("source coincides with a scatterer");
        for (std::size_t j = 0; j < s.size(); ++j)
            if (j != m) eta = std::min(eta, (xm - s.point(j)).norm());
        std::vector<double> rho;
        if (radii.empty()) {
            rho = default_boundary_radii(eta);
        } else {
            for (double r : radii) rho.push_back(r * eta);
        }
        if (rho.size() < 3) throw FitUnstable("boundary fit needs at least three radii");

        const auto n = static_cast<Eigen::Index>(rho.size());
        RMatrix a(n, 3);
        CVector f(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = rho[static_cast<std::size_t>(i)];
            a(i, 0) = 1.0 / (4.0 * pi * r);
            a(i, 1) = 1.0;
            a(i, 2) = r;
            f(i) = k.value(xm + r * dir, source) - k.free(xm + r * dir, source);
        }
        const RVector scale = a.colwise().norm().cwiseInverse();
        const RMatrix as = a * scale.asDiagonal();
        Eigen::JacobiSVD<RMatrix> svd(as, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                    : std::numeric_limits<double>::infinity();
        if (!(cond <= 1e8)) throw FitUnstable("boundary fit is ill-conditioned");
        const RVector re = scale.asDiagonal() * svd.solve(RVector(f.real()));
        const RVector im = scale.asDiagonal() * svd.solve(RVector(f.imag()));
        BoundaryFit fit;
        fit.a = {re(0), im(0)};
        fit.b = dcomplex(re(1), im(1)) + k.free(xm, source);
        fit.c = {re(2), im(2)};
        fit.condition = cond;
        const double denom = std::abs(fit.a) + std::abs(fit.b);
        const dcomplex defect = fit.b + 4.0 * pi * s.weight(m) * fit.a;
        fit.residual = denom > 0.0 ? std::abs(defect) / denom : 0.0;
        fits.push_back(fit);
    }
    return fits;
}

std::vector<double> boundary_condition_residual(dcomplex z, const ScattererSet& s,
                                                const Vec3& source,
                                                const std::vector<double>& radii) {
    std::vector<double> out;
    for (const auto& f : boundary_fits(z, s, source, radii)) out.push_back(f.residual);
    return out;
}

double bump(const ReproductionOptions& opt, double r) { return bump_profile(opt, r); }

double reproduction_error(const Vec3& x, const Vec3& centre, const ReproductionOptions& opt) {
    const ComplexEnergy e = ComplexEnergy::at(opt.z);
    const double rmax = (x - centre).norm() + opt.cutoff_outer;
    const auto [gx, gw] = gauss_legendre(opt.radial_nodes);
    const SphereGrid sphere = make_grid(GridKind::GaussLegendreProduct, opt.angular_order);
    const double panel = rmax / static_cast<double>(opt.radial_panels);
    dcomplex total = 0.0;
    for (std::size_t p = 0; p < opt.radial_panels; ++p) {
        const double lo = panel * static_cast<double>(p);
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double rho = lo + 0.5 * panel * (gx[i] + 1.0);
            const double wr = 0.5 * panel * gw[i];
            // G0 rho^2 = rho e^{i sqrt(z) rho} / (4 pi)
            const dcomplex radial = wr * rho * std::exp(I * e.sqrt_z * rho) / (4.0 * pi);
            dcomplex shell = 0.0;
            for (std::size_t k = 0; k < sphere.size(); ++k) {
                const double r = (x + rho * sphere.nodes[k] - centre).norm();
                if (r >= opt.cutoff_outer) continue;
                shell += sphere.weights[k] * bump_source(opt, r);
            }
            total += radial * shell;
        }
    }
    return std::abs(total - bump(opt, (x - centre).norm()));
}

void write_kernel_slice_csv(const ResolventKernel& k, const Vec3& source, const Vec3& x0,
                            const Vec3& dir, const std::vector<double>& ts, std::ostream& os) {
    const Vec3 d = dir.normalized();
    os << "t,x,y,z,re_k,im_k\n" << std::setprecision(17);
    for (double t : ts) {
        const Vec3 x = x0 + t * d;
        const dcomplex v = k.value(x, source);
        os << t << ',' << x.x() << ',' << x.y() << ',' << x.z() << ',' << v.real() << ','
           << v.imag() << '\n';
    }
}

}  // namespace zrs
