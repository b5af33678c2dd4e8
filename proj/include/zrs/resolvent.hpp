#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "zrs/common.hpp"
#include "zrs/krein.hpp"
#include "zrs/scatterers.hpp"

namespace zrs {

/// K(z; x, x') = G0(z; x - x') - sum_mn C_mn g_m(z; x) g_n(z; x'),
/// g_m(z; x) = G0(z; x - x_m), C = [Q(z) + 4 pi L]^-1.
struct ResolventKernel {
    ComplexEnergy energy;
    CMatrix C;
    std::shared_ptr<const ScattererSet> scatterers;

    CVector g(const Vec3& x) const;
    dcomplex free(const Vec3& x, const Vec3& xprime) const;
    dcomplex value(const Vec3& x, const Vec3& xprime) const;
};

/// BadParams unless Im z != 0; SingularMatrix if Q + 4 pi L is singular.
ResolventKernel resolvent_kernel(dcomplex z, const ScattererSet& s);

/// ||C(z1) - C(z2) + (z1 - z2) C(z1) Phi C(z2)||_2 with Phi = (Q(z1) - Q(z2))/(z1 - z2).
double hilbert_identity_residual(dcomplex z1, dcomplex z2, const ScattererSet& s);
double hilbert_identity_residual(dcomplex z1, dcomplex z2, const CMatrix& c1, const CMatrix& c2,
                                 const CMatrix& q1, const CMatrix& q2);

/// ||C(z)^H - C(conj z)||_2.
double symmetry_residual(dcomplex z, const ScattererSet& s);

// Least-squares fit f(rho) ~ a/(4 pi rho) + b + c rho along a ray leaving x_m.
struct BoundaryFit {
    dcomplex a;
    dcomplex b;
    dcomplex c;
    double condition = 0.0;
    double residual = 0.0;  // |b + 4 pi w_m a| / (|a| + |b|)
};

/// 6 log-spaced radii from 1e-3 eta to 1e-5 eta.
std::vector<double> default_boundary_radii(double eta);

/// Fit of K(z; ., source) near every x_m. The incident part G0(z; . - source)
/// is regular at x_m; it is subtracted before the fit and its value at x_m
/// added back to b, so only the scattered part is fitted. `radii` are relative to the local
/// separation of x_m (distance to the nearest other site or the source); an
/// empty list selects the default. FitUnstable when the scaled design matrix
/// has condition number above 1e8.
std::vector<BoundaryFit> boundary_fits(dcomplex z, const ScattererSet& s, const Vec3& source,
                                       const std::vector<double>& radii = {});

std::vector<double> boundary_condition_residual(dcomplex z, const ScattererSet& s,
                                                const Vec3& source,
                                                const std::vector<double>& radii = {});

struct ReproductionOptions {
    double sigma = 0.5;        // Gaussian width
    double cutoff_inner = 2.5; // cutoff equals one inside this radius
    double cutoff_outer = 3.5; // and vanishes outside this one
    dcomplex z{-1.0, 0.0};
    std::size_t radial_panels = 12;
    std::size_t radial_nodes = 12;
    std::size_t angular_order = 24;
};

/// phi(r) = exp(-r^2 / (2 sigma^2)) chi(r) with a C-infinity cutoff chi,
/// r = |x - centre|.
double bump(const ReproductionOptions& opt, double r);

/// |integral G0(z; x - y) (-Laplace - z) phi(y) dy - phi(x)|, integrated in
/// spherical coordinates around x.
double reproduction_error(const Vec3& x, const Vec3& centre, const ReproductionOptions& opt = {});

/// CSV "t,x,y,z,re_k,im_k" of K(z; x0 + t dir, source) for t in `ts`.
void write_kernel_slice_csv(const ResolventKernel& k, const Vec3& source, const Vec3& x0,
                            const Vec3& dir, const std::vector<double>& ts, std::ostream& os);

}  // namespace zrs
