#include "zrs/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <ostream>
#include <random>

#include "zrs/krein.hpp"

namespace zrs {

namespace {

SMatrixRep assemble(double lambda, const ScattererSet& s, CMatrix gamma) {
    SMatrixRep rep;
    rep.lambda = lambda;
    rep.scatterers = std::make_shared<const ScattererSet>(s);
    rep.coeff = (I * rep.prefactor()) * gamma;
    rep.gamma = std::move(gamma);
    rep.overlap = plane_wave_overlap(lambda, s);
    return rep;
}

CMatrix sqrt_psd(const RMatrix& b) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(b);
    const RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return (es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose()).cast<dcomplex>();
}

CMatrix reduced_defect_matrix(const CMatrix& t, const CMatrix& b) {
    return t.adjoint() * b * t - t - t.adjoint();
}

// Columns u_m sampled on the grid (K x N).
CMatrix grid_columns(const SMatrixRep& rep, const SphereGrid& grid) {
    return plane_wave_block(rep.lambda, *rep.scatterers, grid).U.transpose();
}

void check_function(const SMatrixRep& rep, const SphereFunction& f) {
    if (!f.grid) throw GridMismatch("function has no grid");
    if (static_cast<std::size_t>(f.values.size()) != f.grid->size())
        throw GridMismatch("function values do not match the grid size");
    const int degree = f.grid->exact_degree();
    if (degree >= 0) {
        const ScattererSet& s = *rep.scatterers;
        const double extent = std::max(s.diameter(), s.max_radius());
        const double band = std::ceil(std::sqrt(rep.lambda) * extent);
        if (static_cast<double>(degree) < band)
            throw GridMismatch("grid degree " + std::to_string(degree) +
                               " below plane-wave band limit " + std::to_string(band));
    }
}

Eigen::Map<const RVector> weights_of(const SphereGrid& g) {
    return {g.weights.data(), static_cast<Eigen::Index>(g.weights.size())};
}

SphereFunction apply_impl(const SMatrixRep& rep, const SphereFunction& f, const CMatrix& t) {
    check_function(rep, f);
    const CMatrix u = grid_columns(rep, *f.grid);
    const CVector proj = u.adjoint() * (weights_of(*f.grid).cast<dcomplex>().asDiagonal() * f.values);
    return {f.grid, f.values - u * (t * proj)};
}

}  // namespace

double SMatrixRep::prefactor() const { return std::sqrt(lambda) / (8.0 * pi * pi); }

SMatrixRep smatrix(double lambda, const ScattererSet& s) {
    if (!(lambda > 0.0)) throw BadParams("smatrix requires lambda > 0");
    return assemble(lambda, s, gamma_at(s, lambda));
}

SMatrixRep smatrix_schur(double lambda, const ScattererSet& s, std::size_t n0, double b) {
    if (!(lambda > 0.0)) throw BadParams("smatrix requires lambda > 0");
    return assemble(lambda, s, gamma_schur(s, lambda, n0, b).gamma);
}

SMatrixRep with_coeff(const SMatrixRep& rep, CMatrix coeff) {
    SMatrixRep out = rep;
    out.coeff = std::move(coeff);
    return out;
}

double SphereFunction::norm() const {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < values.size(); ++k) acc += grid->weights[k] * std::norm(values(k));
    return std::sqrt(acc);
}

SphereFunction make_function(std::shared_ptr<const SphereGrid> grid, CVector values) {
    if (!grid || static_cast<std::size_t>(values.size()) != grid->size())
        throw GridMismatch("function values do not match the grid size");
    return {std::move(grid), std::move(values)};
}

dcomplex smatrix_kernel(const SMatrixRep& rep, const Vec3& n, const Vec3& nprime) {
    const ScattererSet& s = *rep.scatterers;
    const double k = std::sqrt(rep.lambda);
    const auto N = static_cast<Eigen::Index>(s.size());
    CVector un(N), up(N);
    for (Eigen::Index m = 0; m < N; ++m) {
        const double scale = 1.0 / std::sqrt(std::abs(s.weight(m)));
        un(m) = scale * std::exp(-I * (k * s.point(m).dot(n)));
        up(m) = scale * std::exp(-I * (k * s.point(m).dot(nprime)));
    }
    return -(un.transpose() * rep.coeff * up.conjugate())(0, 0);
}

SphereFunction apply_smatrix(const SMatrixRep& rep, const SphereFunction& f) {
    return apply_impl(rep, f, rep.coeff);
}

SphereFunction apply_smatrix_adjoint(const SMatrixRep& rep, const SphereFunction& f) {
    return apply_impl(rep, f, rep.coeff.adjoint());
}

double unitarity_defect_reduced(const SMatrixRep& rep) {
    return spectral_norm(reduced_defect_matrix(rep.coeff, rep.overlap.cast<dcomplex>()));
}

double unitarity_defect_reduced(double lambda, const ScattererSet& s) {
    return unitarity_defect_reduced(smatrix(lambda, s));
}

double unitarity_defect_operator(const SMatrixRep& rep) {
    const CMatrix h = sqrt_psd(rep.overlap);
    return spectral_norm(CMatrix(h * reduced_defect_matrix(rep.coeff, rep.overlap.cast<dcomplex>()) * h));
}

double smatrix_deviation(const SMatrixRep& rep) {
    const CMatrix h = sqrt_psd(rep.overlap);
    return spectral_norm(CMatrix(h * rep.coeff * h));
}

double unitarity_defect_quadrature(const SMatrixRep& rep, std::shared_ptr<const SphereGrid> grid,
                                   std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const auto K = static_cast<Eigen::Index>(grid->size());
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        CVector v(K);
        for (Eigen::Index k = 0; k < K; ++k) v(k) = dcomplex(normal(rng), normal(rng));
        SphereFunction f{grid, v};
        const double nf = f.norm();
        f.values /= nf;
        const SphereFunction sf = apply_smatrix(rep, f);
        const SphereFunction ssf = apply_smatrix_adjoint(rep, sf);
        const SphereFunction diff{grid, ssf.values - f.values};
        worst = std::max(worst, diff.norm());
    }
    return worst;
}

double quadrature_defect_bound(const SMatrixRep& rep, const SphereGrid& grid) {
    const PlaneWaveBlock block = plane_wave_block(rep.lambda, *rep.scatterers, grid);
    const CMatrix bq = quadrature_overlap(block, grid);
    const CMatrix b = rep.overlap.cast<dcomplex>();
    const double t = spectral_norm(rep.coeff);
    const double m = spectral_norm(reduced_defect_matrix(rep.coeff, b));
    const double nbq = spectral_norm(bq);
    const double n = static_cast<double>(grid.size() + rep.size());
    const double eps = std::numeric_limits<double>::epsilon();
    const double s = 1.0 + nbq * t;
    const double rounding = 2.0 * n * eps / (1.0 - n * eps) * s * s;
    return nbq * (m + t * t * spectral_norm(CMatrix(bq - b))) + rounding;
}

CMatrix omega_unitary(const CMatrix& upsilon, const CMatrix& lambda_matrix) {
    if (upsilon.rows() != upsilon.cols() || lambda_matrix.rows() != upsilon.rows() ||
        lambda_matrix.cols() != upsilon.cols())
        throw BadParams("omega_unitary: shape mismatch");
    const auto n = upsilon.rows();
    const CMatrix a = lambda_matrix + I * upsilon;
    const CMatrix ainv = checked_inverse(a, 1e-14, "Lambda + i Upsilon");
    return CMatrix::Identity(n, n) - 2.0 * I * ainv * upsilon;
}

SphereFunction cross_section(const SMatrixRep& rep, const Vec3& incident,
                             std::shared_ptr<const SphereGrid> grid) {
    const Vec3 dir = incident.normalized();
    CVector v(static_cast<Eigen::Index>(grid->size()));
    for (std::size_t k = 0; k < grid->size(); ++k)
        v(static_cast<Eigen::Index>(k)) = std::norm(smatrix_kernel(rep, grid->nodes[k], dir));
    return {std::move(grid), std::move(v)};
}

ContinuityScan gamma_continuity_scan(const ScattererSet& s, double a, double b,
                                     std::size_t intervals, double jump_threshold) {
    if (!(a > 0.0) || !(b > a) || intervals < 1)
        throw BadParams("continuity scan needs 0 < a < b and at least one interval");
    ContinuityScan scan;
    const double h = (b - a) / static_cast<double>(intervals);
    CMatrix prev;
    for (std::size_t k = 0; k <= intervals; ++k) {
        const double lambda = k == intervals ? b : a + h * static_cast<double>(k);
        scan.lambdas.push_back(lambda);
        CMatrix g = gamma_at(s, lambda);
        if (k > 0) {
            const double inc = spectral_norm(CMatrix(g - prev));
            scan.increments.push_back(inc);
            scan.max_increment = std::max(scan.max_increment, inc);
            if (inc / h > jump_threshold) scan.jumps.push_back(k - 1);
        }
        prev = std::move(g);
    }
    return scan;
}

void write_kernel_csv(const SMatrixRep& rep, const SphereGrid& grid, std::size_t stride,
                      std::ostream& os) {
    stride = std::max<std::size_t>(stride, 1);
    os << "theta,phi,theta_prime,phi_prime,re_s,im_s\n" << std::setprecision(17);
    for (std::size_t i = 0; i < grid.size(); i += stride) {
        for (std::size_t j = 0; j < grid.size(); j += stride) {
            const dcomplex v = smatrix_kernel(rep, grid.nodes[i], grid.nodes[j]);
            os << grid.theta[i] << ',' << grid.phi[i] << ',' << grid.theta[j] << ','
               << grid.phi[j] << ',' << v.real() << ',' << v.imag() << '\n';
        }
    }
}

void write_function_csv(const SphereFunction& f, std::ostream& os) {
    os << "theta,phi,re,im\n" << std::setprecision(17);
    for (std::size_t k = 0; k < f.grid->size(); ++k) {
        const dcomplex v = f.values(static_cast<Eigen::Index>(k));
        os << f.grid->theta[k] << ',' << f.grid->phi[k] << ',' << v.real() << ',' << v.imag()
           << '\n';
    }
}

}  // namespace zrs
