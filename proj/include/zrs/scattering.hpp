#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "zrs/common.hpp"
#include "zrs/scatterers.hpp"
#include "zrs/spherical.hpp"

namespace zrs {

/// S(lambda) = I - V T V^H, where V c = sum_m c_m u_m and
/// u_m(n) = e^{-i sqrt(lambda) x_m . n} / sqrt|w_m|. The delta part is implicit.
///
/// coeff T = i a Gamma(lambda + i0), a = sqrt(lambda)/(8 pi^2); overlap is the
/// exact Gram matrix B = V^H V = (16 pi^2/sqrt(lambda)) D^-1/2 G_N D^-1/2.
struct SMatrixRep {
    double lambda = 0.0;
    CMatrix gamma;
    CMatrix coeff;
    RMatrix overlap;
    std::shared_ptr<const ScattererSet> scatterers;

    double prefactor() const;
    std::size_t size() const { return static_cast<std::size_t>(coeff.rows()); }
};

SMatrixRep smatrix(double lambda, const ScattererSet& s);

/// Same, with Gamma obtained from the block factorization split after n0 sites.
SMatrixRep smatrix_schur(double lambda, const ScattererSet& s, std::size_t n0, double b);

/// Replaces the coefficient matrix; used for sensitivity checks.
SMatrixRep with_coeff(const SMatrixRep& rep, CMatrix coeff);

struct SphereFunction {
    std::shared_ptr<const SphereGrid> grid;
    CVector values;

    double norm() const;
};

SphereFunction make_function(std::shared_ptr<const SphereGrid> grid, CVector values);

/// Regular part of the kernel, -sum T_mm' u_m(n) conj(u_m'(n')).
dcomplex smatrix_kernel(const SMatrixRep& rep, const Vec3& n, const Vec3& nprime);

/// (S f)(n) = f(n) - sum T_mm' u_m(n) <u_m', f>, inner products by quadrature.
/// GridMismatch when f has the wrong number of values or the grid is below
/// the band limit of the plane-wave factors.
SphereFunction apply_smatrix(const SMatrixRep& rep, const SphereFunction& f);

/// Adjoint with respect to the quadrature inner product.
SphereFunction apply_smatrix_adjoint(const SMatrixRep& rep, const SphereFunction& f);

/// ||T^H B T - T - T^H||_2: S^H S - I = V (T^H B T - T - T^H) V^H.
double unitarity_defect_reduced(const SMatrixRep& rep);
double unitarity_defect_reduced(double lambda, const ScattererSet& s);

/// ||S^H S - I|| on L2(S2): ||B^1/2 (T^H B T - T - T^H) B^1/2||_2.
double unitarity_defect_operator(const SMatrixRep& rep);

/// ||S - I|| on L2(S2): ||B^1/2 T B^1/2||_2.
double smatrix_deviation(const SMatrixRep& rep);

/// max over `trials` random f of ||S^H S f - f|| / ||f||, all on the grid.
double unitarity_defect_quadrature(const SMatrixRep& rep, std::shared_ptr<const SphereGrid> grid,
                                   std::size_t trials = 8, std::uint64_t seed = 0);

/// Upper bound for unitarity_defect_quadrature from the reduced defect and the
/// measured overlap error of the grid:
/// ||Bq|| (||M|| + ||T||^2 ||Bq - B||) with Bq the quadrature overlap, plus the
/// a-priori rounding bound 2 gamma_n (1 + ||Bq|| ||T||)^2, n = K + N, for the
/// two operator applications.
double quadrature_defect_bound(const SMatrixRep& rep, const SphereGrid& grid);

/// Omega = I - 2i (Lambda + i Upsilon)^-1 Upsilon; Omega^H Upsilon Omega = Upsilon.
CMatrix omega_unitary(const CMatrix& upsilon, const CMatrix& lambda_matrix);

/// n -> |sum T_mm' u_m(n) conj(u_m'(incident))|^2 on the grid.
SphereFunction cross_section(const SMatrixRep& rep, const Vec3& incident,
                             std::shared_ptr<const SphereGrid> grid);

struct ContinuityScan {
    std::vector<double> lambdas;
    std::vector<double> increments;  // ||Gamma(l_{k+1}) - Gamma(l_k)||_2
    std::vector<std::size_t> jumps;  // k with increment / spacing > threshold
    double max_increment = 0.0;
};

/// Gamma along `intervals` equal steps of [a, b].
ContinuityScan gamma_continuity_scan(const ScattererSet& s, double a, double b,
                                     std::size_t intervals, double jump_threshold = 1e6);

/// CSV writers.
void write_kernel_csv(const SMatrixRep& rep, const SphereGrid& grid, std::size_t stride,
                      std::ostream& os);
void write_function_csv(const SphereFunction& f, std::ostream& os);

}  // namespace zrs
