#pragma once

#include <cstddef>
#include <vector>

#include "zrs/common.hpp"
#include "zrs/scatterers.hpp"

namespace zrs {

/// Spectral parameter z together with the branch of sqrt(z) used throughout:
/// principal value with Im sqrt(z) >= 0. A real positive z is read as the
/// boundary value lambda + i0, whose root is +sqrt(lambda).
struct ComplexEnergy {
    dcomplex z;
    dcomplex sqrt_z;

    static ComplexEnergy at(dcomplex z);
    static ComplexEnergy boundary(double lambda);
    ComplexEnergy conj() const { return at(std::conj(z)); }
};

/// e^{i sqrt(z) r} / (4 pi r). Throws ZeroDistance for r == 0.
dcomplex free_green(const ComplexEnergy& e, double r);
dcomplex free_green(const ComplexEnergy& e, const Vec3& x);

/// Site coupling matrix: q_mm = i sqrt(z)/(4 pi), q_mn = free_green(z, x_m - x_n).
CMatrix build_Q(const ComplexEnergy& e, const ScattererSet& s);

struct WeightedQ {
    CMatrix qtilde;  // |L|^-1/2 Q |L|^-1/2
    RVector signs;   // diagonal of J = sign(w_m)
};

WeightedQ build_weighted(const ScattererSet& s, const CMatrix& q);

/// [J + Qtilde]^-1 by LU. SingularMatrix when rcond < 1e-14.
CMatrix gamma_direct(const CMatrix& qtilde, const RVector& signs);

/// Gamma(lambda + i0) for the set.
CMatrix gamma_at(const ScattererSet& s, double lambda);

/// [Q(z) + 4 pi L]^-1, the coefficient matrix of the resolvent kernel.
CMatrix krein_C(const ComplexEnergy& e, const ScattererSet& s);

struct KreinMatrices {
    ComplexEnergy energy;
    CMatrix Q;
    CMatrix Qtilde;
    RVector J;
    CMatrix Gamma;
    CMatrix C;
};

KreinMatrices build_krein(const ComplexEnergy& e, const ScattererSet& s);

// Blocks of J + Qtilde split after the first `split` sites:
//   [ W  P^T ]
//   [ P  R   ]
// and the Schur complement W_ring = W - P^T R^-1 P.
struct SchurFactors {
    std::size_t split = 0;
    CMatrix W;
    CMatrix R;
    CMatrix P;
    CMatrix W_ring;
};

struct SchurResult {
    CMatrix gamma;
    SchurFactors factors;
};

/// Inverse of J + Qtilde assembled from the block LDU factorization.
///
/// `tail_bound` is a caller-computed bound on the norm of the tail part of
/// Qtilde; a value >= 1 means R cannot be certified invertible by a Neumann
/// argument and TailNotContractive is raised. A split >= N reduces to
/// gamma_direct. SingularSchurComplement is raised if W_ring is singular.
SchurResult gamma_schur(const CMatrix& qtilde, const RVector& signs, std::size_t split,
                        double tail_bound);

/// Same, at lambda + i0, with the tail bound evaluated for the window (0, max(b, lambda)].
SchurResult gamma_schur(const ScattererSet& s, double lambda, std::size_t split, double b);

/// Product of the three block factors; reproduces J + Qtilde.
CMatrix reassemble(const SchurFactors& f);

struct SchurPositivity {
    double min_imag_eig = 0.0;   // least eigenvalue of Im W_ring
    double mu_weighted = 0.0;    // least eigenvalue of Im W = D^-1/2 G_N D^-1/2
    double threshold = 0.0;      // (1 - eps) * mu_weighted
    bool holds = false;
};

SchurPositivity schur_positivity(const SchurFactors& f, const ScattererSet& s, double lambda,
                                 double eps = 0.5);

/// Guaranteed bound on ||Qtilde(z)||_2:
/// |sqrt z| / (4 pi min|w|) + sqrt(2 K0 K1) / (4 pi), rounded up by
/// 4 (N + 1) eps relative so it also covers a floating-point ||Qtilde||.
double q_norm_bound(const ScattererSet& s, const ComplexEnergy& e);

/// Closed-form estimate max_m (|sqrt z| + K0/eta_m^2 + K1)/(4 pi |w_m|). Tracks
/// the bound for small |w| eta but undershoots ||Qtilde|| once |w| eta is large.
double q_norm_estimate(const ScattererSet& s, const ComplexEnergy& e);

struct GramData {
    double lambda = 0.0;
    RMatrix G;       // overlaps of the plane-wave columns on the sphere
    double mu = 0.0; // least eigenvalue = 1/||G^-1||
};

/// Gram matrix of the functions lambda^{1/4}/(4 pi) e^{-i sqrt(lambda) n.x_m} in
/// L2(S2): G_mm = sqrt(lambda)/(4 pi), G_mn = sin(sqrt(lambda) r)/(4 pi r).
/// Throws NonPositiveGram if the least eigenvalue is not positive.
GramData gram_matrix(double lambda, const ScattererSet& s);

/// The entries of G_N(lambda) without the positivity check.
RMatrix gram_entries(double lambda, const ScattererSet& s);

/// `count` logarithmically spaced points in [a, b]; count == 1 gives {a}.
std::vector<double> log_grid(double a, double b, std::size_t count);

/// Sampled lower estimate of M_N([a,b]) = sup ||G_N(lambda)^-1|| for the first n
/// sites, taken over a log-spaced grid of `grid` points.
double m_sampled(const ScattererSet& s, std::size_t n, double a, double b,
                 std::size_t grid = 64);

/// Fills report.tail_decay with M_N * tau_N at prefix sizes n/8, n/4, n/2 and
/// sets the tail-decay verdict (decreasing products) and the borderline flag.
void attach_tail_decay(AdmissibilityReport& report, const ScattererSet& s, double a, double b,
                       std::size_t grid = 16);

/// sum_n ||Gtilde(z) e_n||^2 with Gtilde = G |L|^-1/2, computed from the
/// Q-increment identity: (Q(z) - Q(conj z))_nn / (z - conj z) / |w_n|.
double hilbert_schmidt_sq(const ScattererSet& s, const ComplexEnergy& e);

}  // namespace zrs
