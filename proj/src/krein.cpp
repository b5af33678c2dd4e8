#include "zrs/krein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace zrs {

ComplexEnergy ComplexEnergy::at(dcomplex z) {
    dcomplex s = std::sqrt(z);
    if (s.imag() < 0.0) s = -s;
    return {z, s};
}

ComplexEnergy ComplexEnergy::boundary(double lambda) {
    if (lambda >= 0.0) return {dcomplex(lambda, 0.0), dcomplex(std::sqrt(lambda), 0.0)};
    return {dcomplex(lambda, 0.0), dcomplex(0.0, std::sqrt(-lambda))};
}

dcomplex free_green(const ComplexEnergy& e, double r) {
    if (!(r > 0.0)) throw ZeroDistance("free Green function evaluated at zero distance");
    return std::exp(I * e.sqrt_z * r) / (4.0 * pi * r);
}

dcomplex free_green(const ComplexEnergy& e, const Vec3& x) { return free_green(e, x.norm()); }

CMatrix build_Q(const ComplexEnergy& e, const ScattererSet& s) {
    const auto n = static_cast<Eigen::Index>(s.size());
    CMatrix q(n, n);
    const dcomplex diag = I * e.sqrt_z / (4.0 * pi);
    for (Eigen::Index m = 0; m < n; ++m) {
        q(m, m) = diag;
        for (Eigen::Index k = m + 1; k < n; ++k) {
            const dcomplex g = free_green(e, s.point(m) - s.point(k));
            q(m, k) = g;
            q(k, m) = g;
        }
    }
    return q;
}

WeightedQ build_weighted(const ScattererSet& s, const CMatrix& q) {
    const auto n = static_cast<Eigen::Index>(s.size());
    RVector inv_sqrt(n);
    WeightedQ out;
    out.signs.resize(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        const double w = s.weight(m);
        inv_sqrt(m) = 1.0 / std::sqrt(std::abs(w));
        out.signs(m) = w > 0.0 ? 1.0 : -1.0;
    }
    out.qtilde = inv_sqrt.asDiagonal() * q * inv_sqrt.asDiagonal();
    return out;
}

CMatrix gamma_direct(const CMatrix& qtilde, const RVector& signs) {
    CMatrix m = qtilde;
    m.diagonal() += signs.cast<dcomplex>();
    return checked_inverse(m, 1e-14, "J + Qtilde");
}

CMatrix gamma_at(const ScattererSet& s, double lambda) {
    const auto e = ComplexEnergy::boundary(lambda);
    const auto wq = build_weighted(s, build_Q(e, s));
    try {
        return gamma_direct(wq.qtilde, wq.signs);
    } catch (const SingularMatrix& err) {
        std::ostringstream os;
        os << err.what() << " at lambda = " << lambda;
        throw SingularMatrix(os.str(), err.rcond(), lambda);
    }
}

CMatrix krein_C(const ComplexEnergy& e, const ScattererSet& s) {
    CMatrix m = build_Q(e, s);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        m(i, i) += 4.0 * pi * s.weight(k);
    }
    return checked_inverse(m, 1e-14, "Q + 4 pi L");
}

KreinMatrices build_krein(const ComplexEnergy& e, const ScattererSet& s) {
    KreinMatrices k;
    k.energy = e;
    k.Q = build_Q(e, s);
    auto wq = build_weighted(s, k.Q);
    k.Qtilde = std::move(wq.qtilde);
    k.J = std::move(wq.signs);
    k.Gamma = gamma_direct(k.Qtilde, k.J);
    k.C = krein_C(e, s);
    return k;
}

SchurResult gamma_schur(const CMatrix& qtilde, const RVector& signs, std::size_t split,
                        double tail_bound) {
    const auto n = qtilde.rows();
    SchurResult out;
    auto& f = out.factors;
    CMatrix full = qtilde;
    full.diagonal() += signs.cast<dcomplex>();

    if (static_cast<Eigen::Index>(split) >= n) {
        f.split = static_cast<std::size_t>(n);
        f.W = full;
        f.W_ring = full;
        f.R.resize(0, 0);
        f.P.resize(0, n);
        out.gamma = gamma_direct(qtilde, signs);
        return out;
    }
    if (!(tail_bound < 1.0)) {
        std::ostringstream os;
        os << "tail bound " << tail_bound << " >= 1 for split " << split;
        throw TailNotContractive(os.str());
    }

    const auto n0 = static_cast<Eigen::Index>(split);
    const auto nt = n - n0;
    f.split = split;
    f.W = full.topLeftCorner(n0, n0);
    f.R = full.bottomRightCorner(nt, nt);
    f.P = full.bottomLeftCorner(nt, n0);

    const CMatrix r_inv = checked_inverse(f.R, 1e-14, "tail block R");
    const CMatrix r_inv_p = r_inv * f.P;                    // R^-1 P
    const CMatrix pt_r_inv = f.P.transpose() * r_inv;       // P^T R^-1
    f.W_ring = f.W - f.P.transpose() * r_inv_p;

    CMatrix w_ring_inv;
    if (n0 > 0) {
        Eigen::PartialPivLU<CMatrix> lu(f.W_ring);
        double rc = lu.rcond();
        if (std::isnan(rc)) rc = 0.0;
        if (!(rc >= 1e-14)) {
            std::ostringstream os;
            os << "Schur complement is numerically singular (rcond estimate " << rc << ")";
            throw SingularSchurComplement(os.str(), rc);
        }
        w_ring_inv = lu.inverse();
    } else {
        w_ring_inv.resize(0, 0);
    }

    out.gamma.resize(n, n);
    out.gamma.topLeftCorner(n0, n0) = w_ring_inv;
    out.gamma.topRightCorner(n0, nt) = -w_ring_inv * pt_r_inv;
    out.gamma.bottomLeftCorner(nt, n0) = -r_inv_p * w_ring_inv;
    out.gamma.bottomRightCorner(nt, nt) = r_inv + r_inv_p * w_ring_inv * pt_r_inv;
    return out;
}

SchurResult gamma_schur(const ScattererSet& s, double lambda, std::size_t split, double b) {
    const auto e = ComplexEnergy::boundary(lambda);
    const auto wq = build_weighted(s, build_Q(e, s));
    const double bound = tail_norm_bound(s, split, std::sqrt(std::max(b, lambda)));
    try {
        return gamma_schur(wq.qtilde, wq.signs, split, bound);
    } catch (const TailNotContractive& err) {
        std::ostringstream os;
        os << err.what() << " at lambda = " << lambda;
        throw TailNotContractive(os.str());
    } catch (const SingularSchurComplement& err) {
        std::ostringstream os;
        os << err.what() << " at lambda = " << lambda;
        throw SingularSchurComplement(os.str(), err.rcond(), lambda);
    } catch (const SingularMatrix& err) {
        std::ostringstream os;
        os << err.what() << " at lambda = " << lambda;
        throw SingularMatrix(os.str(), err.rcond(), lambda);
    }
}

CMatrix reassemble(const SchurFactors& f) {
    const auto n0 = f.W.rows();
    const auto nt = f.R.rows();
    const auto n = n0 + nt;
    if (nt == 0) return f.W;
    const CMatrix r_inv = f.R.inverse();
    CMatrix upper = CMatrix::Identity(n, n);
    upper.topRightCorner(n0, nt) = f.P.transpose() * r_inv;
    CMatrix middle = CMatrix::Zero(n, n);
    middle.topLeftCorner(n0, n0) = f.W_ring;
    middle.bottomRightCorner(nt, nt) = f.R;
    CMatrix lower = CMatrix::Identity(n, n);
    lower.bottomLeftCorner(nt, n0) = r_inv * f.P;
    return upper * middle * lower;
}

SchurPositivity schur_positivity(const SchurFactors& f, const ScattererSet& s, double lambda,
                                 double eps) {
    SchurPositivity out;
    const auto n0 = f.W_ring.rows();
    if (n0 == 0) return out;
    const auto head = s.prefix(static_cast<std::size_t>(n0));
    const GramData g = gram_matrix(lambda, head);
    RVector inv_sqrt(n0);
    for (Eigen::Index m = 0; m < n0; ++m) inv_sqrt(m) = 1.0 / std::sqrt(std::abs(head.weight(m)));
    const RMatrix weighted = inv_sqrt.asDiagonal() * g.G * inv_sqrt.asDiagonal();
    out.mu_weighted = Eigen::SelfAdjointEigenSolver<RMatrix>(weighted).eigenvalues()(0);
    out.min_imag_eig =
        Eigen::SelfAdjointEigenSolver<CMatrix>(imag_part(f.W_ring)).eigenvalues()(0);
    out.threshold = (1.0 - eps) * out.mu_weighted;
    out.holds = out.min_imag_eig >= out.threshold;
    return out;
}

double q_norm_bound(const ScattererSet& s, const ComplexEnergy& e) {
    const double n = static_cast<double>(s.size());
    const double eps = std::numeric_limits<double>::epsilon();
    return tail_norm_bound(s, 0, std::abs(e.sqrt_z)) * (1.0 + 4.0 * (n + 1.0) * eps);
}

double q_norm_estimate(const ScattererSet& s, const ComplexEnergy& e) {
    return tail_norm_estimate(s, 0, std::abs(e.sqrt_z));
}

RMatrix gram_entries(double lambda, const ScattererSet& s) {
    if (!(lambda > 0.0)) throw BadParams("gram_matrix requires lambda > 0");
    const auto n = static_cast<Eigen::Index>(s.size());
    const double k = std::sqrt(lambda);
    RMatrix g(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        g(m, m) = k / (4.0 * pi);
        for (Eigen::Index j = m + 1; j < n; ++j) {
            const double r = (s.point(m) - s.point(j)).norm();
            const double v = std::sin(k * r) / (4.0 * pi * r);
            g(m, j) = v;
            g(j, m) = v;
        }
    }
    return g;
}

GramData gram_matrix(double lambda, const ScattererSet& s) {
    GramData out;
    out.lambda = lambda;
    out.G = gram_entries(lambda, s);
    out.mu = Eigen::SelfAdjointEigenSolver<RMatrix>(out.G, Eigen::EigenvaluesOnly)
                 .eigenvalues()(0);
    if (!(out.mu > 0.0)) {
        std::ostringstream os;
        os << "Gram matrix not positive definite at lambda = " << lambda
           << " (least eigenvalue " << out.mu << ")";
        throw NonPositiveGram(os.str());
    }
    return out;
}

std::vector<double> log_grid(double a, double b, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {a};
    std::vector<double> g(count);
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t k = 0; k < count; ++k) {
        g[k] = std::exp(la + (lb - la) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
    g.front() = a;
    g.back() = b;
    return g;
}

double m_sampled(const ScattererSet& s, std::size_t n, double a, double b, std::size_t grid) {
    if (!(a > 0.0 && b > a)) throw BadParams("m_sampled requires 0 < a < b");
    if (grid == 0) throw BadParams("m_sampled requires a nonempty grid");
    const auto head = s.prefix(n);
    double best = 0.0;
    for (double lambda : log_grid(a, b, grid)) {
        best = std::max(best, 1.0 / gram_matrix(lambda, head).mu);
    }
    return best;
}

void attach_tail_decay(AdmissibilityReport& report, const ScattererSet& s, double a, double b,
                       std::size_t grid) {
    report.tail_decay.clear();
    std::vector<std::size_t> sizes;
    for (std::size_t div : {8u, 4u, 2u}) {
        const std::size_t n = s.size() / div;
        if (n >= 1 && (sizes.empty() || sizes.back() != n)) sizes.push_back(n);
    }
    for (std::size_t n : sizes) {
        TailDecaySample t;
        t.n = n;
        t.m_sampled = m_sampled(s, n, a, b, grid);
        t.tau = report.tail.at(n - 1);
        t.product = t.m_sampled * t.tau;
        report.tail_decay.push_back(t);
    }
    auto& v = report.verdict;
    if (report.tail_decay.size() < 2) {
        v.tail_decay.reset();
        v.borderline = true;
    } else {
        bool decreasing = true;
        for (std::size_t k = 1; k < report.tail_decay.size(); ++k) {
            decreasing = decreasing &&
                         report.tail_decay[k].product < report.tail_decay[k - 1].product;
        }
        v.tail_decay = decreasing;
        // halving rate or worse on the last doubling is reported as borderline
        const auto& last = report.tail_decay.back();
        const auto& prev = report.tail_decay[report.tail_decay.size() - 2];
        v.borderline = !decreasing || last.product > 0.5 * prev.product;
    }
    v.pass = v.k0_finite && v.k1_finite && v.tail_decay.value_or(true);
}

double hilbert_schmidt_sq(const ScattererSet& s, const ComplexEnergy& e) {
    if (e.z.imag() == 0.0) throw BadParams("hilbert_schmidt_sq requires Im z != 0");
    const CMatrix q1 = build_Q(e, s);
    const CMatrix q2 = build_Q(e.conj(), s);
    const dcomplex dz = e.z - std::conj(e.z);
    double total = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        total += ((q1(i, i) - q2(i, i)) / dz).real() / std::abs(s.weight(n));
    }
    return total;
}

}  // namespace zrs
