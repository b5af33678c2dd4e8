// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "oracles.hpp"
#include "zrs/krein.hpp"
#include "zrs/resolvent.hpp"
#include "zrs/scatterers.hpp"
#include "zrs/scattering.hpp"
#include "zrs/spherical.hpp"

using namespace zrs;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// 25 configurations: five each of N = 1, 2, 3, 5, 10.
std::vector<ScattererSet> test_configs(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ScattererSet> out;
    for (std::size_t n : {1, 2, 3, 5, 10})
        for (int k = 0; k < 5; ++k) out.push_back(oracle::random_config(rng, n));
    return out;
}

const std::vector<ScattererSet>& configs() {
    static const auto c = test_configs(20240601);
    return c;
}

Vec3 outside_source(const ScattererSet& s) { return {s.max_radius() + 1.0, 0.5, 0.25}; }

Outcome unitarity() {
    const auto lambdas = log_grid(0.5, 50.0, 8);
    double worst_ratio = 0.0, worst_q = 0.0;
    Outcome o;
    for (const auto& s : configs()) {
        for (double l : lambdas) {
            const SMatrixRep rep = smatrix(l, s);
            const double cond = condition_number(rep.gamma);
            const double red = unitarity_defect_reduced(rep);
            worst_ratio = std::max(worst_ratio, red / (1e-9 * cond));
            const std::size_t order = std::min<std::size_t>(default_grid_order(l, s), 64);
            auto grid = std::make_shared<const SphereGrid>(
                make_grid(GridKind::GaussLegendreProduct, order));
            const double q = unitarity_defect_quadrature(rep, grid, 4, 7);
            const double bound = quadrature_defect_bound(rep, *grid);
            worst_q = std::max(worst_q, q / bound);
            if (!(red < 1e-9 * cond) || !(q <= bound)) o.pass = false;
        }
    }
    o.detail = fmt("max reduced/(1e-9 cond) = %.2e, max quadrature/bound = %.2e", worst_ratio,
                   worst_q);
    return o;
}

Outcome schur_consistency() {
    Outcome o;
    double worst = 0.0;
    int contractive = 0, raised = 0;
    const double b = 50.0;
    for (const auto& base : configs()) {
        for (double scale : {1.0, 30.0, 1000.0}) {
            std::vector<double> w = base.weights();
            for (auto& x : w) x *= scale;
            const ScattererSet s = base.with_weights(w);
            for (std::size_t split = 0; split < s.size(); ++split) {
                for (double l : {0.7, 6.0, 40.0}) {
                    const double bound = tail_norm_bound(s, split, std::sqrt(std::max(b, l)));
                    bool threw = false;
                    CMatrix g;
                    try {
                        g = gamma_schur(s, l, split, b).gamma;
                    } catch (const TailNotContractive&) {
                        threw = true;
                    }
                    if (bound >= 1.0) {
                        ++raised;
                        if (!threw) o.pass = false;
                        continue;
                    }
                    ++contractive;
                    if (threw) {
                        o.pass = false;
                        continue;
                    }
                    const CMatrix ref = gamma_at(s, l);
                    const double rel = spectral_norm(CMatrix(g - ref)) / spectral_norm(ref);
                    worst = std::max(worst, rel);
                    if (!(rel < 1e-9)) o.pass = false;
                }
            }
        }
    }
    if (contractive == 0 || raised == 0) o.pass = false;
    o.detail = fmt("%.0f contractive cases (max rel diff %.2e), %.0f raising cases", contractive,
                   worst, raised);
    return o;
}

Outcome resolvent_identities() {
    Outcome o;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(-5.0, 20.0), im(0.05, 5.0), sgn(0.0, 1.0);
    double worst_h = 0.0, worst_s = 0.0;
    for (const auto& s : configs()) {
        for (int k = 0; k < 10; ++k) {
            const dcomplex z1(re(rng), sgn(rng) < 0.5 ? im(rng) : -im(rng));
            const dcomplex z2(re(rng), sgn(rng) < 0.5 ? im(rng) : -im(rng));
            const double h = hilbert_identity_residual(z1, z2, s);
            const double sy = symmetry_residual(z1, s);
            worst_h = std::max(worst_h, h);
            worst_s = std::max(worst_s, sy);
        }
    }
    o.pass = worst_h < 1e-10 && worst_s < 1e-12;
    o.detail = fmt("max hilbert = %.2e, max symmetry = %.2e", worst_h, worst_s);
    return o;
}

Outcome boundary_conditions() {
    Outcome o;
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& s : configs()) {
        for (double r : boundary_condition_residual(I, s, outside_source(s))) {
            worst = std::max(worst, r);
            ++count;
        }
    }
    o.pass = worst < 1e-5;
    o.detail = fmt("%.0f scatterers, max residual = %.2e", static_cast<double>(count), worst);
    return o;
}

Outcome gram_identity() {
    Outcome o;
    double worst = 0.0, min_mu = INFINITY;
    for (const auto& s : configs()) {
        for (double l : log_grid(0.5, 50.0, 8)) {
            const double k = std::sqrt(l);
            const CMatrix imq = imag_part(build_Q(ComplexEnergy::boundary(l), s));
            for (std::size_t m = 0; m < s.size(); ++m) {
                for (std::size_t n = 0; n < s.size(); ++n) {
                    const double r = (s.point(m) - s.point(n)).norm();
                    const double g = k / (4.0 * pi) * boost::math::sph_bessel(0, k * r);
                    const auto i = static_cast<Eigen::Index>(m), j = static_cast<Eigen::Index>(n);
                    worst = std::max(worst, std::abs(imq(i, j) - g));
                }
            }
            try {
                min_mu = std::min(min_mu, gram_matrix(l, s).mu);
            } catch (const NonPositiveGram&) {
                min_mu = 0.0;
            }
        }
    }
    o.pass = worst < 1e-13 && min_mu > 0.0;
    o.detail = fmt("max |Im Q - G| = %.2e, min mu = %.2e", worst, min_mu);
    return o;
}

Outcome norm_bound() {
    Outcome o;
    double worst = 0.0;
    std::vector<ComplexEnergy> energies;
    for (double l : log_grid(0.5, 50.0, 8)) energies.push_back(ComplexEnergy::boundary(l));
    for (dcomplex z : {dcomplex(0, 1), dcomplex(-1, 0.5), dcomplex(10, -3), dcomplex(-4, 0)})
        energies.push_back(ComplexEnergy::at(z));
    auto check = [&](const ScattererSet& s) {
        for (const auto& e : energies) {
            const double q = spectral_norm(build_weighted(s, build_Q(e, s)).qtilde);
            const double p = q_norm_bound(s, e);
            worst = std::max(worst, q / p);
            if (!(q <= p)) o.pass = false;
        }
    };
    for (const auto& s : configs()) {
        check(s);
        std::vector<double> w = s.weights();
        for (auto& x : w) x *= 1e12;
        check(s.with_weights(w));
    }
    o.detail = fmt("max ||Qtilde|| / bound = %.3f", worst);
    return o;
}

Outcome gamma_continuity() {
    Outcome o;
    double lo = INFINITY, hi = 0.0;
    int used = 0;
    for (const auto& s : configs()) {
        const ContinuityScan coarse = gamma_continuity_scan(s, 1.0, 25.0, 64);
        const ContinuityScan fine = gamma_continuity_scan(s, 1.0, 25.0, 128);
        if (!coarse.jumps.empty() || !fine.jumps.empty()) continue;
        ++used;
        const double ratio = fine.max_increment / coarse.max_increment;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        if (!(ratio >= 0.4 && ratio <= 0.6)) o.pass = false;
    }
    if (used == 0) o.pass = false;
    o.detail = fmt("%.0f configs, halving ratio in [%.3f, %.3f]", used, lo, hi);
    return o;
}

Outcome unperturbed_limit() {
    Outcome o;
    std::mt19937_64 rng(5);
    double worst_s = 0.0, worst_k = 0.0;
    for (const auto& base : configs()) {
        std::vector<double> w = base.weights();
        for (auto& x : w) x = std::copysign(1e12, x);
        const ScattererSet s = base.with_weights(w);
        for (double l : {0.5, 5.0, 50.0}) worst_s = std::max(worst_s, smatrix_deviation(smatrix(l, s)));

        const ResolventKernel k = resolvent_kernel(I, s);
        const double side = s.max_radius() + 1.0;
        std::uniform_real_distribution<double> u(-side, side);
        auto sample = [&] {
            for (;;) {
                const Vec3 x(u(rng), u(rng), u(rng));
                bool ok = true;
                for (const auto& p : s.points()) ok = ok && (x - p).norm() >= 0.1;
                if (ok) return x;
            }
        };
        for (int t = 0; t < 4; ++t) {
            const Vec3 x = sample();
            Vec3 y = sample();
            while ((x - y).norm() < 0.1) y = sample();
            const dcomplex free = oracle::green_mp(I, (x - y).norm());
            worst_k = std::max(worst_k, std::abs(k.value(x, y) - free));
        }
    }
    o.pass = worst_s < 1e-9 && worst_k < 1e-9;
    o.detail = fmt("max ||S - I|| = %.2e, max |K - G0| = %.2e (100 pairs)", worst_s, worst_k);
    return o;
}

Outcome omega_preserves_form() {
    Outcome o;
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int n = 1 + t % 8;
        const CMatrix ups = oracle::random_positive(rng, n);
        const CMatrix lam = oracle::random_hermitian(rng, n);
        const CMatrix om = omega_unitary(ups, lam);
        worst = std::max(worst, spectral_norm(CMatrix(om.adjoint() * ups * om - ups)));
    }
    o.pass = worst < 1e-11;
    o.detail = fmt("50 pairs, max ||Omega^H Y Omega - Y|| = %.2e", worst);
    return o;
}

Outcome resolvent_reproduction() {
    Outcome o;
    const Vec3 centre(0.2, -0.1, 0.3);
    const std::vector<Vec3> xs = {centre, {0.5, 0.5, 0.5}, {-1.0, 0.3, 0.8}, {1.5, -1.2, 0.4},
                                  {2.0, 1.0, -1.5}};
    double worst = 0.0;
    for (const auto& x : xs) worst = std::max(worst, reproduction_error(x, centre));
    o.pass = worst < 1e-6;
    o.detail = fmt("5 points, max error = %.2e", worst);
    return o;
}

}  // namespace

int main() {
    struct Item {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Item> items = {
        {1, "unitarity", unitarity},
        {2, "schur-consistency", schur_consistency},
        {3, "resolvent-identities", resolvent_identities},
        {4, "boundary-conditions", boundary_conditions},
        {5, "gram-identity", gram_identity},
        {6, "norm-bound", norm_bound},
        {7, "gamma-continuity", gamma_continuity},
        {8, "unperturbed-limit", unperturbed_limit},
        {9, "omega-form", omega_preserves_form},
        {10, "free-resolvent-reproduction", resolvent_reproduction},
    };
    int failed = 0;
    for (const auto& it : items) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = it.run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!r.pass) ++failed;
        std::printf("%s  %2d %-28s %s  [%.1fs]\n", r.pass ? "PASS" : "FAIL", it.id, it.name,
                    r.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(items.size()) - failed, items.size());
    return failed == 0 ? 0 : 1;
}
