#include "zrs/spherical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include "zrs/krein.hpp"

namespace zrs {

namespace {

constexpr std::size_t max_product_order = 2048;
constexpr std::size_t max_icosphere_order = 8;

void push_node(SphereGrid& g, const Vec3& n, double w) {
    g.nodes.push_back(n);
    g.weights.push_back(w);
    g.theta.push_back(std::acos(std::clamp(n.z(), -1.0, 1.0)));
    double ph = std::atan2(n.y(), n.x());
    if (ph < 0.0) ph += 2.0 * pi;
    g.phi.push_back(ph);
}

// Solid angle of the spherical triangle (a, b, c).
double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double num = std::abs(a.dot(b.cross(c)));
    const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(num, den);
}

SphereGrid icosphere(std::size_t order) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    for (auto& p : v) p.normalize();
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    for (std::size_t level = 1; level < order; ++level) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back((v[a] + v[b]).normalized());
            const int idx = static_cast<int>(v.size()) - 1;
            mid.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = midpoint(f[0], f[1]);
            const int bc = midpoint(f[1], f[2]);
            const int ca = midpoint(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    std::vector<double> w(v.size(), 0.0);
    for (const auto& f : faces) {
        const double area = solid_angle(v[f[0]], v[f[1]], v[f[2]]) / 3.0;
        for (int k : f) w[k] += area;
    }
    SphereGrid g;
    g.kind = GridKind::Icosphere;
    g.order = order;
    for (std::size_t k = 0; k < v.size(); ++k) push_node(g, v[k], w[k]);
    return g;
}

}  // namespace

GridKind parse_grid_kind(std::string_view name) {
    if (name == "gauss-legendre-product") return GridKind::GaussLegendreProduct;
    if (name == "icosphere") return GridKind::Icosphere;
    throw BadOrder("unknown grid kind '" + std::string(name) + "'");
}

std::string_view grid_kind_name(GridKind kind) {
    return kind == GridKind::Icosphere ? "icosphere" : "gauss-legendre-product";
}

int SphereGrid::exact_degree() const {
    return kind == GridKind::GaussLegendreProduct ? static_cast<int>(2 * order) - 1 : -1;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
    std::vector<double> x(n), w(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                const double jd = static_cast<double>(j);
                p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // one more derivative evaluation at the converged root
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            const double jd = static_cast<double>(j);
            p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
        }
        dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

SphereGrid make_grid(GridKind kind, std::size_t order) {
    if (order < 1) throw BadOrder("grid order must be >= 1");
    if (kind == GridKind::Icosphere) {
        if (order > max_icosphere_order) throw BadOrder("icosphere order too large");
        return icosphere(order);
    }
    if (order > max_product_order) throw BadOrder("product grid order too large");
    SphereGrid g;
    g.kind = kind;
    g.order = order;
    const auto [x, w] = gauss_legendre(order);
    const std::size_t nphi = 2 * order;
    const double dphi = 2.0 * pi / static_cast<double>(nphi);
    g.nodes.reserve(order * nphi);
    for (std::size_t i = 0; i < order; ++i) {
        const double ct = x[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (std::size_t j = 0; j < nphi; ++j) {
            const double ph = (static_cast<double>(j) + 0.5) * dphi;
            g.nodes.emplace_back(st * std::cos(ph), st * std::sin(ph), ct);
            g.weights.push_back(w[i] * dphi);
            g.theta.push_back(std::acos(ct));
            g.phi.push_back(ph);
        }
    }
    return g;
}

std::size_t default_grid_order(double lambda, const ScattererSet& s) {
    const double extent = std::max(s.diameter(), s.max_radius());
    const double band = std::ceil(2.0 * std::sqrt(std::max(lambda, 0.0)) * extent) + 8.0;
    return std::max<std::size_t>(16, static_cast<std::size_t>(band));
}

PlaneWaveBlock plane_wave_block(double lambda, const ScattererSet& s, const SphereGrid& grid) {
    if (!(lambda > 0.0)) throw BadParams("plane_wave_block requires lambda > 0");
    const double k = std::sqrt(lambda);
    const auto n = static_cast<Eigen::Index>(s.size());
    const auto K = static_cast<Eigen::Index>(grid.size());
    PlaneWaveBlock b;
    b.lambda = lambda;
    b.U.resize(n, K);
    for (Eigen::Index m = 0; m < n; ++m) {
        const double scale = 1.0 / std::sqrt(std::abs(s.weight(m)));
        const Vec3& x = s.point(m);
        for (Eigen::Index j = 0; j < K; ++j) {
            const double phase = -k * x.dot(grid.nodes[j]);
            b.U(m, j) = scale * dcomplex(std::cos(phase), std::sin(phase));
        }
    }
    return b;
}

CMatrix quadrature_overlap(const PlaneWaveBlock& block, const SphereGrid& grid) {
    const Eigen::Map<const RVector> w(grid.weights.data(),
                                      static_cast<Eigen::Index>(grid.weights.size()));
    return block.U * w.asDiagonal() * block.U.adjoint();
}

RMatrix plane_wave_overlap(double lambda, const ScattererSet& s) {
    const RMatrix g = gram_entries(lambda, s);
    const auto n = static_cast<Eigen::Index>(s.size());
    RVector inv_sqrt(n);
    for (Eigen::Index m = 0; m < n; ++m) inv_sqrt(m) = 1.0 / std::sqrt(std::abs(s.weight(m)));
    return (16.0 * pi * pi / std::sqrt(lambda)) * (inv_sqrt.asDiagonal() * g * inv_sqrt.asDiagonal());
}

double overlap_quadrature_error(double lambda, const ScattererSet& s, const SphereGrid& grid) {
    const CMatrix quad = quadrature_overlap(plane_wave_block(lambda, s, grid), grid);
    const CMatrix exact = plane_wave_overlap(lambda, s).cast<dcomplex>();
    return (quad - exact).cwiseAbs().maxCoeff();
}

void write_grid_csv(const SphereGrid& grid, std::ostream& os) {
    os << "theta,phi,weight\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        os << grid.theta[k] << ',' << grid.phi[k] << ',' << grid.weights[k] << '\n';
    }
}

}  // namespace zrs
