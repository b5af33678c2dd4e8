#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "zrs/common.hpp"
#include "zrs/scatterers.hpp"

namespace zrs {

enum class GridKind { GaussLegendreProduct, Icosphere };

GridKind parse_grid_kind(std::string_view name);
std::string_view grid_kind_name(GridKind kind);

// Quadrature on the unit sphere. Weights are solid angles and sum to 4 pi.
struct SphereGrid {
    GridKind kind = GridKind::GaussLegendreProduct;
    std::size_t order = 0;
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<double> theta;
    std::vector<double> phi;

    std::size_t size() const { return nodes.size(); }
    /// Highest spherical-harmonic degree integrated exactly; -1 when the rule
    /// carries no such guarantee (icosphere).
    int exact_degree() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n);

/// gauss-legendre-product: `order` Gauss-Legendre nodes in cos(theta) times
/// 2*order uniform azimuths; exact through degree 2*order - 1.
/// icosphere: recursively bisected icosahedron with order-1 levels (order 1 is
/// the 12-vertex icosahedron); vertex weights are one third of the adjacent
/// spherical-triangle areas. Throws BadOrder for order 0 or an oversized grid.
SphereGrid make_grid(GridKind kind, std::size_t order);

/// max(16, ceil(2 sqrt(lambda) R) + 8) with R the larger of the diameter and
/// the largest distance from the origin.
std::size_t default_grid_order(double lambda, const ScattererSet& s);

// U(m, k) = e^{-i sqrt(lambda) x_m . n_k} / sqrt(|w_m|), one row per site.
struct PlaneWaveBlock {
    double lambda = 0.0;
    CMatrix U;
};

PlaneWaveBlock plane_wave_block(double lambda, const ScattererSet& s, const SphereGrid& grid);

/// U diag(weights) U^H; approximates (16 pi^2 / sqrt(lambda)) D^-1/2 G_N D^-1/2.
CMatrix quadrature_overlap(const PlaneWaveBlock& block, const SphereGrid& grid);

/// Analytic counterpart of quadrature_overlap: 4 pi sinc(sqrt(lambda) r_mn) / sqrt(|w_m w_n|).
RMatrix plane_wave_overlap(double lambda, const ScattererSet& s);

/// Largest entrywise deviation between the two overlaps above.
double overlap_quadrature_error(double lambda, const ScattererSet& s, const SphereGrid& grid);

/// CSV with header "theta,phi,weight".
void write_grid_csv(const SphereGrid& grid, std::ostream& os);

}  // namespace zrs
