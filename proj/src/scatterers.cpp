#include "zrs/scatterers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace zrs {

namespace {

double param(const FamilySpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

void require_known_params(const FamilySpec& spec, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : spec.params) {
        const bool ok = std::any_of(known.begin(), known.end(),
                                    [&](const char* k) { return key == k; });
        if (!ok) {
            throw BadParams("unknown parameter '" + key + "' for family " +
                            std::string(family_kind_name(spec.kind)));
        }
        if (!std::isfinite(value)) throw BadParams("parameter '" + key + "' is not finite");
    }
}

double inv_eta2_w(const ScattererSet& s, std::size_t m) {
    // 1-based m
    const double eta = s.separation().at(m);
    return 1.0 / (eta * eta * std::abs(s.weight(m - 1)));
}

}  // namespace

FamilyKind parse_family_kind(std::string_view name) {
    if (name == "uniform-line") return FamilyKind::UniformLine;
    if (name == "cubic-lattice-ball") return FamilyKind::CubicLatticeBall;
    if (name == "clustering") return FamilyKind::Clustering;
    throw BadParams("unknown family kind '" + std::string(name) + "'");
}

std::string_view family_kind_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::UniformLine: return "uniform-line";
        case FamilyKind::CubicLatticeBall: return "cubic-lattice-ball";
        case FamilyKind::Clustering: return "clustering";
    }
    return "?";
}

double SeparationProfile::at(std::size_t m) const {
    if (eta.empty() || m == 0) return std::numeric_limits<double>::infinity();
    return m <= 2 ? eta.front() : eta.at(m - 2);
}

SeparationProfile separation_profile(const std::vector<Vec3>& points, double eps) {
    SeparationProfile prof;
    if (points.size() < 2) return prof;
    prof.eta.reserve(points.size() - 1);
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < points.size(); ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            const double d = (points[k] - points[j]).norm();
            if (!(d >= eps)) {
                std::ostringstream os;
                os << "points " << j << " and " << k << " coincide (distance " << d << ")";
                throw DuplicatePoint(os.str());
            }
            running = std::min(running, d);
        }
        prof.eta.push_back(running);
    }
    return prof;
}

ScattererSet ScattererSet::create(std::vector<Vec3> points, std::vector<double> weights,
                                  double eps) {
    if (points.empty()) throw BadParams("scatterer set is empty");
    if (points.size() != weights.size()) {
        throw BadParams("points and weights differ in length");
    }
    for (std::size_t m = 0; m < weights.size(); ++m) {
        if (!std::isfinite(weights[m]) || weights[m] == 0.0) {
            throw BadParams("weight " + std::to_string(m) + " must be finite and nonzero");
        }
        if (!points[m].allFinite()) {
            throw BadParams("point " + std::to_string(m) + " is not finite");
        }
    }
    ScattererSet s;
    s.separation_ = separation_profile(points, eps);
    s.points_ = std::move(points);
    s.weights_ = std::move(weights);
    return s;
}

ScattererSet ScattererSet::prefix(std::size_t n) const {
    n = std::clamp<std::size_t>(n, 1, size());
    ScattererSet s;
    s.points_.assign(points_.begin(), points_.begin() + n);
    s.weights_.assign(weights_.begin(), weights_.begin() + n);
    s.separation_.eta.assign(separation_.eta.begin(), separation_.eta.begin() + (n - 1));
    s.family_ = family_;
    if (s.family_) s.family_->n = n;
    return s;
}

ScattererSet ScattererSet::with_weights(std::vector<double> weights) const {
    auto s = create(points_, std::move(weights), 0.0);
    s.family_ = family_;
    return s;
}

double ScattererSet::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            d = std::max(d, (points_[i] - points_[j]).norm());
    return d;
}

double ScattererSet::max_radius() const {
    double r = 0.0;
    for (const auto& p : points_) r = std::max(r, p.norm());
    return r;
}

double ScattererSet::min_abs_weight() const {
    double w = std::numeric_limits<double>::infinity();
    for (double x : weights_) w = std::min(w, std::abs(x));
    return w;
}

ScattererSet generate_family(const FamilySpec& spec) {
    if (spec.n < 1) throw BadParams("family truncation N must be >= 1");
    std::vector<Vec3> pts;
    std::vector<double> ws;
    pts.reserve(spec.n);
    ws.reserve(spec.n);

    switch (spec.kind) {
        case FamilyKind::UniformLine: {
            require_known_params(spec, {"spacing", "w"});
            const double d = param(spec, "spacing", 1.0);
            const double w = param(spec, "w", 1.0);
            if (!(d > 0.0)) throw BadParams("uniform-line: spacing must be positive");
            if (w == 0.0) throw BadParams("uniform-line: w must be nonzero");
            for (std::size_t m = 0; m < spec.n; ++m) {
                pts.emplace_back(d * static_cast<double>(m), 0.0, 0.0);
                ws.push_back(w);
            }
            break;
        }
        case FamilyKind::CubicLatticeBall: {
            require_known_params(spec, {"spacing", "w", "q"});
            const double d = param(spec, "spacing", 1.0);
            const double w = param(spec, "w", 1.0);
            const double q = param(spec, "q", 0.0);
            if (!(d > 0.0)) throw BadParams("cubic-lattice-ball: spacing must be positive");
            if (w == 0.0) throw BadParams("cubic-lattice-ball: w must be nonzero");
            std::vector<std::array<int, 3>> cells;
            for (int r = 0; cells.size() < spec.n; ++r) {
                cells.clear();
                for (int i = -r; i <= r; ++i)
                    for (int j = -r; j <= r; ++j)
                        for (int k = -r; k <= r; ++k)
                            if (i * i + j * j + k * k <= r * r) cells.push_back({i, j, k});
            }
            std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
                const int ra = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
                const int rb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
                return ra != rb ? ra < rb : a < b;
            });
            for (std::size_t m = 0; m < spec.n; ++m) {
                const auto& c = cells.at(m);
                pts.emplace_back(d * c[0], d * c[1], d * c[2]);
                ws.push_back(w * std::pow(static_cast<double>(m + 1), q));
            }
            break;
        }
        case FamilyKind::Clustering: {
            require_known_params(spec, {"p", "q", "scale", "w0"});
            const double p = param(spec, "p", 2.0);
            const double q = param(spec, "q", 6.0);
            const double scale = param(spec, "scale", 1.0);
            const double w0 = param(spec, "w0", 1.0);
            if (!(p > 1.0)) throw BadParams("clustering: p must exceed 1");
            if (!(scale > 0.0)) throw BadParams("clustering: scale must be positive");
            if (w0 == 0.0) throw BadParams("clustering: w0 must be nonzero");
            if (spec.strict && !(q > 2.0 * p + 1.0 && q > 1.0)) {
                std::ostringstream os;
                os << "clustering: q = " << q << " violates q > 2p + 1 = " << 2.0 * p + 1.0;
                throw BadParams(os.str());
            }
            for (std::size_t m = 1; m <= spec.n; ++m) {
                const double md = static_cast<double>(m);
                pts.emplace_back(scale * std::pow(md, -(p - 1.0)), 0.0, 0.0);
                ws.push_back(w0 * std::pow(md, q));
            }
            break;
        }
    }

    auto s = ScattererSet::create(std::move(pts), std::move(ws));
    s.family_ = spec;
    return s;
}

SeriesDiagnostic diagnose_series(const std::vector<double>& terms) {
    SeriesDiagnostic d;
    const std::size_t n = terms.size();
    constexpr std::size_t min_terms = 6;
    if (n < min_terms) return d;
    const std::size_t first = n / 2;  // 0-based index of m = n/2 + 1
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t k = first; k < n; ++k) {
        if (!(terms[k] > 0.0)) continue;
        const double x = std::log(static_cast<double>(k + 1));
        const double y = std::log(terms[k]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt < 3) return d;
    const double c = static_cast<double>(cnt);
    d.slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
    d.sufficient_data = true;
    d.converging = d.slope < -1.0;
    return d;
}

double tail_k1(const ScattererSet& s, std::size_t n0) {
    if (s.size() < 2) return 0.0;
    double t = 0.0;
    for (std::size_t m = s.size(); m > n0; --m) t += inv_eta2_w(s, m);
    return t;
}

double tail_k0(const ScattererSet& s, std::size_t n0) {
    double t = 0.0;
    for (std::size_t m = s.size(); m > n0; --m) t += 1.0 / std::abs(s.weight(m - 1));
    return t;
}

double tail_norm_bound(const ScattererSet& s, std::size_t n0, double sqrt_b_abs) {
    if (n0 >= s.size()) return 0.0;
    double wmin = std::numeric_limits<double>::infinity();
    for (std::size_t m = n0; m < s.size(); ++m) wmin = std::min(wmin, std::abs(s.weight(m)));
    const double diag = sqrt_b_abs / (4.0 * pi * wmin);
    const double off = std::sqrt(2.0 * tail_k0(s, n0) * tail_k1(s, n0)) / (4.0 * pi);
    return diag + off;
}

double tail_norm_estimate(const ScattererSet& s, std::size_t n0, double sqrt_b_abs) {
    const double K0 = tail_k0(s, 0);
    const double K1 = tail_k1(s, 0);
    double best = 0.0;
    for (std::size_t m = n0 + 1; m <= s.size(); ++m) {
        double inner = sqrt_b_abs + K1;
        if (!s.separation().empty()) {
            const double eta = s.separation().at(m);
            inner += K0 / (eta * eta);
        }
        best = std::max(best, inner / (4.0 * pi * std::abs(s.weight(m - 1))));
    }
    return best;
}

AdmissibilityReport check_admissibility(const ScattererSet& s,
                                        const AdmissibilityOptions& options) {
    AdmissibilityReport r;
    r.n = s.size();
    r.b = options.b;

    std::vector<double> k0_terms(r.n), k1_terms;
    for (std::size_t m = 1; m <= r.n; ++m) k0_terms[m - 1] = 1.0 / std::abs(s.weight(m - 1));
    if (r.n >= 2) {
        k1_terms.resize(r.n);
        for (std::size_t m = 1; m <= r.n; ++m) k1_terms[m - 1] = inv_eta2_w(s, m);
    }
    r.K0 = std::accumulate(k0_terms.begin(), k0_terms.end(), 0.0);
    r.K1 = std::accumulate(k1_terms.begin(), k1_terms.end(), 0.0);

    // tau_N by backward accumulation so the sequence is exactly nonincreasing.
    r.tail.assign(r.n, 0.0);
    double acc = 0.0;
    for (std::size_t N = r.n; N >= 1; --N) {
        r.tail[N - 1] = acc;
        if (!k1_terms.empty()) acc += k1_terms[N - 1];
    }

    const double sqrt_b = std::sqrt(std::max(options.b, 0.0));
    if (options.n0) {
        r.n0 = std::min(*options.n0, r.n);
    } else {
        r.n0 = r.n;
        for (std::size_t n0 = 0; n0 <= r.n; ++n0) {
            if (tail_norm_bound(s, n0, sqrt_b) < 1.0) { r.n0 = n0; break; }
        }
    }
    r.p_tail = tail_norm_bound(s, r.n0, sqrt_b);
    r.p_tail_estimate = tail_norm_estimate(s, r.n0, sqrt_b);

    r.k0_series = diagnose_series(k0_terms);
    r.k1_series = diagnose_series(k1_terms);

    auto& v = r.verdict;
    if (s.is_truncation()) {
        v.k0_finite = r.k0_series.converging;
        v.k1_finite = r.k1_series.converging;
    }
    v.tail_contractive = r.p_tail < 1.0;
    v.pass = v.k0_finite && v.k1_finite;
    return r;
}

}  // namespace zrs
