#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zrs/common.hpp"

namespace zrs {

inline constexpr double default_duplicate_epsilon = 1e-12;

enum class FamilyKind { UniformLine, CubicLatticeBall, Clustering };

FamilyKind parse_family_kind(std::string_view name);
std::string_view family_kind_name(FamilyKind kind);

// Description of a generated (conceptually infinite) family truncated to n members.
struct FamilySpec {
    FamilyKind kind = FamilyKind::UniformLine;
    std::map<std::string, double> params;
    std::size_t n = 1;
    bool strict = false;
};

// eta[k] is the minimum pairwise distance among the first k+2 points, so the
// vector has N-1 entries and is nonincreasing.
struct SeparationProfile {
    std::vector<double> eta;

    // eta_m with 1-based m. eta_1 (an empty minimum) is taken equal to eta_2.
    double at(std::size_t m) const;
    bool empty() const { return eta.empty(); }
};

SeparationProfile separation_profile(const std::vector<Vec3>& points,
                                     double eps = default_duplicate_epsilon);

/// Positions x_m and nonzero real strengths w_m of N point interactions.
///
/// Instances are immutable and always valid: construction rejects empty or
/// mismatched lists, zero or non-finite strengths and coincident points. A
/// set produced by generate_family remembers its generator so admissibility
/// can be judged as a truncation of an infinite family.
class ScattererSet {
public:
    static ScattererSet create(std::vector<Vec3> points, std::vector<double> weights,
                               double eps = default_duplicate_epsilon);

    std::size_t size() const { return points_.size(); }
    const std::vector<Vec3>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    const Vec3& point(std::size_t m) const { return points_[m]; }
    double weight(std::size_t m) const { return weights_[m]; }
    const SeparationProfile& separation() const { return separation_; }
    const std::optional<FamilySpec>& family() const { return family_; }
    bool is_truncation() const { return family_.has_value(); }

    /// First n members (n clamped to [1, size()]).
    ScattererSet prefix(std::size_t n) const;
    /// Same points, strengths replaced.
    ScattererSet with_weights(std::vector<double> weights) const;

    double diameter() const;
    double max_radius() const;
    double min_abs_weight() const;

private:
    friend ScattererSet generate_family(const FamilySpec& spec);
    ScattererSet() = default;

    std::vector<Vec3> points_;
    std::vector<double> weights_;
    SeparationProfile separation_;
    std::optional<FamilySpec> family_;
};

/// Deterministic member lists for the built-in families.
///
///  - uniform-line: x_m = ((m-1) d, 0, 0), w_m = w. Params: spacing, w.
///  - cubic-lattice-ball: the n lattice points d*Z^3 closest to the origin
///    (ties broken lexicographically), w_m = w * m^q. Params: spacing, w, q.
///  - clustering: x_m = (scale * m^-(p-1), 0, 0), w_m = w0 * m^q, so that
///    eta_m ~ m^-p and the points accumulate at the origin. Requires p > 1.
///    The summability conditions K0, K1 < inf hold iff q > 2p + 1 and q > 1;
///    in strict mode violating parameters raise BadParams.
ScattererSet generate_family(const FamilySpec& spec);

// Convergence evidence for a positive series from its retained terms: a
// least-squares fit of log(term) against log(m) over the second half of the
// truncation. slope < -1 is read as convergent.
struct SeriesDiagnostic {
    double slope = 0.0;
    bool sufficient_data = false;
    bool converging = true;
};

struct AdmissibilityVerdict {
    bool k0_finite = true;
    bool k1_finite = true;
    bool tail_contractive = true;
    // Tail-decay condition (M_N * tau_N -> 0); only judged when sampled.
    std::optional<bool> tail_decay;
    bool borderline = false;
    bool pass = true;
};

struct TailDecaySample {
    std::size_t n = 0;
    double m_sampled = 0.0;
    double tau = 0.0;
    double product = 0.0;
};

struct AdmissibilityReport {
    std::size_t n = 0;
    double K0 = 0.0;
    double K1 = 0.0;
    // tail[k] = tau_{k+1} = sum_{m > k+1} 1/(eta_m^2 |w_m|) over retained members.
    std::vector<double> tail;
    double b = 1.0;
    std::size_t n0 = 0;
    // Guaranteed bound on ||Qtilde restricted to m > n0|| for 0 < lambda <= b.
    double p_tail = 0.0;
    // Closed-form (K0/eta^2 + K1) estimate of the same quantity; not a guaranteed bound.
    double p_tail_estimate = 0.0;
    SeriesDiagnostic k0_series;
    SeriesDiagnostic k1_series;
    std::vector<TailDecaySample> tail_decay;
    AdmissibilityVerdict verdict;
};

struct AdmissibilityOptions {
    double b = 1.0;
    // Split index for the tail bound; when absent the smallest n0 with p_tail < 1.
    std::optional<std::size_t> n0;
};

AdmissibilityReport check_admissibility(const ScattererSet& s,
                                        const AdmissibilityOptions& options = {});

/// tau_n0 and sum_{m>n0} 1/|w_m|.
double tail_k1(const ScattererSet& s, std::size_t n0);
double tail_k0(const ScattererSet& s, std::size_t n0);

/// Guaranteed bound on ||Qtilde(z)|| restricted to members m > n0 for |sqrt z| <= sqrt_b_abs:
/// sqrt_b_abs/(4 pi min_{m>n0}|w_m|) + sqrt(2 K0_tail tau_n0)/(4 pi). Zero for an empty tail.
double tail_norm_bound(const ScattererSet& s, std::size_t n0, double sqrt_b_abs);

/// max_{m>n0} (sqrt_b_abs + K0/eta_m^2 + K1)/(4 pi |w_m|) with the full-set K0, K1.
double tail_norm_estimate(const ScattererSet& s, std::size_t n0, double sqrt_b_abs);

SeriesDiagnostic diagnose_series(const std::vector<double>& terms);

}  // namespace zrs
