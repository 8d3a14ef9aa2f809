#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ensemble_bounds/entropy.hpp"
#include "ensemble_bounds/errors.hpp"

namespace ensemble_bounds {

/// One support point of a confidence distribution: a confidence value c in
/// [0.5, 1] carrying probability mass w.
struct WeightedConfidence {
    double c = 0.5;
    double w = 0.0;
};

namespace detail {

/// Absolute tolerance under which two support points are considered the same
/// confidence and merged (mass-weighted). Repeated pairwise combination
/// produces clusters of floating-point near-duplicates; merging them keeps
/// the support size bounded.
inline constexpr double kCoalesceTol = 1e-9;

/// Tolerance accepted on caller-supplied mass sums (hand-written JSON).
inline constexpr double kMassSumTol = 1e-6;

/// Slack for snapping internally computed confidences onto [0.5, 1].
inline constexpr double kRangeSnapTol = 1e-9;

}  // namespace detail

/// A discrete confidence distribution: finitely many support points in
/// [0.5, 1] with strictly positive masses summing to one.
///
/// Values are canonical after construction: support sorted strictly
/// increasing, points closer than the coalescing tolerance merged at their
/// mass-weighted mean, zero-mass points dropped, masses renormalized.
/// Instances are immutable; every operation on them is a pure function, so
/// they can be shared freely across threads.
class ConfidenceDistribution {
public:
    std::size_t size() const noexcept { return confidences_.size(); }
    double confidence(std::size_t i) const { return confidences_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& confidences() const noexcept { return confidences_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    bool is_point_mass() const noexcept { return confidences_.size() == 1; }

    std::vector<WeightedConfidence> points() const {
        std::vector<WeightedConfidence> pts(size());
        for (std::size_t i = 0; i < size(); ++i) pts[i] = {confidences_[i], weights_[i]};
        return pts;
    }

    /// Index of the support point equal to c within tol, or npos.
    std::size_t find(double c, double tol = 1e-12) const {
        for (std::size_t i = 0; i < size(); ++i) {
            if (std::abs(confidences_[i] - c) <= tol) return i;
        }
        return npos;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const ConfidenceDistribution& a,
                           const ConfidenceDistribution& b) {
        return a.confidences_ == b.confidences_ && a.weights_ == b.weights_;
    }

private:
    ConfidenceDistribution(std::vector<double> cs, std::vector<double> ws)
        : confidences_(std::move(cs)), weights_(std::move(ws)) {}

    friend ConfidenceDistribution make_distribution(std::vector<WeightedConfidence>);
    friend ConfidenceDistribution point_mass(double);
    friend class DistributionBuilder;
    friend ConfidenceDistribution detail_from_canonical(std::vector<double>,
                                                        std::vector<double>);

    std::vector<double> confidences_;
    std::vector<double> weights_;
};

/// Rewrap points that are already sorted, separated, positive and normalized
/// (used where an operation is an exact reindexing of an existing
/// distribution and must not perturb masses).
inline ConfidenceDistribution detail_from_canonical(std::vector<double> cs,
                                                    std::vector<double> ws) {
    return ConfidenceDistribution(std::move(cs), std::move(ws));
}

namespace detail {

struct RawPoints {
    std::vector<double> cs;
    std::vector<double> ws;
};

/// Sort, merge points within the coalescing tolerance at their mass-weighted
/// mean, drop non-positive masses, renormalize to total mass one. Ordering is
/// by (confidence, mass) so the result depends only on the multiset of input
/// points, not their arrival order (keeps pairwise combination exactly
/// commutative). Renormalization is skipped when the total is already one to
/// within 1e-12, so reconstructing an existing distribution reproduces it
/// bitwise.
inline RawPoints canonicalize(std::vector<double> cs, std::vector<double> ws,
                              double tol = kCoalesceTol) {
    std::vector<std::size_t> order(cs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cs[a] < cs[b] || (cs[a] == cs[b] && ws[a] < ws[b]);
    });

    RawPoints out;
    out.cs.reserve(cs.size());
    out.ws.reserve(ws.size());
    for (std::size_t idx : order) {
        const double c = cs[idx];
        const double w = ws[idx];
        if (w <= 0.0) continue;
        if (!out.cs.empty() && c - out.cs.back() <= tol) {
            const double wm = out.ws.back();
            const double merged = wm + w;
            out.cs.back() = (out.cs.back() * wm + c * w) / merged;
            out.ws.back() = merged;
        } else {
            out.cs.push_back(c);
            out.ws.push_back(w);
        }
    }

    double total = 0.0;
    for (double w : out.ws) total += w;
    if (total > 0.0 && std::abs(total - 1.0) > 1e-12) {
        for (double& w : out.ws) w /= total;
    }
    if (out.ws.size() == 1) out.ws[0] = 1.0;
    return out;
}

}  // namespace detail

/// Trusted construction path for masses produced inside the library (results
/// of combination, merging, discretization). Skips the caller-facing mass-sum
/// check but still canonicalizes, and snaps confidences that drifted a few
/// ulps outside [0.5, 1] back onto the interval.
class DistributionBuilder {
public:
    void reserve(std::size_t n) {
        cs_.reserve(n);
        ws_.reserve(n);
    }

    void add(double c, double w) {
        if (w <= 0.0) return;
        if (c < 0.5 || c > 1.0) {
            if (c < 0.5 - detail::kRangeSnapTol || c > 1.0 + detail::kRangeSnapTol) {
                throw ConfidenceOutOfRange(
                    "internal confidence " + std::to_string(c) + " outside [0.5, 1]");
            }
            c = std::clamp(c, 0.5, 1.0);
        }
        cs_.push_back(c);
        ws_.push_back(w);
    }

    ConfidenceDistribution build(double coalesce_tol = detail::kCoalesceTol) && {
        auto raw = detail::canonicalize(std::move(cs_), std::move(ws_), coalesce_tol);
        if (raw.cs.empty()) throw EmptySupport("distribution has no mass");
        return ConfidenceDistribution(std::move(raw.cs), std::move(raw.ws));
    }

private:
    std::vector<double> cs_;
    std::vector<double> ws_;
};

/// Validating constructor for caller-supplied points.
///
/// Confidences must lie in [0.5, 1]; masses must be nonnegative and sum to
/// one within 1e-6. The result is canonical (see ConfidenceDistribution).
inline ConfidenceDistribution make_distribution(std::vector<WeightedConfidence> points) {
    if (points.empty()) throw EmptySupport("no support points given");

    std::vector<double> cs, ws;
    cs.reserve(points.size());
    ws.reserve(points.size());
    double total = 0.0;
    for (const auto& p : points) {
        if (!(p.c >= 0.5 && p.c <= 1.0)) {
            throw ConfidenceOutOfRange("confidence " + std::to_string(p.c) +
                                       " outside [0.5, 1]");
        }
        if (!(p.w >= 0.0)) {
            throw MassNotNormalized("mass " + std::to_string(p.w) +
                                    " is negative");
        }
        total += p.w;
        cs.push_back(p.c);
        ws.push_back(p.w);
    }
    if (std::abs(total - 1.0) > detail::kMassSumTol) {
        throw MassNotNormalized("masses sum to " + std::to_string(total) +
                                ", expected 1 within 1e-6");
    }

    auto raw = detail::canonicalize(std::move(cs), std::move(ws));
    if (raw.cs.empty()) throw EmptySupport("all supplied masses are zero");
    return ConfidenceDistribution(std::move(raw.cs), std::move(raw.ws));
}

/// The distribution concentrated at a single confidence.
inline ConfidenceDistribution point_mass(double c) {
    if (!(c >= 0.5 && c <= 1.0)) {
        throw ConfidenceOutOfRange("confidence " + std::to_string(c) +
                                   " outside [0.5, 1]");
    }
    return ConfidenceDistribution({c}, {1.0});
}

/// Overall probability of a correct prediction: the mean confidence.
inline double accuracy(const ConfidenceDistribution& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.weight(i) * f.confidence(i);
    return acc;
}

/// Mutual information (bits) between the true label and the classifier's
/// (prediction, confidence) output: the mean of 1 - H2(c).
inline double information(const ConfidenceDistribution& f) {
    double info = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        info += f.weight(i) * (1.0 - binary_entropy(f.confidence(i)));
    }
    return info;
}

/// A scoring function on confidences together with a declared convexity flag.
/// The flag is an assertion about phi, exercised by sampled Jensen checks in
/// the tests, not something the library verifies on construction.
struct ScoringFunction {
    std::string name;
    std::function<double(double)> phi;
    bool convex = false;

    double operator()(double c) const { return phi(c); }
};

namespace scoring {

inline ScoringFunction identity() {
    return {"identity", [](double c) { return c; }, true};
}

/// 1 - H2(c), the per-confidence information content. Strictly convex.
inline ScoringFunction information_gain() {
    return {"information_gain", [](double c) { return 1.0 - binary_entropy(c); },
            true};
}

inline ScoringFunction constant(double v) {
    return {"constant", [v](double) { return v; }, true};
}

}  // namespace scoring

/// Expectation of a scoring function under f. Accepts a ScoringFunction or
/// any callable on confidences.
template <class Phi>
double score(const ConfidenceDistribution& f, const Phi& phi) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.weight(i) * phi(f.confidence(i));
    return s;
}

/// Feasible information interval at a given accuracy. The lower end is
/// attained by the point-mass (generalist) distribution, the upper end by the
/// two-point distribution on {0.5, 1} (specialist).
inline double info_floor(double pi) { return 1.0 - binary_entropy(pi); }
inline double info_ceiling(double pi) { return 2.0 * (pi - 0.5); }

/// Absolute information from a fraction of the admissible range at accuracy
/// pi: fraction 0 is the floor, fraction 1 the ceiling.
inline double iota_from_fraction(double pi, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw DomainError("information fraction " + std::to_string(fraction) +
                          " outside [0, 1]");
    }
    const double lo = info_floor(pi);
    return lo + fraction * (info_ceiling(pi) - lo);
}

/// Summary pair (accuracy, information) of a classifier.
struct ClassifierProfile {
    double accuracy = 0.5;   ///< pi, in [0.5, 1]
    double information = 0;  ///< iota, in [0, 1] bits

    static constexpr double kFeasibilityTol = 1e-9;

    bool is_feasible(double tol = kFeasibilityTol) const {
        if (!(accuracy >= 0.5 - tol && accuracy <= 1.0 + tol)) return false;
        return information >= info_floor(std::clamp(accuracy, 0.5, 1.0)) - tol &&
               information <= info_ceiling(std::clamp(accuracy, 0.5, 1.0)) + tol;
    }

    void validate(double tol = kFeasibilityTol) const {
        if (!(accuracy >= 0.5 - tol && accuracy <= 1.0 + tol)) {
            throw ConfidenceOutOfRange("accuracy " + std::to_string(accuracy) +
                                       " outside [0.5, 1]");
        }
        if (!is_feasible(tol)) {
            throw InfeasibleProfile(
                "information " + std::to_string(information) +
                " outside the admissible range [" +
                std::to_string(info_floor(accuracy)) + ", " +
                std::to_string(info_ceiling(accuracy)) + "] at accuracy " +
                std::to_string(accuracy));
        }
    }

    static ClassifierProfile of(const ConfidenceDistribution& f) {
        return {ensemble_bounds::accuracy(f), ensemble_bounds::information(f)};
    }
};

/// Coarsening step along the refinement order: move mass eps1 from support
/// point c1 and eps2 from c2 onto their mass-weighted mean. Preserves the
/// distribution's accuracy; never increases the score of any convex scoring
/// function.
inline ConfidenceDistribution merge_step(const ConfidenceDistribution& f, double c1,
                                         double c2, double eps1, double eps2) {
    const std::size_t i1 = f.find(c1);
    const std::size_t i2 = f.find(c2);
    if (i1 == ConfidenceDistribution::npos) {
        throw PointNotInSupport("confidence " + std::to_string(c1) +
                                " is not a support point");
    }
    if (i2 == ConfidenceDistribution::npos) {
        throw PointNotInSupport("confidence " + std::to_string(c2) +
                                " is not a support point");
    }
    if (!(eps1 >= 0.0) || eps1 > f.weight(i1) + 1e-12) {
        throw MassExceedsAvailable("mass " + std::to_string(eps1) +
                                   " not available at " + std::to_string(c1));
    }
    if (!(eps2 >= 0.0) || eps2 > f.weight(i2) + 1e-12) {
        throw MassExceedsAvailable("mass " + std::to_string(eps2) +
                                   " not available at " + std::to_string(c2));
    }
    const double moved = eps1 + eps2;
    if (moved == 0.0 || i1 == i2) return f;

    eps1 = std::min(eps1, f.weight(i1));
    eps2 = std::min(eps2, f.weight(i2));
    const double center = (eps1 * f.confidence(i1) + eps2 * f.confidence(i2)) / moved;

    DistributionBuilder b;
    b.reserve(f.size() + 1);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double w = f.weight(i);
        if (i == i1) w -= eps1;
        if (i == i2) w -= eps2;
        b.add(f.confidence(i), w);
    }
    b.add(center, moved);
    return std::move(b).build();
}

/// A confidence distribution unfolded symmetrically onto [0, 1]: half of each
/// off-center mass is mirrored to 1 - c, mass at 0.5 stays put. Plain sorted
/// points, not a ConfidenceDistribution (the support leaves [0.5, 1]).
struct RedistributedDistribution {
    std::vector<double> support;  ///< sorted, in [0, 1]
    std::vector<double> weights;
};

inline RedistributedDistribution redistribute(const ConfidenceDistribution& f) {
    RedistributedDistribution out;
    out.support.reserve(2 * f.size());
    out.weights.reserve(2 * f.size());
    // Mirrored halves first (descending c gives ascending 1 - c).
    for (std::size_t j = f.size(); j-- > 0;) {
        if (f.confidence(j) > 0.5) {
            out.support.push_back(1.0 - f.confidence(j));
            out.weights.push_back(f.weight(j) / 2.0);
        }
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double c = f.confidence(i);
        out.support.push_back(c);
        out.weights.push_back(c == 0.5 ? f.weight(i) : f.weight(i) / 2.0);
    }
    return out;
}

/// Inverse of redistribute: fold the symmetric distribution back onto
/// [0.5, 1]. Exact bitwise round trip (halving and doubling a mass are exact
/// in binary), so no renormalization or coalescing is applied.
inline ConfidenceDistribution collapse_redistributed(const RedistributedDistribution& r) {
    std::vector<double> cs, ws;
    cs.reserve(r.support.size());
    ws.reserve(r.support.size());
    for (std::size_t i = 0; i < r.support.size(); ++i) {
        const double c = r.support[i];
        if (c < 0.5) continue;
        cs.push_back(c);
        ws.push_back(c == 0.5 ? r.weights[i] : 2.0 * r.weights[i]);
    }
    if (cs.empty()) throw EmptySupport("redistributed distribution has no mass in [0.5, 1]");
    return detail_from_canonical(std::move(cs), std::move(ws));
}

}  // namespace ensemble_bounds
