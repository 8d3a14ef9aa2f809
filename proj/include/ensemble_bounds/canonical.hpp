#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "ensemble_bounds/distribution.hpp"
#include "ensemble_bounds/entropy.hpp"
#include "ensemble_bounds/errors.hpp"

namespace ensemble_bounds {

namespace detail {
/// Accuracies this close to 0.5 or 1 are treated as degenerate: every
/// extremal construction collapses to the point mass there and the
/// closed-form weight denominators vanish.
inline constexpr double kDegenerateAccuracyTol = 1e-9;

inline bool degenerate_accuracy(double pi) {
    return pi <= 0.5 + kDegenerateAccuracyTol || pi >= 1.0 - kDegenerateAccuracyTol;
}
}  // namespace detail

/// Most refined classifier at a given accuracy: confidence 1 on a fraction of
/// inputs, coin-flipping (confidence 0.5) on the rest.
inline ConfidenceDistribution specialist(double pi) {
    if (!(pi >= 0.5 && pi <= 1.0)) {
        throw DomainError("specialist: accuracy " + std::to_string(pi) +
                          " outside [0.5, 1]");
    }
    DistributionBuilder b;
    b.add(0.5, 2.0 * (1.0 - pi));
    b.add(1.0, 2.0 * (pi - 0.5));
    return std::move(b).build();
}

/// Least refined classifier at a given accuracy: constant confidence pi.
inline ConfidenceDistribution generalist(double pi) {
    if (!(pi >= 0.5 && pi <= 1.0)) {
        throw DomainError("generalist: accuracy " + std::to_string(pi) +
                          " outside [0.5, 1]");
    }
    return point_mass(pi);
}

/// Split of a confidence distribution at its own accuracy: mass, conditional
/// accuracy and conditional information of the below-average part (C < pi,
/// "left") and the at-or-above-average part (C >= pi, "right").
///
/// The left side is empty exactly when f is a point mass; then has_left is
/// false and the left fields are meaningless.
struct ConditionalSplit {
    double threshold = 0.5;  ///< pi of the distribution that was split
    bool has_left = false;
    double p_left = 0.0;
    double p_right = 1.0;
    double pi_left = 0.5;
    double pi_right = 0.5;
    double iota_left = 0.0;
    double iota_right = 0.0;
};

inline ConditionalSplit conditional_split(const ConfidenceDistribution& f) {
    ConditionalSplit s;
    s.threshold = accuracy(f);

    double wl = 0.0, accl = 0.0, infol = 0.0;
    double wr = 0.0, accr = 0.0, infor = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double c = f.confidence(i);
        const double w = f.weight(i);
        const double gain = 1.0 - binary_entropy(c);
        if (c < s.threshold) {
            wl += w;
            accl += w * c;
            infol += w * gain;
        } else {
            wr += w;
            accr += w * c;
            infor += w * gain;
        }
    }

    s.p_left = wl;
    s.p_right = wr;
    s.has_left = wl > 0.0;
    if (s.has_left) {
        s.pi_left = accl / wl;
        s.iota_left = infol / wl;
    }
    s.pi_right = accr / wr;
    s.iota_right = infor / wr;
    return s;
}

/// Refine f toward the extremes without changing its accuracy: the
/// below-average conditional part is split onto {0.5, pi}, the above-average
/// part onto {pi, 1}, each preserving its conditional mean. Point masses and
/// degenerate accuracies are fixed points and are returned unchanged.
/// The result has at least the information of f.
inline ConfidenceDistribution more_refined(const ConfidenceDistribution& f) {
    if (f.is_point_mass()) return f;
    const double pi = accuracy(f);
    if (detail::degenerate_accuracy(pi)) return f;

    const ConditionalSplit s = conditional_split(f);
    const double w05 = s.p_left * (pi - s.pi_left) / (pi - 0.5);
    const double wpi = s.p_left * (s.pi_left - 0.5) / (pi - 0.5) +
                       s.p_right * (1.0 - s.pi_right) / (1.0 - pi);
    const double w1 = s.p_right * (s.pi_right - pi) / (1.0 - pi);

    DistributionBuilder b;
    b.add(0.5, w05);
    b.add(pi, wpi);
    b.add(1.0, w1);
    return std::move(b).build();
}

/// Coarsen f without changing its accuracy: merge each conditional half onto
/// its conditional mean, leaving a two-point distribution. Point masses are
/// returned unchanged. The result has at most the information of f.
inline ConfidenceDistribution less_refined(const ConfidenceDistribution& f) {
    if (f.is_point_mass()) return f;
    const ConditionalSplit s = conditional_split(f);

    DistributionBuilder b;
    b.add(s.pi_left, s.p_left);
    b.add(s.pi_right, s.p_right);
    return std::move(b).build();
}

namespace detail {

/// Information bookkeeping of the three-point refinement as a function of
/// the split parameters alone. For a split with conditional accuracies
/// (x_left, x_right) the left share is pinned by the accuracy constraint,
/// and:
///   upper(x_left, x_right) = information of the refined three-point
///                            distribution built from that split;
///   lower(x_left, x_right) = least information any distribution with that
///                            split can have (point masses per side).
/// A split is consistent with some distribution of information iota iff
/// lower <= iota <= upper.
struct RefinementGainObjective {
    double pi;
    double iota;
    double info_at_pi;  // 1 - H2(pi)

    double chord_left(double x) const {
        return (x - 0.5) * info_at_pi / (pi - 0.5);
    }
    double chord_right(double x) const {
        return info_at_pi + (x - pi) * (1.0 - info_at_pi) / (1.0 - pi);
    }

    /// Refined information of the split, or -1 when no distribution with
    /// profile (pi, iota) has this split.
    double operator()(double x_left, double x_right) const {
        x_left = std::clamp(x_left, 0.5, pi);
        x_right = std::clamp(x_right, pi, 1.0);
        double p_left = 0.0;
        if (x_right - x_left >= 1e-15) {
            p_left = std::clamp((x_right - pi) / (x_right - x_left), 0.0, 1.0);
        }
        const double p_right = 1.0 - p_left;
        const double least = p_left * (1.0 - binary_entropy(x_left)) +
                             p_right * (1.0 - binary_entropy(x_right));
        if (least > iota + 1e-12) return -1.0;
        return p_left * chord_left(x_left) + p_right * chord_right(x_right);
    }
};

/// Golden-section maximization of fn on [a, b]; fn may return -1 for
/// infeasible points. Returns the best abscissa found.
template <class Fn>
double golden_max(Fn&& fn, double a, double b, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = fn(x1);
    double f2 = fn(x2);
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = fn(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = fn(x2);
        }
    }
    return f1 >= f2 ? x1 : x2;
}

}  // namespace detail

/// Largest information gain the three-point refinement can achieve over any
/// classifier with profile (pi, iota).
///
/// The refined information depends on the underlying distribution only
/// through its split parameters, so the search runs over conditional
/// accuracies (x_left, x_right) in [0.5, pi] x [pi, 1], restricted to splits
/// consistent with the given information: a deterministic 200 x 200 grid scan
/// followed by alternating per-coordinate golden-section refinement.
/// Zero at both ends of the admissible information range.
inline double max_info_gain(double pi, double iota) {
    ClassifierProfile{pi, iota}.validate();
    pi = std::clamp(pi, 0.5, 1.0);
    if (detail::degenerate_accuracy(pi)) return 0.0;
    const double lo = info_floor(pi);
    const double hi = info_ceiling(pi);
    iota = std::clamp(iota, lo, hi);

    const detail::RefinementGainObjective obj{pi, iota, lo};

    constexpr int kGrid = 200;
    const double step_l = (pi - 0.5) / (kGrid - 1);
    const double step_r = (1.0 - pi) / (kGrid - 1);
    double best = lo;  // the degenerate split (pi, pi) is always consistent
    double best_l = pi, best_r = pi;
    for (int i = 0; i < kGrid; ++i) {
        const double xl = 0.5 + i * step_l;
        for (int j = 0; j < kGrid; ++j) {
            const double xr = pi + j * step_r;
            const double v = obj(xl, xr);
            if (v > best) {
                best = v;
                best_l = xl;
                best_r = xr;
            }
        }
    }

    double wl = 1.5 * step_l;
    double wr = 1.5 * step_r;
    for (int round = 0; round < 70 && (wl > 1e-12 || wr > 1e-12); ++round) {
        const double al = std::max(0.5, best_l - wl);
        const double bl = std::min(pi, best_l + wl);
        const double xl = detail::golden_max(
            [&](double x) { return obj(x, best_r); }, al, bl, 0.05 * wl + 1e-13);
        if (obj(xl, best_r) > best) {
            best = obj(xl, best_r);
            best_l = xl;
        }
        const double ar = std::max(pi, best_r - wr);
        const double br = std::min(1.0, best_r + wr);
        const double xr = detail::golden_max(
            [&](double x) { return obj(best_l, x); }, ar, br, 0.05 * wr + 1e-13);
        if (obj(best_l, xr) > best) {
            best = obj(best_l, xr);
            best_r = xr;
        }
        wl *= 0.5;
        wr *= 0.5;
    }

    return std::clamp(best - iota, 0.0, hi - iota);
}

/// Three-point construction on {0.5, pi, 1} that dominates, in the refinement
/// order, the three-point refinement of every classifier with profile
/// (pi, iota). Its accuracy is pi and its information is iota plus the
/// maximal refinement gain. Degenerate accuracies yield the point mass.
inline ConfidenceDistribution more_specialized(double pi, double iota) {
    ClassifierProfile{pi, iota}.validate();
    pi = std::clamp(pi, 0.5, 1.0);
    if (detail::degenerate_accuracy(pi)) return point_mass(pi);
    iota = std::clamp(iota, info_floor(pi), info_ceiling(pi));

    const double h = binary_entropy(pi);
    const double denom = 2.0 * pi - 2.0 + h;
    if (std::abs(denom) < 1e-12) return point_mass(pi);

    const double total_info = std::min(iota + max_info_gain(pi, iota), info_ceiling(pi));
    const double above_floor = total_info - 1.0 + h;  // total_info - info_floor
    double w05 = 2.0 * (1.0 - pi) * above_floor / denom;
    double wpi = (2.0 * pi - 1.0 - total_info) / denom;
    double w1 = 2.0 * (pi - 0.5) * above_floor / denom;

    // Weights vanish exactly at the envelope boundaries; sweep away the
    // numerical residue so degenerate profiles collapse to the closed forms.
    for (double* w : {&w05, &wpi, &w1}) {
        if (*w < 1e-11) *w = 0.0;
    }

    DistributionBuilder b;
    b.add(0.5, w05);
    b.add(pi, wpi);
    b.add(1.0, w1);
    return std::move(b).build();
}

/// Two-point construction dominated, in the refinement order, by the
/// two-point coarsening of every classifier with profile (pi, iota). The
/// support points are the innermost conditional accuracies consistent with
/// the profile; accuracy is pi and information at most iota.
inline ConfidenceDistribution less_specialized(double pi, double iota) {
    ClassifierProfile{pi, iota}.validate();
    pi = std::clamp(pi, 0.5, 1.0);
    if (detail::degenerate_accuracy(pi)) return point_mass(pi);
    iota = std::clamp(iota, info_floor(pi), info_ceiling(pi));

    const double h = binary_entropy(pi);
    const double gain = 1.0 - h;
    const double half = pi - 0.5;

    const double den_l = 2.0 * half * (1.0 - iota) - 2.0 * (1.0 - pi) * gain;
    const double den_r = 2.0 * half * h - 2.0 * (1.0 - pi) * iota;
    if (std::abs(den_l) < 1e-12 || std::abs(den_r) < 1e-12) return point_mass(pi);

    double cl = (2.0 * half * (pi - iota) - (1.0 - pi) * gain) / den_l;
    double cr = (2.0 * half * (pi - 1.0 + h) - (1.0 - pi) * iota) / den_r;

    // Snap to the analytic endpoints before clamping into the valid brackets.
    if (std::abs(cl - 0.5) < 1e-10) cl = 0.5;
    if (std::abs(cl - pi) < 1e-10) cl = pi;
    if (std::abs(cr - 1.0) < 1e-10) cr = 1.0;
    if (std::abs(cr - pi) < 1e-10) cr = pi;
    cl = std::clamp(cl, 0.5, pi);
    cr = std::clamp(cr, pi, 1.0);
    if (cr - cl < 1e-12) return point_mass(pi);

    DistributionBuilder b;
    b.add(cl, (cr - pi) / (cr - cl));
    b.add(cr, (pi - cl) / (cr - cl));
    return std::move(b).build();
}

}  // namespace ensemble_bounds
