#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ensemble_bounds/distribution.hpp"
#include "ensemble_bounds/errors.hpp"

namespace ensemble_bounds {

struct CombineOptions {
    /// Support points of a combination result closer than this are merged.
    double coalesce_tol = detail::kCoalesceTol;

    /// When nonzero, combination results larger than this many points are
    /// snapped onto a uniform grid with that many cells on [0.5, 1]
    /// (mass- and accuracy-preserving, information changes by O(cell^2)).
    /// Off by default; support can otherwise grow exponentially with the
    /// number of combined classifiers.
    std::size_t quantize_cells = 0;
};

/// Snap a distribution onto the nodes of a uniform grid with `cells` cells on
/// [0.5, 1]. Each point splits its mass between its two neighboring nodes in
/// the mean-preserving proportions, so total mass and accuracy are unchanged.
inline ConfidenceDistribution quantize_to_grid(const ConfidenceDistribution& f,
                                               std::size_t cells) {
    if (cells < 2) throw DomainError("quantize_to_grid: needs at least 2 cells");
    const double h = 0.5 / static_cast<double>(cells);
    std::vector<double> node_mass(cells + 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double pos = (f.confidence(i) - 0.5) / h;
        auto lo = static_cast<std::size_t>(pos);
        if (lo >= cells) lo = cells - 1;
        const double frac = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
        node_mass[lo] += f.weight(i) * (1.0 - frac);
        node_mass[lo + 1] += f.weight(i) * frac;
    }
    DistributionBuilder b;
    b.reserve(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        b.add(0.5 + static_cast<double>(i) * h, node_mass[i]);
    }
    return std::move(b).build();
}

namespace detail {

/// Enumerate the joint outcomes of two independent calibrated classifiers
/// under locally weighted voting. For each support pair, agreement and
/// disagreement produce one combined confidence each; a certain member
/// (c = 1) forces combined confidence 1, and a c = 0.5 member carries zero
/// weight and leaves the other's confidence unchanged.
template <class Sink>
void enumerate_pair_outcomes(const ConfidenceDistribution& f1,
                             const ConfidenceDistribution& f2, Sink&& sink) {
    for (std::size_t i = 0; i < f1.size(); ++i) {
        const double c1 = f1.confidence(i);
        const double w1 = f1.weight(i);
        for (std::size_t j = 0; j < f2.size(); ++j) {
            const double c2 = f2.confidence(j);
            const double w = w1 * f2.weight(j);
            if (c1 == 1.0 || c2 == 1.0) {
                sink(1.0, w);
                continue;
            }
            if (c1 == 0.5) {
                sink(c2, w);
                continue;
            }
            if (c2 == 0.5) {
                sink(c1, w);
                continue;
            }
            const double agree = c1 * c2 + (1.0 - c1) * (1.0 - c2);
            sink(c1 * c2 / agree, w * agree);
            const double d1 = c1 * (1.0 - c2);
            const double d2 = (1.0 - c1) * c2;
            const double disagree = d1 + d2;
            sink(std::max(d1, d2) / disagree, w * disagree);
        }
    }
}

}  // namespace detail

/// The confidence distribution of the two-classifier ensemble formed by
/// locally weighted voting over independent members with distributions f1
/// and f2. Commutative; point mass at 0.5 is neutral, point mass at 1
/// absorbing.
inline ConfidenceDistribution combine_pair(const ConfidenceDistribution& f1,
                                           const ConfidenceDistribution& f2,
                                           const CombineOptions& opts = {}) {
    const std::size_t outcome_bound = 2 * f1.size() * f2.size();
    if (opts.quantize_cells > 0 && outcome_bound > opts.quantize_cells) {
        const std::size_t cells = opts.quantize_cells;
        const double h = 0.5 / static_cast<double>(cells);
        std::vector<double> node_mass(cells + 1, 0.0);
        detail::enumerate_pair_outcomes(f1, f2, [&](double c, double w) {
            const double pos = (std::clamp(c, 0.5, 1.0) - 0.5) / h;
            auto lo = static_cast<std::size_t>(pos);
            if (lo >= cells) lo = cells - 1;
            const double frac = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
            node_mass[lo] += w * (1.0 - frac);
            node_mass[lo + 1] += w * frac;
        });
        DistributionBuilder b;
        b.reserve(cells + 1);
        for (std::size_t i = 0; i <= cells; ++i) {
            b.add(0.5 + static_cast<double>(i) * h, node_mass[i]);
        }
        return std::move(b).build(opts.coalesce_tol);
    }

    DistributionBuilder b;
    b.reserve(outcome_bound);
    detail::enumerate_pair_outcomes(f1, f2,
                                    [&](double c, double w) { b.add(c, w); });
    return std::move(b).build(opts.coalesce_tol);
}

struct MemberSummary {
    double accuracy = 0.5;
    std::size_t support_size = 0;
};

/// Result of combining an ensemble: the ensemble's confidence distribution
/// together with the member count and per-member summaries.
struct EnsembleDistribution {
    ConfidenceDistribution dist;
    std::size_t k = 0;
    std::vector<MemberSummary> provenance;
};

/// Left fold of combine_pair over the members. Accuracy and information of
/// the result do not depend on the fold order (up to coalescing noise).
inline EnsembleDistribution combine_all(const std::vector<ConfidenceDistribution>& fs,
                                        const CombineOptions& opts = {}) {
    if (fs.empty()) throw EmptyEnsemble("no member distributions");
    std::vector<MemberSummary> provenance;
    provenance.reserve(fs.size());
    for (const auto& f : fs) provenance.push_back({accuracy(f), f.size()});

    ConfidenceDistribution acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) {
        acc = combine_pair(acc, fs[i], opts);
    }
    return {std::move(acc), fs.size(), std::move(provenance)};
}

inline double ensemble_accuracy(const std::vector<ConfidenceDistribution>& fs,
                                const CombineOptions& opts = {}) {
    return accuracy(combine_all(fs, opts).dist);
}

inline double ensemble_information(const std::vector<ConfidenceDistribution>& fs,
                                   const CombineOptions& opts = {}) {
    return information(combine_all(fs, opts).dist);
}

}  // namespace ensemble_bounds
