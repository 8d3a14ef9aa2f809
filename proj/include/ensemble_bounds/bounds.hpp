#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ensemble_bounds/canonical.hpp"
#include "ensemble_bounds/combine.hpp"
#include "ensemble_bounds/distribution.hpp"
#include "ensemble_bounds/errors.hpp"

namespace ensemble_bounds {

enum class Metric { accuracy, information };

inline const char* to_string(Metric m) {
    return m == Metric::accuracy ? "accuracy" : "information";
}

/// Guaranteed range of an ensemble metric, with the names of the extremal
/// constructions witnessing each end. When a tighter inner pair is reported
/// (profile-based bounds), outer_lower/outer_upper carry the generalist /
/// specialist values of the enclosing chain.
struct EnsembleBounds {
    Metric metric = Metric::accuracy;
    std::size_t k = 0;
    double lower = 0.0;
    double upper = 0.0;
    std::string lower_witness;
    std::string upper_witness;
    std::optional<double> outer_lower;
    std::optional<double> outer_upper;
};

namespace detail {

inline void check_accuracies(const std::vector<double>& pis) {
    if (pis.empty()) throw EmptyEnsemble("no member accuracies");
    for (double pi : pis) {
        if (!(pi >= 0.5 && pi <= 1.0)) {
            throw DomainError("accuracy " + std::to_string(pi) +
                              " outside [0.5, 1]");
        }
    }
}

template <class Build>
std::vector<ConfidenceDistribution> members(const std::vector<ClassifierProfile>& ps,
                                            Build&& build) {
    std::vector<ConfidenceDistribution> out;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back(build(p));
    return out;
}

}  // namespace detail

/// Range of ensemble accuracies consistent with knowing only the members'
/// accuracies: the generalist ensemble from below, the specialist ensemble
/// from above.
inline EnsembleBounds accuracy_bounds(const std::vector<double>& pis) {
    detail::check_accuracies(pis);
    std::vector<ConfidenceDistribution> lo, hi;
    lo.reserve(pis.size());
    hi.reserve(pis.size());
    for (double pi : pis) {
        lo.push_back(generalist(pi));
        hi.push_back(specialist(pi));
    }
    EnsembleBounds b;
    b.metric = Metric::accuracy;
    b.k = pis.size();
    b.lower = ensemble_accuracy(lo);
    b.upper = ensemble_accuracy(hi);
    b.lower_witness = "generalist";
    b.upper_witness = "specialist";
    return b;
}

/// Tighter range of ensemble accuracies when each member's information is
/// known too: less / more specialized constructions, nested inside the
/// accuracy-only bounds (reported via outer_lower/outer_upper).
inline EnsembleBounds accuracy_bounds(const std::vector<ClassifierProfile>& profiles) {
    if (profiles.empty()) throw EmptyEnsemble("no member profiles");
    for (const auto& p : profiles) p.validate();

    const auto lo = detail::members(
        profiles, [](const ClassifierProfile& p) {
            return less_specialized(p.accuracy, p.information);
        });
    const auto hi = detail::members(
        profiles, [](const ClassifierProfile& p) {
            return more_specialized(p.accuracy, p.information);
        });

    EnsembleBounds b;
    b.metric = Metric::accuracy;
    b.k = profiles.size();
    b.lower = ensemble_accuracy(lo);
    b.upper = ensemble_accuracy(hi);
    b.lower_witness = "less_specialized";
    b.upper_witness = "more_specialized";
    b.outer_lower = ensemble_accuracy(detail::members(
        profiles, [](const ClassifierProfile& p) { return generalist(p.accuracy); }));
    b.outer_upper = ensemble_accuracy(detail::members(
        profiles, [](const ClassifierProfile& p) { return specialist(p.accuracy); }));
    return b;
}

/// Admissible information interval of a single classifier with accuracy pi:
/// (generalist value, specialist value).
inline std::pair<double, double> individual_info_bounds(double pi) {
    if (!(pi >= 0.5 && pi <= 1.0)) {
        throw DomainError("accuracy " + std::to_string(pi) + " outside [0.5, 1]");
    }
    return {info_floor(pi), info_ceiling(pi)};
}

/// Range of ensemble information for members of known (accuracy,
/// information): less / more specialized ensembles inside, generalist /
/// specialist ensembles outside.
inline EnsembleBounds ensemble_info_bounds(const std::vector<ClassifierProfile>& profiles) {
    if (profiles.empty()) throw EmptyEnsemble("no member profiles");
    for (const auto& p : profiles) p.validate();

    EnsembleBounds b;
    b.metric = Metric::information;
    b.k = profiles.size();
    b.lower = ensemble_information(detail::members(
        profiles, [](const ClassifierProfile& p) {
            return less_specialized(p.accuracy, p.information);
        }));
    b.upper = ensemble_information(detail::members(
        profiles, [](const ClassifierProfile& p) {
            return more_specialized(p.accuracy, p.information);
        }));
    b.lower_witness = "less_specialized";
    b.upper_witness = "more_specialized";
    b.outer_lower = ensemble_information(detail::members(
        profiles, [](const ClassifierProfile& p) { return generalist(p.accuracy); }));
    b.outer_upper = ensemble_information(detail::members(
        profiles, [](const ClassifierProfile& p) { return specialist(p.accuracy); }));
    return b;
}

/// Range of ensemble information when only the members' information is
/// known. Each information value maps to the accuracy at which the
/// generalist carries exactly that information; generalists and specialists
/// built at those accuracies bound the ensemble information.
inline EnsembleBounds ensemble_info_bounds_info_only(const std::vector<double>& iotas) {
    if (iotas.empty()) throw EmptyEnsemble("no member informations");
    std::vector<ConfidenceDistribution> lo, hi;
    lo.reserve(iotas.size());
    hi.reserve(iotas.size());
    for (double iota : iotas) {
        if (!(iota >= 0.0 && iota <= 1.0)) {
            throw DomainError("information " + std::to_string(iota) +
                              " outside [0, 1]");
        }
        const double pi = inverse_binary_entropy_upper(1.0 - iota);
        lo.push_back(generalist(pi));
        hi.push_back(specialist(pi));
    }
    EnsembleBounds b;
    b.metric = Metric::information;
    b.k = iotas.size();
    b.lower = ensemble_information(lo);
    b.upper = ensemble_information(hi);
    b.lower_witness = "generalist";
    b.upper_witness = "specialist";
    return b;
}

/// Result of the minimal-ensemble-size search.
struct PlanResult {
    std::size_t k_min = 0;
    double target = 0.0;
    double achieved_lower_bound = 0.0;
    std::vector<ClassifierProfile> profile;  ///< k_min copies of the member profile
};

/// Smallest number of classifiers with profile (pi, iota) whose guaranteed
/// ensemble accuracy (the less-specialized lower bound — the worst case
/// consistent with the profile) reaches the target. Linear search in k,
/// folding one more member into the running ensemble each step. Throws
/// TargetUnreachable when even k_max members do not guarantee the target.
inline PlanResult min_ensemble_size(double pi, double iota, double target,
                                    std::size_t k_max = 50) {
    ClassifierProfile profile{pi, iota};
    profile.validate();
    if (!(target > 0.5 && target < 1.0)) {
        throw DomainError("target accuracy " + std::to_string(target) +
                          " outside (0.5, 1)");
    }
    if (k_max < 1) throw DomainError("k_max must be at least 1");

    const ConfidenceDistribution member = less_specialized(pi, iota);
    ConfidenceDistribution running = member;
    std::size_t k = 1;
    double bound = accuracy(running);
    while (bound < target && k < k_max) {
        running = combine_pair(running, member);
        ++k;
        bound = accuracy(running);
    }
    if (bound < target) throw TargetUnreachable(k_max, bound, target);
    return {k, target, bound, std::vector<ClassifierProfile>(k, profile)};
}

}  // namespace ensemble_bounds
