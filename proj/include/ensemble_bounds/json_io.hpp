#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ensemble_bounds/bounds.hpp"
#include "ensemble_bounds/distribution.hpp"
#include "ensemble_bounds/errors.hpp"
#include "ensemble_bounds/simulate.hpp"

namespace ensemble_bounds {

/// Interchange schema: {"points": [{"c": <float>, "w": <float>}, ...]},
/// points sorted by confidence.
inline nlohmann::json to_json(const ConfidenceDistribution& f) {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        points.push_back({{"c", f.confidence(i)}, {"w", f.weight(i)}});
    }
    return {{"points", points}};
}

inline ConfidenceDistribution distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
        throw DomainError("distribution JSON must be {\"points\": [...]} ");
    }
    std::vector<WeightedConfidence> pts;
    pts.reserve(j["points"].size());
    for (const auto& p : j["points"]) {
        if (!p.is_object() || !p.contains("c") || !p.contains("w") ||
            !p["c"].is_number() || !p["w"].is_number()) {
            throw DomainError("distribution point must be {\"c\": number, \"w\": number}");
        }
        pts.push_back({p["c"].get<double>(), p["w"].get<double>()});
    }
    return make_distribution(std::move(pts));
}

inline nlohmann::json to_json(const EnsembleBounds& b) {
    nlohmann::json witnesses = {{"lower", b.lower_witness},
                                {"upper", b.upper_witness}};
    if (b.outer_lower) {
        witnesses["outer_lower"] = "generalist";
        witnesses["outer_lower_value"] = *b.outer_lower;
    }
    if (b.outer_upper) {
        witnesses["outer_upper"] = "specialist";
        witnesses["outer_upper_value"] = *b.outer_upper;
    }
    return {{"metric", to_string(b.metric)},
            {"k", b.k},
            {"lower", b.lower},
            {"upper", b.upper},
            {"witnesses", witnesses}};
}

inline nlohmann::json to_json(const PlanResult& r) {
    nlohmann::json profile = nlohmann::json::array();
    for (const auto& p : r.profile) {
        profile.push_back({{"pi", p.accuracy}, {"iota", p.information}});
    }
    return {{"k_min", r.k_min},
            {"target", r.target},
            {"achieved_lower_bound", r.achieved_lower_bound},
            {"profile", profile}};
}

inline nlohmann::json to_json(const SimReport& r) {
    return {{"trials", r.trials},
            {"acc_hat", r.acc_hat},
            {"info_hat", r.info_hat},
            {"std_err", r.std_err},
            {"seed", r.seed},
            {"mode", to_string(r.mode)}};
}

}  // namespace ensemble_bounds
