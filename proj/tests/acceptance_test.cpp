// Acceptance suite: runs every sign-off criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ensemble_bounds/ensemble_bounds.hpp"
#include "support/oracles.hpp"

using namespace ensemble_bounds;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string& message) {
        if (!cond && pass) {
            pass = false;
            detail = message;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria;

    criteria.emplace_back(
        "accuracy-only bounds golden values (k=3, pi=0.7), <1ms",
        [](Outcome& o) {
            accuracy_bounds(std::vector<double>{0.7, 0.7, 0.7});  // warm-up
            const auto t0 = std::chrono::steady_clock::now();
            const auto b = accuracy_bounds(std::vector<double>{0.7, 0.7, 0.7});
            const double dt = seconds_since(t0);
            const double lower_exact = 0.7 * 0.7 * 0.7 + 3 * 0.7 * 0.7 * 0.3;
            const double upper_exact = lower_exact + (1 - lower_exact) * 0.5;
            o.require(std::abs(b.lower - lower_exact) <= 1e-9,
                      "lower " + fmt(b.lower) + " != " + fmt(lower_exact));
            o.require(std::abs(b.upper - upper_exact) <= 1e-9,
                      "upper " + fmt(b.upper) + " != " + fmt(upper_exact));
            o.require(std::abs(b.lower - 0.784) <= 1e-9, "lower != 0.784");
            o.require(std::abs(b.upper - 0.892) <= 1e-9, "upper != 0.892");
            o.require(dt < 1e-3, "runtime " + fmt(dt) + "s >= 1ms");
        });

    criteria.emplace_back(
        "individual information interval golden values (pi=0.7)",
        [](Outcome& o) {
            const auto [lo, hi] = individual_info_bounds(0.7);
            const double lo_exact = 1.0 - binary_entropy(0.7);
            o.require(std::abs(lo - lo_exact) <= 1e-9,
                      "floor " + fmt(lo) + " != " + fmt(lo_exact));
            o.require(std::abs(hi - 0.4) <= 1e-9, "ceiling " + fmt(hi) + " != 0.4");
            o.require(std::abs(lo - 0.12) <= 0.005, "floor does not round to 0.12");
        });

    criteria.emplace_back(
        "profile bounds golden values (0.7,0.36)->0.85..0.89, (0.7,0.15)->0.78..0.84, <1s",
        [](Outcome& o) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto hi_info =
                accuracy_bounds(std::vector<ClassifierProfile>(3, {0.7, 0.36}));
            const auto lo_info =
                accuracy_bounds(std::vector<ClassifierProfile>(3, {0.7, 0.15}));
            const double dt = seconds_since(t0);
            o.require(std::abs(hi_info.lower - 0.85) <= 0.01,
                      "lower " + fmt(hi_info.lower) + " not within 0.01 of 0.85");
            o.require(std::abs(hi_info.upper - 0.89) <= 0.01,
                      "upper " + fmt(hi_info.upper) + " not within 0.01 of 0.89");
            o.require(std::abs(lo_info.lower - 0.78) <= 0.01,
                      "lower " + fmt(lo_info.lower) + " not within 0.01 of 0.78");
            o.require(std::abs(lo_info.upper - 0.84) <= 0.01,
                      "upper " + fmt(lo_info.upper) + " not within 0.01 of 0.84");
            o.require(dt < 1.0, "runtime " + fmt(dt) + "s >= 1s");
        });

    criteria.emplace_back(
        "planner golden sizes: (0.7,0.36,0.95)->7 and (0.7,0.26,0.95)->13, <5s",
        [](Outcome& o) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto high = min_ensemble_size(0.7, 0.36, 0.95, 50);
            const auto low = min_ensemble_size(0.7, 0.26, 0.95, 50);
            const double dt = seconds_since(t0);
            o.require(high.k_min == 7, "k_min " + std::to_string(high.k_min) + " != 7");
            o.require(low.k_min == 13, "k_min " + std::to_string(low.k_min) + " != 13");
            o.require(dt < 5.0, "runtime " + fmt(dt) + "s >= 5s");
        });

    criteria.emplace_back(
        "noise-model pipeline: member 0.700+-0.001, k=3 ensemble 0.82+-0.01 inside (0.784, 0.892)",
        [](Outcome& o) {
            const auto model = NoiseModel::for_accuracy(0.7, 2.1);
            const auto f = gaussian_confidence_distribution(model, 512);
            o.require(std::abs(accuracy(f) - 0.700) <= 0.001,
                      "member accuracy " + fmt(accuracy(f)));
            CombineOptions opts;
            opts.quantize_cells = 4096;
            const double acc = ensemble_accuracy({f, f, f}, opts);
            o.require(std::abs(acc - 0.82) <= 0.01,
                      "ensemble accuracy " + fmt(acc) + " not within 0.01 of 0.82");
            o.require(acc > 0.784 && acc < 0.892,
                      "ensemble accuracy " + fmt(acc) + " not strictly inside bounds");
        });

    criteria.emplace_back(
        "pair combination matches brute-force enumeration (200 pairs, 1e-12 / 1e-9)",
        [](Outcome& o) {
            std::mt19937_64 rng(1009);
            for (int i = 0; i < 200; ++i) {
                const auto f1 = oracles::random_distribution(rng, 6);
                const auto f2 = oracles::random_distribution(rng, 6);
                const auto direct = combine_pair(f1, f2);
                const double dev =
                    oracles::max_deviation(oracles::joint_enumeration_combine(f1, f2),
                                           direct);
                o.require(dev <= 1e-12, "enumeration deviation " + fmt(dev));
                const double acc_dev =
                    std::abs(accuracy(direct) - oracles::pair_accuracy(f1, f2));
                o.require(acc_dev <= 1e-9, "max-form accuracy deviation " + fmt(acc_dev));
            }
        });

    criteria.emplace_back(
        "sandwich suites: accuracy, five-term chain, information chains, <60s",
        [](Outcome& o) {
            const auto t0 = std::chrono::steady_clock::now();
            std::mt19937_64 rng(1013);

            // accuracy-only sandwich over 500 random ensembles, k <= 5
            for (int i = 0; i < 500; ++i) {
                const int k = 1 + static_cast<int>(rng() % 5);
                std::vector<ConfidenceDistribution> fs, gens, specs;
                for (int j = 0; j < k; ++j) {
                    fs.push_back(oracles::random_distribution(rng, 4));
                    const double pi = accuracy(fs.back());
                    gens.push_back(generalist(pi));
                    specs.push_back(specialist(pi));
                }
                const double mid = ensemble_accuracy(fs);
                o.require(ensemble_accuracy(gens) <= mid + 1e-9,
                          "lower accuracy sandwich violated");
                o.require(mid <= ensemble_accuracy(specs) + 1e-9,
                          "upper accuracy sandwich violated");
            }

            // five-term accuracy chain and information chain over a dense sweep
            for (double pi : {0.55, 0.6, 0.7, 0.8, 0.9}) {
                for (double fr : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    const double iota = iota_from_fraction(pi, fr);
                    std::vector<ConfidenceDistribution> mids;
                    mids.push_back(oracles::mixture_with_profile(pi, iota));
                    if (auto f3 = oracles::random_with_profile(rng, pi, iota)) {
                        mids.push_back(*f3);
                    }
                    const auto gen = generalist(pi);
                    const auto less = less_specialized(pi, iota);
                    const auto more = more_specialized(pi, iota);
                    const auto spec = specialist(pi);
                    for (std::size_t k = 1; k <= 5; ++k) {
                        using Dists = std::vector<ConfidenceDistribution>;
                        const double a_gen = ensemble_accuracy(Dists(k, gen));
                        const double a_less = ensemble_accuracy(Dists(k, less));
                        const double a_more = ensemble_accuracy(Dists(k, more));
                        const double a_spec = ensemble_accuracy(Dists(k, spec));
                        o.require(a_gen <= a_less + 1e-9, "chain: gen > less");
                        o.require(a_less <= a_more + 1e-9, "chain: less > more");
                        o.require(a_more <= a_spec + 1e-9, "chain: more > spec");
                        const double i_gen = ensemble_information(Dists(k, gen));
                        const double i_less = ensemble_information(Dists(k, less));
                        const double i_more = ensemble_information(Dists(k, more));
                        const double i_spec = ensemble_information(Dists(k, spec));
                        o.require(i_gen <= i_less + 1e-9, "info chain: gen > less");
                        o.require(i_less <= i_more + 1e-9, "info chain: less > more");
                        o.require(i_more <= i_spec + 1e-9, "info chain: more > spec");
                        for (const auto& f : mids) {
                            const double mid_acc = ensemble_accuracy(Dists(k, f));
                            o.require(a_less <= mid_acc + 1e-9,
                                      "chain: less > member ensemble");
                            o.require(mid_acc <= a_more + 1e-9,
                                      "chain: member ensemble > more");
                            const double mid_info = ensemble_information(Dists(k, f));
                            o.require(i_less <= mid_info + 1e-9,
                                      "info chain: less > member ensemble");
                            o.require(mid_info <= i_more + 1e-9,
                                      "info chain: member ensemble > more");
                        }
                    }
                }
            }

            // information bounds from information alone
            for (int i = 0; i < 100; ++i) {
                const int k = 1 + static_cast<int>(rng() % 4);
                std::vector<ConfidenceDistribution> fs;
                std::vector<double> iotas;
                for (int j = 0; j < k; ++j) {
                    fs.push_back(oracles::random_distribution(rng, 4));
                    iotas.push_back(information(fs.back()));
                }
                const auto b = ensemble_info_bounds_info_only(iotas);
                const double mid = ensemble_information(fs);
                o.require(b.lower <= mid + 1e-9, "info-only lower bound violated");
                o.require(mid <= b.upper + 1e-9, "info-only upper bound violated");
            }

            const double dt = seconds_since(t0);
            o.require(dt < 60.0, "runtime " + fmt(dt) + "s >= 60s");
        });

    criteria.emplace_back(
        "refinement suite: 1000 merges preserve accuracy, convex scores never rise",
        [](Outcome& o) {
            std::mt19937_64 rng(1019);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const auto info_gain = scoring::information_gain();
            int performed = 0;
            while (performed < 1000) {
                const auto f = oracles::random_distribution(rng);
                if (f.size() < 2) continue;
                const std::size_t i1 = rng() % f.size();
                std::size_t i2 = rng() % f.size();
                if (i1 == i2) i2 = (i2 + 1) % f.size();
                const double eps1 = unit(rng) * f.weight(i1);
                const double eps2 = unit(rng) * f.weight(i2);
                if (eps1 + eps2 == 0.0) continue;
                ++performed;
                const auto merged =
                    merge_step(f, f.confidence(i1), f.confidence(i2), eps1, eps2);
                o.require(std::abs(accuracy(merged) - accuracy(f)) <= 1e-12,
                          "merge changed accuracy");
                o.require(score(merged, info_gain) <= score(f, info_gain) + 1e-12,
                          "merge raised a convex score");
                o.require(std::abs(score(merged, scoring::identity()) -
                                   score(f, scoring::identity())) <= 1e-12,
                          "merge changed the identity score");
                const double pi = accuracy(f);
                o.require(score(generalist(pi), info_gain) <=
                              score(f, info_gain) + 1e-12,
                          "generalist not minimal");
                o.require(score(f, info_gain) <=
                              score(specialist(pi), info_gain) + 1e-12,
                          "specialist not maximal");
            }
        });

    criteria.emplace_back(
        "Monte Carlo agreement: 1e6-trial runs within 4 standard errors, <30s",
        [](Outcome& o) {
            const auto t0 = std::chrono::steady_clock::now();
            std::mt19937_64 rng(1021);
            for (int i = 0; i < 10; ++i) {
                const int k = 1 + static_cast<int>(rng() % 4);
                std::vector<ConfidenceDistribution> fs;
                for (int j = 0; j < k; ++j) {
                    fs.push_back(oracles::random_distribution(rng, 4));
                }
                const double analytic = ensemble_accuracy(fs);
                const auto rep = mc_estimate(fs, 1000000, 4242 + i, VoteMode::lcwmv);
                const double dev = std::abs(rep.acc_hat - analytic);
                const double band = 4.0 * std::max(rep.std_err, 1e-6);
                o.require(dev <= band, "ensemble " + std::to_string(i) +
                                           " deviates " + fmt(dev) + " > " + fmt(band));
            }
            const std::vector<ConfidenceDistribution> specs(3, specialist(0.7));
            const auto local = mc_estimate(specs, 1000000, 77, VoteMode::lcwmv);
            const auto global = mc_estimate(specs, 1000000, 77, VoteMode::cwmv);
            o.require(std::abs(local.acc_hat - 0.892) <= 4 * local.std_err,
                      "local-vote benchmark off target 0.892");
            o.require(std::abs(global.acc_hat - 0.784) <= 4 * global.std_err,
                      "global-vote benchmark off target 0.784");
            o.require(local.acc_hat >= global.acc_hat,
                      "local weighting did not beat global weighting");
            const double dt = seconds_since(t0);
            o.require(dt < 30.0, "runtime " + fmt(dt) + "s >= 30s");
        });

    criteria.emplace_back(
        "combination monoid laws over 200 random triples",
        [](Outcome& o) {
            std::mt19937_64 rng(1031);
            const auto neutral = point_mass(0.5);
            const auto absorbing = point_mass(1.0);
            for (int i = 0; i < 200; ++i) {
                const auto f1 = oracles::random_distribution(rng, 4);
                const auto f2 = oracles::random_distribution(rng, 4);
                const auto f3 = oracles::random_distribution(rng, 4);
                o.require(combine_pair(f1, f2) == combine_pair(f2, f1),
                          "commutativity not exact");
                const auto left = combine_pair(combine_pair(f1, f2), f3);
                const auto right = combine_pair(f1, combine_pair(f2, f3));
                o.require(std::abs(accuracy(left) - accuracy(right)) <= 1e-9,
                          "associativity drift in accuracy");
                o.require(std::abs(information(left) - information(right)) <= 1e-9,
                          "associativity drift in information");
                const auto with_neutral = combine_pair(f1, neutral);
                bool neutral_ok = with_neutral.size() == f1.size();
                for (std::size_t j = 0; neutral_ok && j < f1.size(); ++j) {
                    neutral_ok =
                        std::abs(with_neutral.confidence(j) - f1.confidence(j)) <=
                            1e-12 &&
                        std::abs(with_neutral.weight(j) - f1.weight(j)) <= 1e-12;
                }
                o.require(neutral_ok, "coin-flip member is not neutral");
                o.require(accuracy(combine_pair(f1, absorbing)) == 1.0,
                          "certain member is not absorbing");
            }
        });

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        criteria[i].second(o);
        const double dt = seconds_since(t0);
        if (o.pass) {
            std::printf("[PASS] criterion %zu: %s (%.2fs)\n", i + 1,
                        criteria[i].first.c_str(), dt);
        } else {
            ++failures;
            std::printf("[FAIL] criterion %zu: %s — %s (%.2fs)\n", i + 1,
                        criteria[i].first.c_str(), o.detail.c_str(), dt);
        }
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
