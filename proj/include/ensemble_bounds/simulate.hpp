#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ensemble_bounds/combine.hpp"
#include "ensemble_bounds/distribution.hpp"
#include "ensemble_bounds/entropy.hpp"
#include "ensemble_bounds/errors.hpp"
#include "ensemble_bounds/rng.hpp"

namespace ensemble_bounds {

namespace detail {

inline double normal_pdf(double x) {
    constexpr double kInvSqrt2Pi = 0.3989422804014327;
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    constexpr double kInvSqrt2 = 0.7071067811865476;
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

/// Standard normal quantile by bisection (monotone, ~60 iterations).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal_quantile: probability " + std::to_string(p) +
                          " outside (0, 1)");
    }
    double lo = -12.0, hi = 12.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Mean contribution of N(m, sigma^2) restricted to [a, b]:
/// integral of t * pdf over the interval. b may be +infinity.
inline double normal_partial_mean(double m, double sigma, double a, double b) {
    const double alpha = (a - m) / sigma;
    const double cdf_b = std::isinf(b) ? 1.0 : normal_cdf((b - m) / sigma);
    const double pdf_b = std::isinf(b) ? 0.0 : normal_pdf((b - m) / sigma);
    return m * (cdf_b - normal_cdf(alpha)) + sigma * (normal_pdf(alpha) - pdf_b);
}

}  // namespace detail

/// Binary classification channel with class-conditional observations
/// N(+mu, sigma^2) and N(-mu, sigma^2) under equal class priors. The Bayes
/// classifier predicts by the sign of the observation; its local confidence
/// is the posterior of the predicted class.
struct NoiseModel {
    double mu = 1.0;     ///< magnitude of the class means
    double sigma = 1.0;  ///< noise standard deviation, > 0

    /// Overall accuracy of the induced classifier.
    double accuracy() const { return detail::normal_cdf(mu / sigma); }

    /// Local confidence produced by observation x.
    double confidence_at(double x) const {
        return logistic(2.0 * mu * std::abs(x) / (sigma * sigma));
    }

    /// Marginal observation density (mixture of both classes).
    double density_at(double x) const {
        return 0.5 / sigma *
               (detail::normal_pdf((x - mu) / sigma) +
                detail::normal_pdf((x + mu) / sigma));
    }

    /// Model whose induced classifier has the requested overall accuracy.
    static NoiseModel for_accuracy(double target_accuracy, double sigma) {
        if (!(target_accuracy >= 0.5 && target_accuracy < 1.0)) {
            throw DomainError("target accuracy " + std::to_string(target_accuracy) +
                              " outside [0.5, 1)");
        }
        if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
        if (target_accuracy == 0.5) return {0.0, sigma};
        return {sigma * detail::normal_quantile(target_accuracy), sigma};
    }
};

/// Discretize the confidence distribution induced by a noise model onto
/// `cells` equal-mass cells of |X| (quantile grid), mapping each cell to the
/// confidence at its conditional mean. The discretized accuracy converges to
/// the model accuracy as cells grows.
inline ConfidenceDistribution gaussian_confidence_distribution(const NoiseModel& model,
                                                               std::size_t cells) {
    if (!(model.sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(model.mu >= 0.0)) throw DomainError("mu must be nonnegative");
    if (cells < 16) throw DomainError("need at least 16 grid cells");

    const double mu = model.mu;
    const double sigma = model.sigma;
    // |X| has density pdf_{+mu}(t) + pdf_{-mu}(t) for t >= 0.
    auto folded_cdf = [&](double t) {
        return detail::normal_cdf((t - mu) / sigma) +
               detail::normal_cdf((t + mu) / sigma) - 1.0;
    };

    const double t_hi = mu + 15.0 * sigma;
    std::vector<double> edges(cells + 1);
    edges[0] = 0.0;
    edges[cells] = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < cells; ++i) {
        const double q = static_cast<double>(i) / static_cast<double>(cells);
        double lo = 0.0, hi = t_hi;
        while (hi - lo > 1e-12 * t_hi) {
            const double mid = 0.5 * (lo + hi);
            (folded_cdf(mid) < q ? lo : hi) = mid;
        }
        edges[i] = 0.5 * (lo + hi);
    }

    const double cell_mass = 1.0 / static_cast<double>(cells);
    DistributionBuilder b;
    b.reserve(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double mean_mass =
            detail::normal_partial_mean(mu, sigma, edges[i], edges[i + 1]) +
            detail::normal_partial_mean(-mu, sigma, edges[i], edges[i + 1]);
        const double cell_mean = mean_mass / cell_mass;
        b.add(model.confidence_at(cell_mean), cell_mass);
    }
    return std::move(b).build();
}

enum class VoteMode { cwmv, lcwmv };

inline const char* to_string(VoteMode m) {
    return m == VoteMode::cwmv ? "cwmv" : "lcwmv";
}

struct MemberVote {
    int prediction = 1;  ///< +1 or -1
    double confidence = 0.5;
};

struct VoteResult {
    int prediction = 1;
    double confidence = 0.5;
};

/// Weighted sign vote with per-prediction local weights log(c/(1-c)).
/// A member with confidence 1 forces its prediction at confidence 1. A zero
/// weight sum is a tie: the prediction comes from the caller's coin (a
/// callable returning a bool) and the confidence is 0.5.
template <class Coin>
VoteResult lcwmv_vote(std::span<const MemberVote> votes, Coin&& coin) {
    if (votes.empty()) throw DomainError("lcwmv_vote: no votes");
    int forced = 0;  // 0 none, +-1 forced prediction, 2 conflicting certainties
    double s = 0.0;
    for (const auto& v : votes) {
        if (v.prediction != 1 && v.prediction != -1) {
            throw DomainError("prediction must be +1 or -1");
        }
        if (!(v.confidence >= 0.5 && v.confidence <= 1.0)) {
            throw DomainError("confidence " + std::to_string(v.confidence) +
                              " outside [0.5, 1]");
        }
        if (v.confidence == 1.0) {
            if (forced == 0) {
                forced = v.prediction;
            } else if (forced != v.prediction) {
                forced = 2;  // cannot happen for calibrated members
            }
        } else {
            s += static_cast<double>(v.prediction) * logit(v.confidence);
        }
    }
    if (forced == 1 || forced == -1) return {forced, 1.0};
    if (forced == 2 || s == 0.0) return {coin() ? 1 : -1, 0.5};
    return {s > 0.0 ? 1 : -1, logistic(std::abs(s))};
}

/// Weighted sign vote with global weights log(pi/(1-pi)) from the members'
/// overall accuracies. Same certainty and tie conventions as lcwmv_vote.
template <class Coin>
VoteResult cwmv_vote(std::span<const int> predictions,
                     std::span<const double> accuracies, Coin&& coin) {
    if (predictions.empty()) throw DomainError("cwmv_vote: no votes");
    if (predictions.size() != accuracies.size()) {
        throw DomainError("cwmv_vote: predictions and accuracies differ in length");
    }
    std::vector<MemberVote> votes(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!(accuracies[i] >= 0.5 && accuracies[i] <= 1.0)) {
            throw DomainError("accuracy " + std::to_string(accuracies[i]) +
                              " outside [0.5, 1]");
        }
        votes[i] = {predictions[i], accuracies[i]};
    }
    return lcwmv_vote(std::span<const MemberVote>(votes), coin);
}

/// Monte Carlo estimate of ensemble accuracy and information.
struct SimReport {
    std::size_t trials = 0;
    double acc_hat = 0.0;
    double info_hat = 0.0;
    double std_err = 0.0;
    std::uint64_t seed = 0;
    VoteMode mode = VoteMode::lcwmv;
};

/// Histogram cell over the realized ensemble confidence, for calibration
/// checks: trial count, correct count, sum of confidences, sum of c(1-c).
struct ConfidenceBin {
    std::uint64_t count = 0;
    std::uint64_t correct = 0;
    double conf_sum = 0.0;
    double var_sum = 0.0;
};

struct SimDetail {
    SimReport report;
    std::vector<ConfidenceBin> bins;  ///< equal-width over [0.5, 1]
};

namespace detail {

struct SimMember {
    std::vector<double> cum;   // cumulative masses, back() == total
    std::vector<double> conf;
    double global_accuracy;
};

struct SimChunk {
    std::uint64_t correct = 0;
    std::vector<ConfidenceBin> bins;
};

inline void merge_chunks(SimChunk& into, const SimChunk& from) {
    into.correct += from.correct;
    for (std::size_t i = 0; i < into.bins.size(); ++i) {
        into.bins[i].count += from.bins[i].count;
        into.bins[i].correct += from.bins[i].correct;
        into.bins[i].conf_sum += from.bins[i].conf_sum;
        into.bins[i].var_sum += from.bins[i].var_sum;
    }
}

inline constexpr std::size_t kSimBins = 1024;
inline constexpr std::size_t kChunkTrials = 1 << 16;

inline SimChunk run_sim_chunk(const std::vector<SimMember>& members,
                              std::uint64_t seed, VoteMode mode,
                              std::size_t first_trial, std::size_t count) {
    SimChunk chunk;
    chunk.bins.resize(kSimBins);
    std::vector<MemberVote> votes(members.size());
    std::vector<int> preds(members.size());
    std::vector<double> accs(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) {
        accs[m] = members[m].global_accuracy;
    }

    for (std::size_t t = 0; t < count; ++t) {
        TrialRng rng(seed, first_trial + t);
        const int y = rng.next_unit() < 0.5 ? 1 : -1;
        for (std::size_t m = 0; m < members.size(); ++m) {
            const auto& mem = members[m];
            const double u = rng.next_unit() * mem.cum.back();
            const auto it = std::upper_bound(mem.cum.begin(), mem.cum.end(), u);
            const std::size_t idx = std::min<std::size_t>(
                static_cast<std::size_t>(it - mem.cum.begin()), mem.conf.size() - 1);
            const double c = mem.conf[idx];
            const bool member_correct = rng.next_unit() < c;
            const int pred = member_correct ? y : -y;
            votes[m] = {pred, c};
            preds[m] = pred;
        }
        auto coin = [&rng]() { return rng.next_unit() < 0.5; };
        const VoteResult r =
            mode == VoteMode::lcwmv
                ? lcwmv_vote(std::span<const MemberVote>(votes), coin)
                : cwmv_vote(std::span<const int>(preds),
                            std::span<const double>(accs), coin);

        const bool correct = r.prediction == y;
        chunk.correct += correct ? 1 : 0;
        auto bin = static_cast<std::size_t>((r.confidence - 0.5) * 2.0 *
                                            static_cast<double>(kSimBins));
        if (bin >= kSimBins) bin = kSimBins - 1;
        chunk.bins[bin].count += 1;
        chunk.bins[bin].correct += correct ? 1 : 0;
        chunk.bins[bin].conf_sum += r.confidence;
        chunk.bins[bin].var_sum += r.confidence * (1.0 - r.confidence);
    }
    return chunk;
}

}  // namespace detail

/// Run `trials` seeded Monte Carlo voting trials over independent members
/// with the given confidence distributions and return the estimate together
/// with the confidence histogram.
///
/// Each trial draws a label, one confidence per member from its
/// distribution, and a correct prediction with exactly that probability,
/// then votes in the requested mode. Trials use counter-based random streams
/// keyed by (seed, trial index) and are aggregated chunk-wise with a fixed
/// pairwise reduction, so the result is bit-identical for any thread count.
inline SimDetail mc_estimate_detailed(const std::vector<ConfidenceDistribution>& fs,
                                      std::size_t trials, std::uint64_t seed,
                                      VoteMode mode, std::size_t threads = 0) {
    if (fs.empty()) throw EmptyEnsemble("no member distributions");
    if (trials < 1) throw DomainError("trials must be at least 1");

    std::vector<detail::SimMember> members;
    members.reserve(fs.size());
    for (const auto& f : fs) {
        detail::SimMember m;
        m.conf = f.confidences();
        m.cum.resize(f.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            acc += f.weight(i);
            m.cum[i] = acc;
        }
        m.global_accuracy = accuracy(f);
        members.push_back(std::move(m));
    }

    const std::size_t nchunks =
        (trials + detail::kChunkTrials - 1) / detail::kChunkTrials;
    std::vector<detail::SimChunk> chunks(nchunks);

    std::size_t nthreads = threads;
    if (nthreads == 0) {
        nthreads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    nthreads = std::min(nthreads, nchunks);

    auto run_range = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t ci = begin; ci < nchunks; ci += stride) {
            const std::size_t first = ci * detail::kChunkTrials;
            const std::size_t count = std::min(detail::kChunkTrials, trials - first);
            chunks[ci] = detail::run_sim_chunk(members, seed, mode, first, count);
        }
    };
    if (nthreads <= 1) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::size_t w = 0; w < nthreads; ++w) {
            pool.emplace_back(run_range, w, nthreads);
        }
        for (auto& th : pool) th.join();
    }

    // Pairwise reduction in fixed chunk order.
    for (std::size_t width = 1; width < nchunks; width *= 2) {
        for (std::size_t i = 0; i + width < nchunks; i += 2 * width) {
            detail::merge_chunks(chunks[i], chunks[i + width]);
        }
    }
    const detail::SimChunk& total = chunks[0];

    SimDetail out;
    out.bins = total.bins;
    out.report.trials = trials;
    out.report.seed = seed;
    out.report.mode = mode;
    out.report.acc_hat =
        static_cast<double>(total.correct) / static_cast<double>(trials);
    out.report.std_err = std::sqrt(out.report.acc_hat * (1.0 - out.report.acc_hat) /
                                   static_cast<double>(trials));
    double info = 0.0;
    for (const auto& bin : total.bins) {
        if (bin.count == 0) continue;
        const double mean_conf = bin.conf_sum / static_cast<double>(bin.count);
        info += (static_cast<double>(bin.count) / static_cast<double>(trials)) *
                (1.0 - binary_entropy(std::clamp(mean_conf, 0.5, 1.0)));
    }
    out.report.info_hat = info;
    return out;
}

inline SimReport mc_estimate(const std::vector<ConfidenceDistribution>& fs,
                             std::size_t trials, std::uint64_t seed, VoteMode mode,
                             std::size_t threads = 0) {
    return mc_estimate_detailed(fs, trials, seed, mode, threads).report;
}

}  // namespace ensemble_bounds
