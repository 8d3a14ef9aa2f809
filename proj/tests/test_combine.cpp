#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "ensemble_bounds/canonical.hpp"
#include "ensemble_bounds/combine.hpp"
#include "support/oracles.hpp"

using namespace ensemble_bounds;
using Catch::Approx;

TEST_CASE("pairwise combination of twin generalists") {
    const auto e = combine_pair(generalist(0.7), generalist(0.7));
    REQUIRE(e.size() == 2);
    CHECK(e.confidence(0) == Approx(0.5).margin(1e-15));
    CHECK(e.weight(0) == Approx(0.42).margin(1e-12));
    CHECK(e.confidence(1) == Approx(0.49 / 0.58).margin(1e-12));
    CHECK(e.weight(1) == Approx(0.58).margin(1e-12));
    CHECK(accuracy(e) == Approx(0.7).margin(1e-12));
}

TEST_CASE("pairwise combination of twin specialists") {
    const auto e = combine_pair(specialist(0.7), specialist(0.7));
    REQUIRE(e.size() == 2);
    CHECK(e.confidence(0) == 0.5);
    CHECK(e.weight(0) == Approx(0.36).margin(1e-12));
    CHECK(e.confidence(1) == 1.0);
    CHECK(e.weight(1) == Approx(0.4 + 0.4 - 0.16).margin(1e-12));
}

TEST_CASE("coin-flip member is neutral") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 100; ++i) {
        const auto f = oracles::random_distribution(rng);
        const auto e = combine_pair(f, point_mass(0.5));
        REQUIRE(e.size() == f.size());
        for (std::size_t j = 0; j < f.size(); ++j) {
            REQUIRE(e.confidence(j) == Approx(f.confidence(j)).margin(1e-12));
            REQUIRE(e.weight(j) == Approx(f.weight(j)).margin(1e-12));
        }
    }
}

TEST_CASE("folding an ensemble") {
    SECTION("three specialists") {
        const std::vector<ConfidenceDistribution> fs(3, specialist(0.7));
        const auto e = combine_all(fs);
        CHECK(e.k == 3);
        REQUIRE(e.provenance.size() == 3);
        CHECK(e.provenance[0].accuracy == Approx(0.7).margin(1e-12));
        CHECK(e.provenance[0].support_size == 2);
        CHECK(accuracy(e.dist) == Approx(0.892).margin(1e-9));
    }
    SECTION("three generalists") {
        const std::vector<ConfidenceDistribution> fs(3, generalist(0.7));
        CHECK(ensemble_accuracy(fs) == Approx(0.784).margin(1e-9));
    }
    SECTION("perfect member absorbs") {
        std::mt19937_64 rng(67);
        const auto e =
            ensemble_accuracy({point_mass(1.0), oracles::random_distribution(rng)});
        CHECK(e == 1.0);
    }
    SECTION("empty ensemble is rejected") {
        CHECK_THROWS_AS(combine_all({}), EmptyEnsemble);
        CHECK_THROWS_AS(ensemble_accuracy({}), EmptyEnsemble);
    }
}

TEST_CASE("tied pair adds nothing; even additions plateau") {
    CHECK(ensemble_accuracy({generalist(0.7), generalist(0.7)}) ==
          Approx(0.7).margin(1e-12));

    // equal-weight vote oracle over member counts
    for (int k = 1; k <= 8; ++k) {
        const std::vector<ConfidenceDistribution> fs(k, generalist(0.7));
        REQUIRE(ensemble_accuracy(fs) ==
                Approx(oracles::equal_vote_majority_accuracy(0.7, k)).margin(1e-9));
    }
    CHECK(ensemble_accuracy(std::vector<ConfidenceDistribution>(4, generalist(0.7))) ==
          Approx(0.784).margin(1e-9));
}

TEST_CASE("combination agrees with the brute-force joint enumeration") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 200; ++i) {
        const auto f1 = oracles::random_distribution(rng, 6);
        const auto f2 = oracles::random_distribution(rng, 6);
        const auto direct = combine_pair(f1, f2);
        const auto oracle = oracles::joint_enumeration_combine(f1, f2);
        REQUIRE(oracles::max_deviation(oracle, direct) <= 1e-12);
        REQUIRE(accuracy(direct) ==
                Approx(oracles::pair_accuracy(f1, f2)).margin(1e-9));
        REQUIRE(information(direct) ==
                Approx(oracles::pair_information(f1, f2)).margin(1e-9));
    }
}

TEST_CASE("combination agrees with the redistributed-sum reference") {
    std::mt19937_64 rng(73);
    for (int i = 0; i < 100; ++i) {
        const auto f1 = oracles::random_distribution(rng, 4);
        const auto f2 = oracles::random_distribution(rng, 4);
        const auto direct = combine_pair(f1, f2);
        const auto reference = oracles::redistributed_sum_combine(f1, f2);
        REQUIRE(oracles::max_deviation(reference, direct) <= 1e-9);
    }
}

TEST_CASE("monoid laws over random triples") {
    std::mt19937_64 rng(79);
    const auto neutral = point_mass(0.5);
    for (int i = 0; i < 200; ++i) {
        const auto f1 = oracles::random_distribution(rng, 4);
        const auto f2 = oracles::random_distribution(rng, 4);
        const auto f3 = oracles::random_distribution(rng, 4);

        // commutativity is exact
        REQUIRE(combine_pair(f1, f2) == combine_pair(f2, f1));

        // associativity of the derived functionals
        const auto left = combine_pair(combine_pair(f1, f2), f3);
        const auto right = combine_pair(f1, combine_pair(f2, f3));
        REQUIRE(accuracy(left) == Approx(accuracy(right)).margin(1e-9));
        REQUIRE(information(left) == Approx(information(right)).margin(1e-9));

        // neutral and absorbing elements
        const auto with_neutral = combine_pair(f1, neutral);
        REQUIRE(with_neutral.size() == f1.size());
        for (std::size_t j = 0; j < f1.size(); ++j) {
            REQUIRE(with_neutral.confidence(j) ==
                    Approx(f1.confidence(j)).margin(1e-12));
            REQUIRE(with_neutral.weight(j) == Approx(f1.weight(j)).margin(1e-12));
        }
        REQUIRE(accuracy(combine_pair(f1, point_mass(1.0))) == 1.0);
    }
}

TEST_CASE("mass is conserved through long folds") {
    auto total_mass = [](const ConfidenceDistribution& f) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) m += f.weight(i);
        return m;
    };
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> pi_draw(0.55, 0.95);

    SECTION("fifteen distinct generalists") {
        std::vector<ConfidenceDistribution> fs;
        for (int i = 0; i < 15; ++i) fs.push_back(generalist(pi_draw(rng)));
        const auto e = combine_all(fs);
        REQUIRE(total_mass(e.dist) == Approx(1.0).margin(1e-9));
    }
    SECTION("fifteen specialists") {
        std::vector<ConfidenceDistribution> fs;
        for (int i = 0; i < 15; ++i) fs.push_back(specialist(pi_draw(rng)));
        const auto e = combine_all(fs);
        REQUIRE(total_mass(e.dist) == Approx(1.0).margin(1e-9));
        REQUIRE(e.dist.size() <= 2);
    }
    SECTION("fifteen three-point members under grid quantization") {
        CombineOptions opts;
        opts.quantize_cells = 4096;
        std::vector<ConfidenceDistribution> fs;
        for (int i = 0; i < 15; ++i) fs.push_back(oracles::random_distribution(rng, 3));
        const auto e = combine_all(fs, opts);
        REQUIRE(total_mass(e.dist) == Approx(1.0).margin(1e-9));
        REQUIRE(e.dist.size() <= 4097);
    }
}

TEST_CASE("grid quantization preserves mass and accuracy") {
    std::mt19937_64 rng(89);
    for (int i = 0; i < 100; ++i) {
        const auto f = oracles::random_distribution(rng, 6);
        const auto q = quantize_to_grid(f, 4096);
        double mass = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) mass += q.weight(j);
        REQUIRE(mass == Approx(1.0).margin(1e-12));
        REQUIRE(accuracy(q) == Approx(accuracy(f)).margin(1e-12));
        REQUIRE(information(q) == Approx(information(f)).margin(1e-6));
    }
}

TEST_CASE("fold order does not change the derived functionals") {
    std::mt19937_64 rng(97);
    for (int i = 0; i < 50; ++i) {
        std::vector<ConfidenceDistribution> fs;
        for (int j = 0; j < 4; ++j) fs.push_back(oracles::random_distribution(rng, 4));
        const double acc = ensemble_accuracy(fs);
        const double info = ensemble_information(fs);
        std::shuffle(fs.begin(), fs.end(), rng);
        REQUIRE(ensemble_accuracy(fs) == Approx(acc).margin(1e-9));
        REQUIRE(ensemble_information(fs) == Approx(info).margin(1e-9));
    }
}

TEST_CASE("adding a member never lowers ensemble accuracy") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 200; ++i) {
        std::vector<ConfidenceDistribution> fs;
        const int k = 1 + static_cast<int>(rng() % 4);
        for (int j = 0; j < k; ++j) fs.push_back(oracles::random_distribution(rng, 4));
        const double before = ensemble_accuracy(fs);
        fs.push_back(oracles::random_distribution(rng, 4));
        const double after = ensemble_accuracy(fs);
        REQUIRE(after >= before - 1e-9);
    }
}

TEST_CASE("extremal ensembles sandwich the true ensemble accuracy") {
    std::mt19937_64 rng(103);
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
        REQUIRE(ensemble_accuracy(gens) <= mid + 1e-9);
        REQUIRE(mid <= ensemble_accuracy(specs) + 1e-9);
    }
}

TEST_CASE("extremal ensembles sandwich the ensemble information as well") {
    std::mt19937_64 rng(107);
    for (int i = 0; i < 200; ++i) {
        const int k = 1 + static_cast<int>(rng() % 4);
        std::vector<ConfidenceDistribution> fs, gens, less, more, specs;
        for (int j = 0; j < k; ++j) {
            fs.push_back(oracles::random_distribution(rng, 4));
            const double pi = accuracy(fs.back());
            const double iota = information(fs.back());
            gens.push_back(generalist(pi));
            less.push_back(less_specialized(pi, iota));
            more.push_back(more_specialized(pi, iota));
            specs.push_back(specialist(pi));
        }
        const double mid = ensemble_information(fs);
        REQUIRE(ensemble_information(gens) <= ensemble_information(less) + 1e-9);
        REQUIRE(ensemble_information(less) <= mid + 1e-9);
        REQUIRE(mid <= ensemble_information(more) + 1e-9);
        REQUIRE(ensemble_information(more) <= ensemble_information(specs) + 1e-9);
    }
}
