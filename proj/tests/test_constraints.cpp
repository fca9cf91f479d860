#include <doctest.h>

#include <random>

#include "collatz/constraints.hpp"
#include "oracles.hpp"

using namespace collatz;

namespace {

using Pairs = std::vector<ExponentPair>;
const MapParams kStandard = MapParams::standard();

std::vector<Nat> nats(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST_CASE("enumerate_pow_gap") {
    CHECK(enumerate_pow_gap(1, 40, 40).solutions == Pairs{{0, 1}, {1, 2}});
    CHECK(enumerate_pow_gap(5, 40, 40).solutions == Pairs{{1, 3}, {3, 5}});
    CHECK(enumerate_pow_gap(-1, 10, 10).solutions == Pairs{{1, 1}, {2, 3}});
    CHECK(enumerate_pow_gap(0, 40, 40).solutions == Pairs{{0, 0}});
    // Bounds are inclusive and respected on both axes.
    CHECK(enumerate_pow_gap(5, 2, 40).solutions == Pairs{{1, 3}});
    CHECK(enumerate_pow_gap(5, 40, 4).solutions == Pairs{{1, 3}});
    CHECK(enumerate_pow_gap(5, 0, 0).solutions.empty());
    auto set = enumerate_pow_gap(13, 7, 9);
    CHECK(set.c == 13);
    CHECK(set.x_max == 7);
    CHECK(set.y_max == 9);
    CHECK(set.solutions == Pairs{{1, 4}, {5, 8}});  // 16 - 3, 256 - 243
}

TEST_CASE("enumerate_pow_gap agrees with a brute-force double loop") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> target(-1'000'000, 1'000'000);
    std::uniform_int_distribution<std::uint64_t> exp(0, 40);
    for (int i = 0; i < 100; ++i) {
        const Nat c = target(rng);
        CHECK(enumerate_pow_gap(c, 40, 40).solutions == oracle::brute_pow_gap(c, 40, 40));
    }
    // Random targets rarely have solutions; also draw c from actual gaps.
    for (int i = 0; i < 100; ++i) {
        const auto x = exp(rng), y = exp(rng);
        const Nat c = pow2(y) - oracle::ipow(3, x);
        auto found = enumerate_pow_gap(c, 40, 40).solutions;
        CHECK(found == oracle::brute_pow_gap(c, 40, 40));
        CHECK(std::find(found.begin(), found.end(), ExponentPair{x, y}) != found.end());
    }
}

TEST_CASE("catalan_check") {
    CHECK(catalan_check(60, 60).solutions == Pairs{{0, 1}, {1, 2}});
    CHECK(catalan_check(1, 2).solutions == Pairs{{0, 1}, {1, 2}});
    CHECK(catalan_check(0, 0).solutions.empty());
    CHECK(positive_x_only(catalan_check(60, 60)).solutions == Pairs{{1, 2}});
    for (std::uint64_t bound : {5ULL, 100ULL, 1000ULL}) {
        for (auto [x, y] : catalan_check(bound, bound).solutions) {
            CHECK(x <= 1);
            CHECK(pow_ui(3, x) + 1 == pow2(y));
        }
    }
}

TEST_CASE("evaluate_derivation on hypothetical tuples") {
    auto d = evaluate_derivation(1, 3, 5);
    CHECK(d.residual == 0);
    CHECK(d.n_case == 1);
    CHECK(d.residual_zero.verdict == Verdict::Holds);
    CHECK(d.kn_identity.verdict == Verdict::Holds);  // 2*1 = 1*(3-1)
    CHECK(d.z1_le_2z0.verdict == Verdict::Holds);
    CHECK(d.n_ge_k.verdict == Verdict::Holds);
    CHECK(d.k_divides_n.verdict == Verdict::Holds);
    CHECK(d.z0_gt_2n.verdict == Verdict::Holds);
    CHECK(d.z0_lt_2n_plus_2.verdict == Verdict::Holds);
    CHECK(d.z0_eq_2n_plus_1.verdict == Verdict::Holds);

    auto e = evaluate_derivation(2, 5, 12);  // n = -2
    CHECK(e.n_case == -2);
    CHECK(e.z1_le_2z0.verdict == Verdict::Fails);
    CHECK(e.n_ge_k.verdict == Verdict::Fails);
    CHECK(e.k_divides_n.verdict == Verdict::Holds);
    CHECK(e.residual == (10 - 12) + 2 * (15 - 24));

    auto z = evaluate_derivation(0, 1, 2);  // k = 0: divisibility reads n == 0
    CHECK(z.n_case == 0);
    CHECK(z.k_divides_n.verdict == Verdict::Holds);
    CHECK(evaluate_derivation(0, 1, 1).k_divides_n.verdict == Verdict::Fails);
}

TEST_CASE("residual and (k+1)n = k(z0-n) are the same statement") {
    std::mt19937_64 rng(1018);
    std::uniform_int_distribution<long> k_dist(0, 50);
    std::uniform_int_distribution<long> z_dist(-200, 200);
    int zero_residuals = 0;
    for (int i = 0; i < 10'000; ++i) {
        const long k = k_dist(rng);
        const long z0 = z_dist(rng);
        // Every fourth tuple is built to satisfy the residual exactly.
        long z1 = z_dist(rng);
        if (i % 4 == 0 && (2 * k + 1) != 0 && ((3 * k + 2) * z0) % (2 * k + 1) == 0) {
            z1 = (3 * k + 2) * z0 / (2 * k + 1);
        }
        auto d = evaluate_derivation(k, z0, z1);
        CHECK((d.residual_zero.verdict == Verdict::Holds) == (d.kn_identity.verdict == Verdict::Holds));
        CHECK(d.residual == d.n_case + k * (2 * d.n_case - z0));
        zero_residuals += d.residual == 0;
    }
    CHECK(zero_residuals > 100);
}

TEST_CASE("rational identity is equivalent to signature verification") {
    // Real signatures.
    for (auto [m, map] : {std::pair{Nat(1), kStandard}, std::pair{Nat(5), MapParams::three_n_minus_one()},
                          std::pair{Nat(13), MapParams::five_n_plus_one()}}) {
        auto sig = decompose(m, map);
        CHECK(power_gap_identity(map, sig.x, sig.y, sig.m, sig.z) == verify_signature(sig));
        CHECK(power_gap_identity(map, sig.x, sig.y, sig.m, sig.z));
    }
    // Hypothetical tuples: the identity equals m(2^y - 3^x) == z.
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> small(1, 40);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t x = small(rng) % 12, y = small(rng) % 20;
        const Nat m = 2 * small(rng) + 1;
        Nat z = m * (pow2(y) - pow_ui(3, x));
        if (i % 2) z += small(rng);
        CHECK(power_gap_identity(kStandard, x, y, m, z) == (m * (pow2(y) - pow_ui(3, x)) == z));
    }
}

TEST_CASE("replay_theorem on the trivial cycle") {
    auto rep = replay_theorem(min_normalize(Cycle(nats({1, 4, 2}), kStandard)));
    CHECK(rep.k == 0);
    CHECK(rep.x == 1);
    CHECK(rep.y == 2);
    CHECK(rep.z0 == 1);
    CHECK(rep.m2 == 2);
    CHECK(rep.trivial_cycle_flag);
    CHECK_FALSE(rep.z1);
    CHECK_FALSE(rep.derivation);
    CHECK(rep.rational_m0.verdict == Verdict::Holds);
    CHECK(rep.rational_m2.verdict == Verdict::NotApplicable);
    CHECK(rep.z0_equals_m0.verdict == Verdict::Holds);
    CHECK(rep.catalan_identity.verdict == Verdict::Holds);
    CHECK(rep.final_reduction.verdict == Verdict::Holds);

    auto lines = rep.lines();
    CHECK(lines.size() == 13);
    for (const auto& line : lines) {
        CAPTURE(line.name);
        CHECK(!line.name.empty());
        CHECK(line.verdict != Verdict::Fails);
    }
}

TEST_CASE("replay_theorem error paths") {
    CHECK_THROWS_AS(replay_theorem(min_normalize(Cycle(nats({5, 14, 7, 20, 10}),
                                                       MapParams::three_n_minus_one()))),
                    TheoremReplayError);
}

TEST_CASE("replay_theorem on synthetic non-cycle input") {
    try {
        replay_theorem(Nat(13), Nat(20), kStandard);
        FAIL("expected a decomposition error");
    } catch (const DecompositionError& e) {
        CHECK(e.kind() == DecompositionError::Kind::NotOnCycle);
    }
    CHECK_THROWS_AS(replay_theorem(Nat(13), Nat(20), MapParams::three_n_minus_one()),
                    TheoremReplayError);
    CHECK_THROWS_AS(replay_theorem(Nat(4), Nat(2), kStandard), TheoremReplayError);
}
