#include <doctest.h>

#include "collatz/decomposition.hpp"
#include "oracles.hpp"

using namespace collatz;

namespace {

const MapParams kStandard = MapParams::standard();
const MapParams kMinus = MapParams::three_n_minus_one();
const MapParams kFive = MapParams::five_n_plus_one();

std::vector<Nat> nats(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }

DecompositionError::Kind error_kind(const Nat& m, const MapParams& map, std::uint64_t cap) {
    try {
        decompose(m, map, cap);
    } catch (const DecompositionError& e) {
        return e.kind();
    }
    FAIL("decompose did not throw");
    return DecompositionError::Kind::NotOdd;
}

}  // namespace

TEST_CASE("decompose: worked examples") {
    SUBCASE("standard map, m = 1") {
        auto sig = decompose(1, kStandard);
        CHECK(sig.x == 1);
        CHECK(sig.y == 2);
        CHECK(sig.y_profile == std::vector<std::uint64_t>{2});
        CHECK(sig.z == 1);
        CHECK(1 * (pow2(2) - 3) == sig.z);
    }
    SUBCASE("3n-1, m = 5") {
        auto sig = decompose(5, kMinus);
        CHECK(sig.x == 2);
        CHECK(sig.y == 3);
        CHECK(sig.y_profile == std::vector<std::uint64_t>{1, 2});
        CHECK(sig.z_steps == nats({-1, -5}));
        CHECK(sig.z == -5);
    }
    SUBCASE("5n+1, m = 1") {
        auto sig = decompose(1, kFive);
        CHECK(sig.x == 2);
        CHECK(sig.y == 5);
        CHECK(sig.y_profile == std::vector<std::uint64_t>{1, 4});
        CHECK(sig.z_steps == nats({1, 7}));
        CHECK(sig.z == 7);
    }
    SUBCASE("3n-1, m = 7") {
        auto sig = decompose(7, kMinus);
        CHECK(sig.y_profile == std::vector<std::uint64_t>{2, 1});
        CHECK(sig.z_steps == nats({-1, -7}));
        CHECK(verify_signature(sig));
    }
}

TEST_CASE("decompose: error paths") {
    CHECK(error_kind(13, kStandard, kDefaultOddStepCap) == DecompositionError::Kind::NotOnCycle);
    CHECK(error_kind(4, kStandard, kDefaultOddStepCap) == DecompositionError::Kind::NotOdd);
    // 7 under 5n+1 grows without closing.
    CHECK(error_kind(7, kFive, 200) == DecompositionError::Kind::CapExceeded);
    CHECK_THROWS_AS(decompose(0, kStandard), DomainError);

    try {
        decompose(13, kStandard);
    } catch (const DecompositionError& e) {
        CHECK(e.witness() == 1);  // 13 -> 5 -> 1 -> 1
        CHECK(e.m() == 13);
    }
}

TEST_CASE("signatures_for_cycle") {
    SUBCASE("trivial cycle") {
        auto sigs = signatures_for_cycle(min_normalize(Cycle(nats({4, 2, 1}), kStandard)));
        REQUIRE(sigs.size() == 1);
        CHECK(sigs[0].x == 1);
        CHECK(sigs[0].y == 2);
        CHECK(sigs[0].z == 1);
    }
    SUBCASE("3n-1 five-cycle") {
        auto sigs = signatures_for_cycle(min_normalize(Cycle(nats({5, 14, 7, 20, 10}), kMinus)));
        REQUIRE(sigs.size() == 2);
        CHECK(sigs[0].m == 5);
        CHECK(sigs[0].z == -5);
        CHECK(sigs[1].m == 7);
        CHECK(sigs[1].z == -7);
        for (const auto& s : sigs) {
            CHECK(s.x == 2);
            CHECK(s.y == 3);
        }
    }
    SUBCASE("3n-1 two-cycle") {
        auto sigs = signatures_for_cycle(min_normalize(Cycle(nats({1, 2}), kMinus)));
        REQUIRE(sigs.size() == 1);
        CHECK(sigs[0].x == 1);
        CHECK(sigs[0].y == 1);
        CHECK(sigs[0].z == -1);
        CHECK(1 * (pow2(1) - 3) == sigs[0].z);
    }
}

TEST_CASE("verify_signature") {
    CHECK(verify_signature(decompose(1, kStandard)));

    CycleSignature forged;
    forged.m = 1;
    forged.x = 1;
    forged.y = 3;
    forged.y_profile = {3};
    forged.z = 1;
    CHECK_FALSE(verify_signature(forged));  // 1 * (8 - 3) != 1

    auto sig = decompose(5, kMinus);
    auto wrong_z = sig;
    wrong_z.z += 1;
    CHECK_FALSE(verify_signature(wrong_z));
    auto wrong_profile = sig;
    wrong_profile.y_profile = {2, 1};  // same sum, wrong replay
    CHECK_FALSE(verify_signature(wrong_profile));
    auto wrong_map = sig;
    wrong_map.map = kStandard;
    CHECK_FALSE(verify_signature(wrong_map));
}

TEST_CASE("signatures agree with a single-step affine oracle") {
    const std::vector<std::pair<std::vector<Nat>, MapParams>> cycles = {
        {nats({1, 4, 2}), kStandard},
        {nats({1, 2}), kMinus},
        {nats({5, 14, 7, 20, 10}), kMinus},
        {nats({17, 50, 25, 74, 37, 110, 55, 164, 82, 41, 122, 61, 182, 91, 272, 136, 68, 34}), kMinus},
        {nats({1, 6, 3, 16, 8, 4, 2}), kFive},
        {nats({13, 66, 33, 166, 83, 416, 208, 104, 52, 26}), kFive},
        {nats({17, 86, 43, 216, 108, 54, 27, 136, 68, 34}), kFive},
    };
    for (const auto& [elements, map] : cycles) {
        auto mc = min_normalize(Cycle(elements, map));
        std::uint64_t odd = 0;
        for (const auto& e : elements) odd += (e % 2 != 0);
        const std::uint64_t even = elements.size() - odd;
        auto sigs = signatures_for_cycle(mc);
        CHECK(sigs.size() == odd);
        for (const auto& sig : sigs) {
            CAPTURE(sig.m.get_str());
            auto ref = oracle::affine_signature(sig.m, map.q(), map.r(), 1000);
            REQUIRE(ref);
            CHECK(sig.x == ref->x);
            CHECK(sig.y == ref->y);
            CHECK(sig.z == ref->z);
            CHECK(sig.x == odd);
            CHECK(sig.y == even);
            CHECK(sig.x + sig.y == elements.size());
            CHECK(verify_signature(sig));
            CHECK(closed_form_z(map, sig.y_profile) == sig.z);
            CHECK(sgn(sig.z) == (map.r() > 0 ? 1 : -1));
            for (auto h : sig.y_profile) CHECK(h >= 1);
        }
    }
}

TEST_CASE("pow_ui") {
    CHECK(pow_ui(3, 0) == 1);
    CHECK(pow_ui(3, 4) == 81);
    CHECK(pow_ui(-3, 3) == -27);
    CHECK(pow_ui(5, 2) == 25);
}
