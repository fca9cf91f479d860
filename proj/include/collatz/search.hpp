#pragma once

// Batch range verification and cycle censuses.
//
// Both entry points split their seed range into contiguous partitions that
// run concurrently; partial reports merge with an associative, commutative
// reduction, so results do not depend on the partition count or on
// scheduling order.

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "collatz/core.hpp"
#include "collatz/cycle.hpp"

namespace collatz {

/// Called with the cumulative number of completed seeds; values never
/// decrease. Invocations are serialized.
using ProgressCallback = std::function<void(std::uint64_t completed)>;

/// A seed exceeded the engine's safety caps before it could be verified.
class CapExhausted : public std::runtime_error {
public:
    CapExhausted(std::uint64_t seed, const std::string& what)
        : std::runtime_error(what), seed_(seed) {}
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

struct RangeOptions {
    std::uint64_t partition_hint = 1;
    /// Memo of total stopping time and peak for small values, built once
    /// with the descent check. Never changes report fields except elapsed.
    bool use_lookup_table = true;
    std::uint64_t table_limit = std::uint64_t{1} << 16;
    std::uint64_t step_cap = kDefaultStepCap;
    unsigned value_cap_bits = kDefaultValueCapBits;
    /// Run every walk in arbitrary precision instead of the 128-bit kernel.
    /// Slower; used to cross-check the fast path.
    bool wide_arithmetic_only = false;
    ProgressCallback progress;
};

struct RangeVerificationReport {
    std::uint64_t n_max = 0;
    std::uint64_t verified_count = 0;
    Nat max_excursion;
    std::uint64_t max_excursion_seed = 0;      ///< smallest seed attaining it
    std::uint64_t max_total_steps = 0;         ///< total stopping time
    std::uint64_t max_total_steps_seed = 0;    ///< smallest seed attaining it
    std::chrono::nanoseconds elapsed{0};
    std::uint64_t partition_count = 0;

    /// Equality over the computed fields (elapsed and partition_count excluded).
    bool same_results(const RangeVerificationReport& other) const;
};

/// Confirms every seed in [1, n_max] descends below itself (seed 1 sits on
/// the trivial cycle and is accepted by convention). Together over the range
/// this means every seed reaches 1. Standard map only.
///
/// Throws CapExhausted for the smallest seed that hits a safety cap and
/// DomainError for a non-standard map or n_max == 0.
RangeVerificationReport verify_range(std::uint64_t n_max,
                                     const MapParams& map = MapParams::standard(),
                                     const RangeOptions& options = {});

struct SearchOptions {
    std::uint64_t partition_hint = 1;
    std::size_t diverged_sample = 16;
    ProgressCallback progress;
};

struct CycleSearchReport {
    MapParams map = MapParams::standard();
    std::uint64_t seed_max = 0;
    std::uint64_t step_cap = 0;
    Nat value_cap;
    std::vector<MinNormalCycle> cycles;          ///< ascending by minimum
    std::uint64_t capped_seed_count = 0;
    std::vector<std::uint64_t> diverged_examples;  ///< smallest capped seeds
    std::chrono::nanoseconds elapsed{0};
    std::uint64_t partition_count = 0;

    bool same_results(const CycleSearchReport& other) const;
};

/// Runs detect_cycle from every seed in [1, seed_max] and collects the
/// distinct cycles in min-normal form.
CycleSearchReport find_cycles(const MapParams& map, std::uint64_t seed_max,
                              std::uint64_t step_cap = kDefaultStepCap,
                              const Nat& value_cap = default_value_cap(),
                              const SearchOptions& options = {});

/// Contiguous split of [first, last] into at most `parts` nonempty ranges.
std::vector<std::pair<std::uint64_t, std::uint64_t>> partition_range(std::uint64_t first,
                                                                     std::uint64_t last,
                                                                     std::uint64_t parts);

}  // namespace collatz
