#pragma once

// Exact arithmetic kernel for the Collatz function and generalized qn+r maps.
//
// All values live in the positive integers; 0 is rejected at every entry
// point. Values are arbitrary precision (GMP) because excursions leave the
// machine word range quickly, in particular for divergent maps like 5n+1.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace collatz {

using Nat = mpz_class;

/// Thrown when an argument lies outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Generalized map: n/2 on even n, q*n + r on odd n.
///
/// q and r are both odd so an odd step always lands on an even value, and
/// q + r >= 1 so positive integers map to positive integers.
class MapParams {
public:
    static MapParams make(std::int64_t q, std::int64_t r, std::string label = {});

    static MapParams standard() { return make(3, 1, "standard"); }
    static MapParams three_n_minus_one() { return make(3, -1, "3n-1"); }
    static MapParams five_n_plus_one() { return make(5, 1, "5n+1"); }

    /// Accepts a preset name ("standard", "3n+1", "3n-1", "5n+1") or "q,r".
    static MapParams parse(std::string_view text);

    std::int64_t q() const noexcept { return q_; }
    std::int64_t r() const noexcept { return r_; }
    const std::string& label() const noexcept { return label_; }
    bool is_standard() const noexcept { return q_ == 3 && r_ == 1; }

    /// Equality ignores the label.
    friend bool operator==(const MapParams& a, const MapParams& b) noexcept {
        return a.q_ == b.q_ && a.r_ == b.r_;
    }

private:
    MapParams(std::int64_t q, std::int64_t r, std::string label)
        : q_(q), r_(r), label_(std::move(label)) {}

    std::int64_t q_;
    std::int64_t r_;
    std::string label_;
};

inline constexpr std::uint64_t kDefaultStepCap = 100'000;
inline constexpr unsigned kDefaultValueCapBits = 512;

/// 2^bits.
Nat pow2(std::uint64_t bits);

inline Nat default_value_cap() { return pow2(kDefaultValueCapBits); }

/// Parses a decimal integer of arbitrary length (optional leading '-').
Nat parse_integer(std::string_view text);

enum class StopReason { ReachedOne, CycleClosed, StepCapHit, ValueCapHit };

std::string_view to_string(StopReason reason);

struct TrajectoryRecord {
    Nat start;
    std::vector<Nat> values;
    StopReason stop_reason = StopReason::StepCapHit;
    Nat max_excursion;
    std::uint64_t total_steps = 0;
};

Nat step(const Nat& n, const MapParams& map);

/// Applies the map i times; iterate(n, 0, map) == n.
Nat iterate(Nat n, std::uint64_t i, const MapParams& map);

/// Iterates from n until one of:
///   - a value exceeds value_cap (that value is recorded, ValueCapHit),
///   - a value repeats an earlier one (CycleClosed),
///   - 1 is reached under the standard map (ReachedOne),
///   - step_cap steps were applied (StepCapHit).
/// The checks run in that order on every new value.
TrajectoryRecord trajectory(const Nat& n, const MapParams& map,
                            std::uint64_t step_cap = kDefaultStepCap,
                            const Nat& value_cap = default_value_cap());

/// 2-adic valuation: largest e with 2^e | n.
std::uint64_t v2(const Nat& n);

struct OddSuccessor {
    Nat value;                 ///< next odd value on the trajectory
    std::uint64_t halvings{};  ///< halvings consumed after the odd step (>= 1)
};

/// One odd step followed by every available halving.
OddSuccessor odd_successor(const Nat& m, const MapParams& map);

}  // namespace collatz
