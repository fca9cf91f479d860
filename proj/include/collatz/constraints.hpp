#pragma once

// Power-gap enumeration (2^y - 3^x = c) and an exact replay of the
// identity chain that reduces a standard-map cycle to 3^x + 1 = 2^y.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "collatz/core.hpp"
#include "collatz/cycle.hpp"
#include "collatz/decomposition.hpp"
#include "collatz/verdict.hpp"

namespace collatz {

using ExponentPair = std::pair<std::uint64_t, std::uint64_t>;  // (x, y)

struct PowGapSolutionSet {
    Nat c;
    std::uint64_t x_max = 0;
    std::uint64_t y_max = 0;
    std::vector<ExponentPair> solutions;  ///< ascending by x
};

/// Every (x, y) with 0 <= x <= x_max, 0 <= y <= y_max and 2^y - 3^x = c.
PowGapSolutionSet enumerate_pow_gap(const Nat& c, std::uint64_t x_max, std::uint64_t y_max);

/// Solutions of 3^x + 1 = 2^y within bounds, x counted from 0.
PowGapSolutionSet catalan_check(std::uint64_t x_max, std::uint64_t y_max);

/// Drops x = 0 solutions (the x >= 1 reading of the exponent range).
PowGapSolutionSet positive_x_only(PowGapSolutionSet set);

/// (q^x * m + z) / 2^y == m, cross-multiplied.
bool power_gap_identity(const MapParams& map, std::uint64_t x, std::uint64_t y, const Nat& m,
                        const Nat& z);

/// Derivation lines that only depend on (k, z0, z1); n = 2 z0 - z1.
struct DerivationReport {
    Nat k, z0, z1;
    Nat n_case;
    Nat residual;               ///< (2z0 - z1) + k(3z0 - 2z1)
    LineVerdict residual_zero;  ///< residual == 0
    LineVerdict z1_le_2z0;
    LineVerdict kn_identity;    ///< (k+1) n == k (z0 - n)
    LineVerdict n_ge_k;
    LineVerdict k_divides_n;    ///< 0 | n read as n == 0
    LineVerdict z0_gt_2n;
    LineVerdict z0_lt_2n_plus_2;
    LineVerdict z0_eq_2n_plus_1;

    std::vector<LineVerdict> lines() const {
        return {residual_zero, z1_le_2z0, kn_identity, n_ge_k,
                k_divides_n,   z0_gt_2n,  z0_lt_2n_plus_2, z0_eq_2n_plus_1};
    }
};

DerivationReport evaluate_derivation(const Nat& k, const Nat& z0, const Nat& z1);

class TheoremReplayError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct TheoremReport {
    Nat m0, k;
    std::uint64_t x = 0, y = 0;
    Nat z0;
    Nat m2;
    std::optional<Nat> z1;           ///< absent when m2 is even
    bool trivial_cycle_flag = false; ///< m2 even: z1 lines skipped
    LineVerdict rational_m0;         ///< 3^x + z0/(2k+1) = 2^y
    LineVerdict rational_m2;         ///< 3^x + z1/(3k+2) = 2^y
    std::optional<DerivationReport> derivation;
    LineVerdict z0_equals_m0;
    LineVerdict catalan_identity;    ///< 3^x + 1 = 2^y
    LineVerdict final_reduction;     ///< z0 = m0 implies 3^x + 1 = 2^y

    /// Every evaluated line in derivation order; skipped lines are
    /// reported not_applicable.
    std::vector<LineVerdict> lines() const;
};

/// Standard map only; throws TheoremReplayError otherwise and propagates
/// DecompositionError.
TheoremReport replay_theorem(const MinNormalCycle& mc,
                             std::uint64_t odd_step_cap = kDefaultOddStepCap);

/// Same evaluation from the two elements it reads, without requiring a
/// validated cycle. Inputs that are not on a cycle surface as
/// DecompositionError (NotOnCycle or CapExceeded).
TheoremReport replay_theorem(const Nat& m0, const Nat& m2, const MapParams& map,
                             std::uint64_t odd_step_cap = kDefaultOddStepCap);

}  // namespace collatz
