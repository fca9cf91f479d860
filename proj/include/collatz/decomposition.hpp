#pragma once

// Signature decomposition of an odd cycle element.
//
// Following an odd element m around its cycle one odd step at a time
// (q*n + r, then every available halving) gives per-step halving counts
// y_0..y_{x-1} and an accumulator
//
//     z_0 = r,   z_i = q * z_{i-1} + r * 2^(y_0 + ... + y_{i-1}),
//
// such that after x steps (q^x * m + z_{x-1}) / 2^y = m with y = sum of y_i.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "collatz/core.hpp"
#include "collatz/cycle.hpp"

namespace collatz {

inline constexpr std::uint64_t kDefaultOddStepCap = 10'000;

struct CycleSignature {
    Nat m;                                 ///< base element (odd)
    std::uint64_t x = 0;                   ///< odd steps around the cycle
    std::uint64_t y = 0;                   ///< total halvings
    std::vector<std::uint64_t> y_profile;  ///< halvings per odd step
    std::vector<Nat> z_steps;              ///< z_0 .. z_{x-1}
    Nat z;                                 ///< z_{x-1}; negative when r < 0
    MapParams map = MapParams::standard();
};

class DecompositionError : public std::runtime_error {
public:
    enum class Kind { NotOdd, NotOnCycle, CapExceeded };

    DecompositionError(Kind kind, Nat m, Nat witness, std::uint64_t odd_steps,
                       const std::string& what)
        : std::runtime_error(what), kind_(kind), m_(std::move(m)),
          witness_(std::move(witness)), odd_steps_(odd_steps) {}

    Kind kind() const noexcept { return kind_; }
    const Nat& m() const noexcept { return m_; }
    /// NotOnCycle: the first odd value seen twice (m's orbit entered a cycle
    /// avoiding m). CapExceeded: the last odd value reached.
    const Nat& witness() const noexcept { return witness_; }
    std::uint64_t odd_steps() const noexcept { return odd_steps_; }

private:
    Kind kind_;
    Nat m_;
    Nat witness_;
    std::uint64_t odd_steps_;
};

std::string_view to_string(DecompositionError::Kind kind);

CycleSignature decompose(const Nat& m, const MapParams& map,
                         std::uint64_t odd_step_cap = kDefaultOddStepCap);

/// One signature per odd element, in cycle order.
std::vector<CycleSignature> signatures_for_cycle(const MinNormalCycle& mc,
                                                 std::uint64_t odd_step_cap = kDefaultOddStepCap);

/// m * (2^y - q^x) == z, y == sum(y_profile), x == |y_profile|, and replaying
/// y_profile with odd_successor returns to m.
bool verify_signature(const CycleSignature& sig);

/// r * sum_{t<x} q^(x-1-t) * 2^(y_0 + ... + y_{t-1}).
Nat closed_form_z(const MapParams& map, const std::vector<std::uint64_t>& y_profile);

/// a^e for small bases.
Nat pow_ui(long base, std::uint64_t exponent);

}  // namespace collatz
