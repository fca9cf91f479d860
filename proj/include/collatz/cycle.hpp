#pragma once

// Cycle detection, min-normal form, and the preliminary cycle properties.

#include <cstdint>
#include <optional>
#include <vector>

#include "collatz/core.hpp"
#include "collatz/verdict.hpp"

namespace collatz {

/// Values closed under a map, in trajectory order: step(e[i]) == e[(i+1) % size].
class Cycle {
public:
    /// Validates closure and distinctness; throws DomainError otherwise.
    Cycle(std::vector<Nat> elements, MapParams map);

    const std::vector<Nat>& elements() const noexcept { return elements_; }
    const MapParams& map() const noexcept { return map_; }
    std::size_t size() const noexcept { return elements_.size(); }

private:
    std::vector<Nat> elements_;
    MapParams map_;
};

/// A cycle rotated so that its minimum comes first. Two rotations of the
/// same cycle have identical min-normal forms.
class MinNormalCycle {
public:
    const std::vector<Nat>& elements() const noexcept { return elements_; }
    const MapParams& map() const noexcept { return map_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const Nat& minimum() const noexcept { return elements_.front(); }

    /// k with m0 = 2k + 1, present when m0 is odd.
    const std::optional<Nat>& k() const noexcept { return k_; }

    /// Element with wraparound indexing.
    const Nat& at(std::size_t i) const { return elements_[i % elements_.size()]; }

    Cycle as_cycle() const { return Cycle(elements_, map_); }

    friend bool operator==(const MinNormalCycle& a, const MinNormalCycle& b) {
        return a.map_ == b.map_ && a.elements_ == b.elements_;
    }

private:
    friend MinNormalCycle min_normalize(const Cycle& c);
    MinNormalCycle(std::vector<Nat> elements, MapParams map);

    std::vector<Nat> elements_;
    MapParams map_;
    std::optional<Nat> k_;
};

MinNormalCycle min_normalize(const Cycle& c);
inline MinNormalCycle min_normalize(const MinNormalCycle& c) { return c; }

struct DetectionResult {
    std::optional<Cycle> cycle;
    /// Set when no cycle was found within the caps.
    std::optional<StopReason> cap_reason;
    /// Index of the first cycle element on the trajectory (mu).
    std::uint64_t tail_length = 0;
};

/// Constant-memory detection (Brent) followed by an exact reconstruction of
/// the tail length and period. A cycle is reported only when its first
/// repeat happens within step_cap steps and every value up to it stays
/// <= value_cap; this matches a seen-set walk over the same trajectory.
DetectionResult detect_cycle(const Nat& n, const MapParams& map,
                             std::uint64_t step_cap = kDefaultStepCap,
                             const Nat& value_cap = default_value_cap());

struct PropertyReport {
    LineVerdict m0_odd;        // (i)
    LineVerdict m0_form;       // (ii)  m0 = 2k+1
    LineVerdict m2_form;       // (iii) m2 = 3k + (3+r)/2, q = 3 only
    LineVerdict m2_odd;        // (iv)
    LineVerdict periodic;      // (v)   C^|M|(m) = m for every m
    bool wraparound = false;   // m2 read as elements[2 mod size]
    Nat m2;

    std::vector<LineVerdict> all() const { return {m0_odd, m0_form, m2_form, m2_odd, periodic}; }
};

PropertyReport check_preliminaries(const MinNormalCycle& mc);

}  // namespace collatz
