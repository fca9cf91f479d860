#include "collatz/cycle.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace collatz {

Cycle::Cycle(std::vector<Nat> elements, MapParams map)
    : elements_(std::move(elements)), map_(std::move(map)) {
    if (elements_.empty()) throw DomainError("a cycle needs at least one element");
    std::set<Nat> distinct;
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const Nat& e = elements_[i];
        if (sgn(e) <= 0) throw DomainError("cycle elements must be >= 1");
        if (!distinct.insert(e).second) {
            throw DomainError("cycle element " + e.get_str() + " occurs twice");
        }
        const Nat& next = elements_[(i + 1) % elements_.size()];
        if (step(e, map_) != next) {
            throw DomainError("not a cycle under " + map_.label() + ": step(" + e.get_str() +
                              ") != " + next.get_str());
        }
    }
}

MinNormalCycle::MinNormalCycle(std::vector<Nat> elements, MapParams map)
    : elements_(std::move(elements)), map_(std::move(map)) {
    const Nat& m0 = elements_.front();
    if (mpz_odd_p(m0.get_mpz_t())) k_ = (m0 - 1) / 2;
}

MinNormalCycle min_normalize(const Cycle& c) {
    std::vector<Nat> rotated = c.elements();
    auto smallest = std::min_element(rotated.begin(), rotated.end());
    std::rotate(rotated.begin(), smallest, rotated.end());
    return MinNormalCycle(std::move(rotated), c.map());
}

namespace {

std::uint64_t saturating_budget(std::uint64_t step_cap) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (step_cap > (kMax - 1) / 3) return kMax;
    return 3 * step_cap + 1;
}

// Outcome when the value at trajectory index `index` is the first to exceed
// the value cap. No repeat can precede it (a repeat would keep every later
// value inside the cycle, hence below the cap).
StopReason value_cap_outcome(std::uint64_t index, std::uint64_t step_cap) {
    return index <= step_cap ? StopReason::ValueCapHit : StopReason::StepCapHit;
}

}  // namespace

DetectionResult detect_cycle(const Nat& n, const MapParams& map, std::uint64_t step_cap,
                             const Nat& value_cap) {
    if (sgn(n) <= 0) throw DomainError("detect_cycle requires n >= 1");
    if (step_cap < 1) throw DomainError("detect_cycle requires step_cap >= 1");

    DetectionResult out;
    if (n > value_cap) {
        out.cap_reason = StopReason::ValueCapHit;
        return out;
    }

    // Brent: the hare only moves forward, so hare_index is the trajectory
    // index. Detection happens by index 3 * (mu + lambda), hence the budget.
    const std::uint64_t budget = saturating_budget(step_cap);
    std::uint64_t power = 1;
    std::uint64_t period = 1;
    std::uint64_t hare_index = 1;
    Nat tortoise = n;
    Nat hare = step(n, map);
    if (hare > value_cap) {
        out.cap_reason = value_cap_outcome(hare_index, step_cap);
        return out;
    }
    while (tortoise != hare) {
        if (power == period) {
            tortoise = hare;
            power *= 2;
            period = 0;
        }
        hare = step(hare, map);
        ++hare_index;
        ++period;
        if (hare > value_cap) {
            out.cap_reason = value_cap_outcome(hare_index, step_cap);
            return out;
        }
        if (hare_index > budget) {
            out.cap_reason = StopReason::StepCapHit;
            return out;
        }
    }

    // Reconstruction: the first repeat sits at index mu + period.
    std::uint64_t mu = 0;
    Nat slow = n;
    Nat fast = iterate(n, period, map);
    while (slow != fast) {
        slow = step(slow, map);
        fast = step(fast, map);
        ++mu;
    }
    if (mu + period > step_cap) {
        out.cap_reason = StopReason::StepCapHit;
        return out;
    }

    std::vector<Nat> elements;
    elements.reserve(period);
    Nat e = slow;
    for (std::uint64_t i = 0; i < period; ++i) {
        elements.push_back(e);
        e = step(e, map);
    }
    out.cycle.emplace(std::move(elements), map);
    out.tail_length = mu;
    return out;
}

PropertyReport check_preliminaries(const MinNormalCycle& mc) {
    PropertyReport rep;
    const Nat& m0 = mc.minimum();
    const auto& k = mc.k();
    const bool m0_odd = k.has_value();
    const MapParams& map = mc.map();

    rep.wraparound = mc.size() < 3;
    rep.m2 = mc.at(2);
    const std::string m2_label = rep.wraparound ? "m2 (wraparound)" : "m2";

    rep.m0_odd = {"m0_odd", verdict_of(m0_odd),
                  "m0 = " + m0.get_str() + (m0_odd ? " is odd" : " is even")};

    rep.m0_form = {"m0_form_2k_plus_1", verdict_of(m0_odd),
                   m0_odd ? "k = " + k->get_str() : "m0 = " + m0.get_str() + " has no form 2k+1"};

    if (map.q() != 3) {
        rep.m2_form = {"m2_form_3k_plus_c", Verdict::NotApplicable,
                       "q = " + std::to_string(map.q()) + " != 3"};
    } else if (!m0_odd) {
        rep.m2_form = {"m2_form_3k_plus_c", Verdict::NotApplicable, "m0 even, k undefined"};
    } else {
        const long offset = (3 + map.r()) / 2;
        Nat expected = 3 * *k + offset;
        rep.m2_form = {"m2_form_3k_plus_c", verdict_of(rep.m2 == expected),
                       m2_label + " = " + rep.m2.get_str() + ", 3k + " + std::to_string(offset) +
                           " = " + expected.get_str()};
    }

    const bool m2_odd = mpz_odd_p(rep.m2.get_mpz_t()) != 0;
    rep.m2_odd = {"m2_odd", verdict_of(m2_odd),
                  m2_label + " = " + rep.m2.get_str() + (m2_odd ? " is odd" : " is even")};

    const std::uint64_t len = mc.size();
    std::string periodic_witness = "C^" + std::to_string(len) + "(m) = m for all m";
    bool periodic = true;
    for (const Nat& m : mc.elements()) {
        Nat back = iterate(m, len, map);
        if (back != m) {
            periodic = false;
            periodic_witness = "C^" + std::to_string(len) + "(" + m.get_str() + ") = " + back.get_str();
            break;
        }
    }
    rep.periodic = {"periodic", verdict_of(periodic), periodic_witness};
    return rep;
}

}  // namespace collatz
