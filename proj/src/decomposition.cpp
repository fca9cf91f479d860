#include "collatz/decomposition.hpp"

#include <numeric>
#include <set>

namespace collatz {

std::string_view to_string(DecompositionError::Kind kind) {
    switch (kind) {
        case DecompositionError::Kind::NotOdd: return "NotOdd";
        case DecompositionError::Kind::NotOnCycle: return "NotOnCycle";
        case DecompositionError::Kind::CapExceeded: return "CapExceeded";
    }
    return "?";
}

Nat pow_ui(long base, std::uint64_t exponent) {
    Nat out;
    if (base >= 0) {
        mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), exponent);
    } else {
        mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(-base), exponent);
        if (exponent % 2 == 1) out = -out;
    }
    return out;
}

CycleSignature decompose(const Nat& m, const MapParams& map, std::uint64_t odd_step_cap) {
    if (sgn(m) <= 0) throw DomainError("decompose requires m >= 1");
    if (mpz_even_p(m.get_mpz_t())) {
        throw DecompositionError(DecompositionError::Kind::NotOdd, m, m, 0,
                                 "decompose: " + m.get_str() + " is even");
    }

    CycleSignature sig;
    sig.m = m;
    sig.map = map;

    const long q = static_cast<long>(map.q());
    const long r = static_cast<long>(map.r());
    std::set<Nat> seen{m};
    Nat current = m;
    Nat z = r;
    for (;;) {
        if (sig.x == odd_step_cap) {
            throw DecompositionError(DecompositionError::Kind::CapExceeded, m, current, sig.x,
                                     "decompose: " + m.get_str() + " did not recur within " +
                                         std::to_string(odd_step_cap) + " odd steps");
        }
        // z_i = q z_{i-1} + r 2^(y_0+...+y_{i-1}); z_0 = r.
        if (sig.x > 0) z = q * z + r * pow2(sig.y);
        auto next = odd_successor(current, map);
        sig.y_profile.push_back(next.halvings);
        sig.z_steps.push_back(z);
        sig.y += next.halvings;
        ++sig.x;
        current = std::move(next.value);
        if (current == m) break;
        if (!seen.insert(current).second) {
            throw DecompositionError(DecompositionError::Kind::NotOnCycle, m, current, sig.x,
                                     "decompose: " + m.get_str() +
                                         " is not on a cycle; its orbit repeats at " +
                                         current.get_str());
        }
    }
    sig.z = z;
    return sig;
}

std::vector<CycleSignature> signatures_for_cycle(const MinNormalCycle& mc,
                                                 std::uint64_t odd_step_cap) {
    std::vector<CycleSignature> out;
    for (const Nat& e : mc.elements()) {
        if (mpz_odd_p(e.get_mpz_t())) out.push_back(decompose(e, mc.map(), odd_step_cap));
    }
    return out;
}

Nat closed_form_z(const MapParams& map, const std::vector<std::uint64_t>& y_profile) {
    const std::uint64_t x = y_profile.size();
    Nat sum = 0;
    std::uint64_t prefix = 0;
    for (std::uint64_t t = 0; t < x; ++t) {
        sum += pow_ui(static_cast<long>(map.q()), x - 1 - t) * pow2(prefix);
        prefix += y_profile[t];
    }
    return static_cast<long>(map.r()) * sum;
}

bool verify_signature(const CycleSignature& sig) {
    if (sgn(sig.m) <= 0 || mpz_even_p(sig.m.get_mpz_t())) return false;
    if (sig.x != sig.y_profile.size() || sig.x == 0) return false;
    const std::uint64_t total =
        std::accumulate(sig.y_profile.begin(), sig.y_profile.end(), std::uint64_t{0});
    if (total != sig.y) return false;

    if (sig.m * (pow2(sig.y) - pow_ui(static_cast<long>(sig.map.q()), sig.x)) != sig.z) {
        return false;
    }

    Nat current = sig.m;
    for (std::uint64_t halvings : sig.y_profile) {
        auto next = odd_successor(current, sig.map);
        if (next.halvings != halvings) return false;
        current = std::move(next.value);
    }
    return current == sig.m;
}

}  // namespace collatz
