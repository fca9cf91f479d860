#pragma once

// Test-only reference implementations. These deliberately avoid the
// library's algorithms (Brent detection, batched odd steps, single-pass
// power-gap enumeration) so they can serve as independent checks.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Int = mpz_class;

inline Int naive_step(const Int& n, long q, long r) {
    if (n % 2 == 0) return n / 2;
    return q * n + r;
}

enum class Outcome { Cycle, StepCap, ValueCap };

struct NaiveDetection {
    Outcome outcome;
    std::vector<Int> cycle;  // rotated so the minimum comes first
};

// Seen-set walk: at index i, check value cap, then repeat, then step cap.
inline NaiveDetection naive_detect(const Int& n, long q, long r, std::uint64_t step_cap,
                                   const Int& value_cap) {
    std::map<Int, std::uint64_t> seen;
    std::vector<Int> values;
    Int v = n;
    for (std::uint64_t i = 0;; ++i) {
        if (v > value_cap) return {Outcome::ValueCap, {}};
        if (auto it = seen.find(v); it != seen.end()) {
            std::vector<Int> cyc(values.begin() + static_cast<long>(it->second), values.end());
            auto m = std::min_element(cyc.begin(), cyc.end());
            std::rotate(cyc.begin(), m, cyc.end());
            return {Outcome::Cycle, cyc};
        }
        seen.emplace(v, i);
        values.push_back(v);
        if (i == step_cap) return {Outcome::StepCap, {}};
        v = naive_step(v, q, r);
    }
}

// Full iteration to 1 under 3n+1: (total steps, peak).
inline std::pair<std::uint64_t, Int> naive_reach_one(std::uint64_t seed) {
    Int v = static_cast<unsigned long>(seed);
    Int peak = v;
    std::uint64_t steps = 0;
    while (v != 1) {
        v = naive_step(v, 3, 1);
        if (v > peak) peak = v;
        ++steps;
    }
    return {steps, peak};
}

inline Int ipow(long base, std::uint64_t e) {
    Int out = 1;
    for (std::uint64_t i = 0; i < e; ++i) out *= base;
    return out;
}

// Double loop over (x, y) in bounds.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> brute_pow_gap(const Int& c,
                                                                          std::uint64_t x_max,
                                                                          std::uint64_t y_max) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t x = 0; x <= x_max; ++x) {
        const Int three = ipow(3, x);
        for (std::uint64_t y = 0; y <= y_max; ++y) {
            if (ipow(2, y) - three == c) out.emplace_back(x, y);
        }
    }
    return out;
}

// Tracks the affine form (a*m + b) / 2^e one single step at a time around
// the cycle of odd element m. Returns (x, y, z) with z the final b.
struct AffineSignature {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    Int z;
};

inline std::optional<AffineSignature> affine_signature(const Int& m, long q, long r,
                                                       std::uint64_t max_steps) {
    AffineSignature sig;
    Int a = 1, b = 0;
    Int v = m;
    for (std::uint64_t i = 0; i < max_steps; ++i) {
        if (v % 2 != 0) {
            a *= q;
            b = q * b + r * ipow(2, sig.y);
            ++sig.x;
        } else {
            ++sig.y;
        }
        v = naive_step(v, q, r);
        if (v == m) {
            sig.z = b;
            return sig;
        }
    }
    return std::nullopt;
}

}  // namespace oracle
