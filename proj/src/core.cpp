#include "collatz/core.hpp"

#include <charconv>
#include <set>

namespace collatz {

MapParams MapParams::make(std::int64_t q, std::int64_t r, std::string label) {
    if (q < 3 || q % 2 == 0) {
        throw DomainError("map multiplier q must be odd and >= 3, got " + std::to_string(q));
    }
    if (r == 0 || r % 2 == 0) {
        throw DomainError("map addend r must be odd and nonzero, got " + std::to_string(r));
    }
    if (q + r < 1) {
        throw DomainError("map must send positive integers to positive integers (q + r >= 1)");
    }
    if (label.empty()) {
        label = std::to_string(q) + "n" + (r > 0 ? "+" : "") + std::to_string(r);
    }
    return MapParams(q, r, std::move(label));
}

namespace {

std::int64_t parse_i64(std::string_view text) {
    std::int64_t value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw DomainError("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

MapParams MapParams::parse(std::string_view text) {
    if (text == "standard" || text == "3n+1") return standard();
    if (text == "3n-1") return three_n_minus_one();
    if (text == "5n+1") return five_n_plus_one();
    auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        throw DomainError("map must be a preset or 'q,r', got '" + std::string(text) + "'");
    }
    return make(parse_i64(text.substr(0, comma)), parse_i64(text.substr(comma + 1)));
}

Nat pow2(std::uint64_t bits) {
    Nat out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, bits);
    return out;
}

Nat parse_integer(std::string_view text) {
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
        throw DomainError("not a decimal integer: '" + std::string(text) + "'");
    }
    std::string s(text.front() == '+' ? text.substr(1) : text);
    return Nat(s, 10);
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::ReachedOne: return "ReachedOne";
        case StopReason::CycleClosed: return "CycleClosed";
        case StopReason::StepCapHit: return "StepCapHit";
        case StopReason::ValueCapHit: return "ValueCapHit";
    }
    return "?";
}

namespace {

void require_positive(const Nat& n, const char* what) {
    if (sgn(n) <= 0) {
        throw DomainError(std::string(what) + " requires n >= 1, got " + n.get_str());
    }
}

}  // namespace

Nat step(const Nat& n, const MapParams& map) {
    require_positive(n, "step");
    if (mpz_even_p(n.get_mpz_t())) {
        Nat half;
        mpz_tdiv_q_2exp(half.get_mpz_t(), n.get_mpz_t(), 1);
        return half;
    }
    return n * static_cast<long>(map.q()) + static_cast<long>(map.r());
}

Nat iterate(Nat n, std::uint64_t i, const MapParams& map) {
    require_positive(n, "iterate");
    for (; i > 0; --i) n = step(n, map);
    return n;
}

TrajectoryRecord trajectory(const Nat& n, const MapParams& map, std::uint64_t step_cap,
                            const Nat& value_cap) {
    require_positive(n, "trajectory");
    if (step_cap < 1) throw DomainError("trajectory requires step_cap >= 1");

    TrajectoryRecord rec;
    rec.start = n;
    rec.values.push_back(n);
    rec.max_excursion = n;
    if (n > value_cap) {
        rec.stop_reason = StopReason::ValueCapHit;
        return rec;
    }

    std::set<Nat> seen{n};
    Nat current = n;
    for (;;) {
        current = step(current, map);
        ++rec.total_steps;
        rec.values.push_back(current);
        if (current > rec.max_excursion) rec.max_excursion = current;

        if (current > value_cap) {
            rec.stop_reason = StopReason::ValueCapHit;
            break;
        }
        if (!seen.insert(current).second) {
            rec.stop_reason = StopReason::CycleClosed;
            break;
        }
        if (map.is_standard() && current == 1) {
            rec.stop_reason = StopReason::ReachedOne;
            break;
        }
        if (rec.total_steps == step_cap) {
            rec.stop_reason = StopReason::StepCapHit;
            break;
        }
    }
    return rec;
}

std::uint64_t v2(const Nat& n) {
    require_positive(n, "v2");
    return mpz_scan1(n.get_mpz_t(), 0);
}

OddSuccessor odd_successor(const Nat& m, const MapParams& map) {
    require_positive(m, "odd_successor");
    if (mpz_even_p(m.get_mpz_t())) {
        throw DomainError("odd_successor requires an odd value, got " + m.get_str());
    }
    Nat lifted = m * static_cast<long>(map.q()) + static_cast<long>(map.r());
    OddSuccessor out;
    out.halvings = mpz_scan1(lifted.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(out.value.get_mpz_t(), lifted.get_mpz_t(), out.halvings);
    return out;
}

}  // namespace collatz
