#include "collatz/search.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <mutex>
#include <optional>

namespace collatz {

namespace {

using u128 = unsigned __int128;

constexpr u128 kU128Max = ~u128{0};
// Largest odd v with 3v + 1 representable.
constexpr u128 kOddStepLimit = (kU128Max - 1) / 3;
constexpr std::uint64_t kMaxTableLimit = std::uint64_t{1} << 24;

Nat to_nat(u128 v) {
    Nat hi = static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64));
    hi <<= 64;
    return hi + static_cast<unsigned long>(static_cast<std::uint64_t>(v));
}

unsigned ctz128(u128 v) {
    const auto lo = static_cast<std::uint64_t>(v);
    if (lo != 0) return static_cast<unsigned>(__builtin_ctzll(lo));
    return 64 + static_cast<unsigned>(__builtin_ctzll(static_cast<std::uint64_t>(v >> 64)));
}

class ProgressTracker {
public:
    explicit ProgressTracker(const ProgressCallback& cb) : cb_(cb) {}

    void add(std::uint64_t seeds) {
        if (!cb_ || seeds == 0) return;
        std::lock_guard lock(mu_);
        done_ += seeds;
        cb_(done_);
    }

private:
    const ProgressCallback& cb_;
    std::mutex mu_;
    std::uint64_t done_ = 0;
};

constexpr std::uint64_t kProgressChunk = 4096;

// ---- range verification -------------------------------------------------

struct FastWalk {
    u128 peak = 0;
    u128 end = 0;
    std::uint64_t steps = 0;
};

[[noreturn]] void steps_exhausted(std::uint64_t seed, std::uint64_t step_cap) {
    throw CapExhausted(seed, "seed " + std::to_string(seed) + " exceeded " +
                                 std::to_string(step_cap) + " steps");
}

[[noreturn]] void value_exhausted(std::uint64_t seed, unsigned bits) {
    throw CapExhausted(seed, "seed " + std::to_string(seed) + " exceeded 2^" + std::to_string(bits));
}

// Standard map, odd steps batched with their halvings. Runs until the value
// is <= stop_at. Returns nullopt when an odd step would overflow 128 bits.
std::optional<FastWalk> walk_fast(std::uint64_t seed, std::uint64_t stop_at,
                                  const RangeOptions& opt) {
    const bool capped = opt.value_cap_bits < 128;
    const u128 value_cap = capped ? u128{1} << opt.value_cap_bits : kU128Max;
    FastWalk w;
    u128 v = seed;
    if (v > value_cap) value_exhausted(seed, opt.value_cap_bits);
    w.peak = v;
    while (v > stop_at) {
        if ((v & 1) == 0) {
            const unsigned tz = ctz128(v);
            v >>= tz;
            w.steps += tz;
        } else {
            if (v > kOddStepLimit) return std::nullopt;
            v = 3 * v + 1;
            if (v > value_cap) value_exhausted(seed, opt.value_cap_bits);
            if (v > w.peak) w.peak = v;
            const unsigned tz = ctz128(v);
            v >>= tz;
            w.steps += 1 + tz;
        }
        if (w.steps > opt.step_cap) steps_exhausted(seed, opt.step_cap);
    }
    w.end = v;
    return w;
}

struct BigWalk {
    Nat peak;
    Nat end;
    std::uint64_t steps = 0;
};

BigWalk walk_big(std::uint64_t seed, std::uint64_t stop_at, const RangeOptions& opt) {
    const Nat value_cap = pow2(opt.value_cap_bits);
    const Nat stop = static_cast<unsigned long>(stop_at);
    BigWalk w;
    Nat v = static_cast<unsigned long>(seed);
    if (v > value_cap) value_exhausted(seed, opt.value_cap_bits);
    w.peak = v;
    while (v > stop) {
        if (mpz_even_p(v.get_mpz_t())) {
            const auto tz = mpz_scan1(v.get_mpz_t(), 0);
            mpz_tdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), tz);
            w.steps += tz;
        } else {
            v = 3 * v + 1;
            if (v > value_cap) value_exhausted(seed, opt.value_cap_bits);
            if (v > w.peak) w.peak = v;
            const auto tz = mpz_scan1(v.get_mpz_t(), 0);
            mpz_tdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), tz);
            w.steps += 1 + tz;
        }
        if (w.steps > opt.step_cap) steps_exhausted(seed, opt.step_cap);
    }
    w.end = v;
    return w;
}

std::optional<u128> to_u128(const Nat& v) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 128) return std::nullopt;
    Nat low;
    mpz_fdiv_r_2exp(low.get_mpz_t(), v.get_mpz_t(), 64);
    Nat high;
    mpz_fdiv_q_2exp(high.get_mpz_t(), v.get_mpz_t(), 64);
    return (u128{high.get_ui()} << 64) | low.get_ui();
}

// One seed walked until its value is <= stop_at.
struct SeedWalk {
    std::uint64_t steps = 0;
    std::uint64_t end = 0;
    u128 peak = 0;
    std::optional<Nat> wide_peak;  ///< set when the peak exceeds 128 bits
};

SeedWalk walk_seed(std::uint64_t seed, std::uint64_t stop_at, const RangeOptions& opt) {
    if (!opt.wide_arithmetic_only) {
        if (auto w = walk_fast(seed, stop_at, opt)) {
            return {w->steps, static_cast<std::uint64_t>(w->end), w->peak, std::nullopt};
        }
    }
    BigWalk b = walk_big(seed, stop_at, opt);
    SeedWalk out{b.steps, b.end.get_ui(), 0, std::nullopt};
    if (auto p = to_u128(b.peak)) {
        out.peak = *p;
    } else {
        out.wide_peak = std::move(b.peak);
    }
    return out;
}

// Total stopping time and trajectory peak for values 1..limit.
struct TableEntry {
    std::uint64_t steps = 0;
    std::uint64_t peak = 0;
};

// Running maxima over a set of seeds. Ties go to the smaller seed, which
// keeps merge() associative and commutative.
struct RangePartial {
    std::uint64_t verified = 0;
    u128 peak_fast = 0;
    std::optional<Nat> peak_big;
    std::uint64_t peak_seed = 0;
    std::uint64_t steps = 0;
    std::uint64_t steps_seed = 0;

    void offer_steps(std::uint64_t s, std::uint64_t seed) {
        if (steps_seed == 0 || s > steps || (s == steps && seed < steps_seed)) {
            steps = s;
            steps_seed = seed;
        }
    }

    void offer_peak(u128 p, std::uint64_t seed) {
        if (peak_big) return;
        if (peak_seed == 0 || p > peak_fast || (p == peak_fast && seed < peak_seed)) {
            peak_fast = p;
            peak_seed = seed;
        }
    }

    void offer_peak(const Nat& p, std::uint64_t seed) {
        const Nat current = peak();
        if (peak_seed == 0 || p > current || (p == current && seed < peak_seed)) {
            peak_big = p;
            peak_seed = seed;
        }
    }

    Nat peak() const { return peak_big ? *peak_big : to_nat(peak_fast); }

    void merge(const RangePartial& other) {
        verified += other.verified;
        if (other.steps_seed != 0) offer_steps(other.steps, other.steps_seed);
        if (other.peak_seed != 0) {
            if (other.peak_big) {
                offer_peak(*other.peak_big, other.peak_seed);
            } else if (peak_big) {
                offer_peak(to_nat(other.peak_fast), other.peak_seed);
            } else {
                offer_peak(other.peak_fast, other.peak_seed);
            }
        }
    }
};

std::vector<TableEntry> build_table(std::uint64_t limit, const RangeOptions& opt,
                                    RangePartial& partial, ProgressTracker& progress) {
    std::vector<TableEntry> table(limit + 1);
    if (limit == 0) return table;
    table[1] = {0, 1};
    partial.verified = 1;
    partial.offer_steps(0, 1);
    partial.offer_peak(u128{1}, 1);
    std::uint64_t pending = 1;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        // Descent: stop at the first value below n; its entry is complete.
        const SeedWalk w = walk_seed(n, n - 1, opt);
        const TableEntry& below = table[w.end];
        const u128 peak = std::max<u128>(w.peak, below.peak);
        if (w.wide_peak || peak > ~std::uint64_t{0}) {
            throw std::logic_error("lookup table peak exceeds 64 bits");
        }
        table[n] = {w.steps + below.steps, static_cast<std::uint64_t>(peak)};
        ++partial.verified;
        partial.offer_steps(table[n].steps, n);
        partial.offer_peak(peak, n);
        if (++pending == kProgressChunk) {
            progress.add(pending);
            pending = 0;
        }
    }
    progress.add(pending);
    return table;
}

RangePartial verify_segment(std::uint64_t first, std::uint64_t last,
                            const std::vector<TableEntry>& table, const RangeOptions& opt,
                            ProgressTracker& progress) {
    // With a table, stop as soon as the walk enters it; without, walk to 1.
    const std::uint64_t stop_at = table.size() > 1 ? table.size() - 1 : 1;
    const TableEntry one{0, 1};
    RangePartial partial;
    std::uint64_t pending = 0;
    for (std::uint64_t n = first; n <= last; ++n) {
        const SeedWalk w = walk_seed(n, stop_at, opt);
        const TableEntry& rest = table.size() > 1 ? table[w.end] : one;
        partial.offer_steps(w.steps + rest.steps, n);
        if (w.wide_peak) {
            partial.offer_peak(*w.wide_peak, n);
        } else {
            partial.offer_peak(std::max<u128>(w.peak, rest.peak), n);
        }
        ++partial.verified;
        if (++pending == kProgressChunk) {
            progress.add(pending);
            pending = 0;
        }
        if (n == last) break;
    }
    progress.add(pending);
    return partial;
}

}  // namespace

std::vector<std::pair<std::uint64_t, std::uint64_t>> partition_range(std::uint64_t first,
                                                                     std::uint64_t last,
                                                                     std::uint64_t parts) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    if (first > last) return out;
    const std::uint64_t count = last - first + 1;
    parts = std::clamp<std::uint64_t>(parts, 1, count);
    const std::uint64_t base = count / parts;
    const std::uint64_t extra = count % parts;
    std::uint64_t lo = first;
    for (std::uint64_t i = 0; i < parts; ++i) {
        const std::uint64_t len = base + (i < extra ? 1 : 0);
        out.emplace_back(lo, lo + len - 1);
        lo += len;
    }
    return out;
}

bool RangeVerificationReport::same_results(const RangeVerificationReport& o) const {
    return n_max == o.n_max && verified_count == o.verified_count &&
           max_excursion == o.max_excursion && max_excursion_seed == o.max_excursion_seed &&
           max_total_steps == o.max_total_steps && max_total_steps_seed == o.max_total_steps_seed;
}

RangeVerificationReport verify_range(std::uint64_t n_max, const MapParams& map,
                                     const RangeOptions& options) {
    if (n_max == 0) throw DomainError("verify_range requires N >= 1");
    if (!map.is_standard()) {
        throw DomainError("verify_range supports the standard map only (descent argument), got " +
                          map.label());
    }
    const auto started = std::chrono::steady_clock::now();
    ProgressTracker progress(options.progress);

    const std::uint64_t limit =
        options.use_lookup_table
            ? std::min({n_max, options.table_limit, kMaxTableLimit})
            : 0;
    RangePartial total;
    const auto table = build_table(limit, options, total, progress);

    const auto parts = partition_range(limit + 1, n_max, options.partition_hint);
    std::vector<std::future<RangePartial>> futures;
    futures.reserve(parts.size());
    for (auto [lo, hi] : parts) {
        futures.push_back(std::async(std::launch::async, [&, lo = lo, hi = hi] {
            return verify_segment(lo, hi, table, options, progress);
        }));
    }
    // Futures are drained in seed order, so a CapExhausted from the lowest
    // failing partition is the one that propagates.
    std::exception_ptr failure;
    std::vector<RangePartial> partials;
    for (auto& f : futures) {
        try {
            partials.push_back(f.get());
        } catch (...) {
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (const auto& p : partials) total.merge(p);

    RangeVerificationReport rep;
    rep.n_max = n_max;
    rep.verified_count = total.verified;
    rep.max_excursion = total.peak();
    rep.max_excursion_seed = total.peak_seed;
    rep.max_total_steps = total.steps;
    rep.max_total_steps_seed = total.steps_seed;
    rep.partition_count = std::max<std::uint64_t>(parts.size(), 1);
    rep.elapsed = std::chrono::steady_clock::now() - started;
    return rep;
}

// ---- cycle census --------------------------------------------------------

namespace {

struct CensusPartial {
    std::map<Nat, MinNormalCycle> cycles;
    std::uint64_t capped = 0;
    std::vector<std::uint64_t> diverged;
};

CensusPartial census_segment(const MapParams& map, std::uint64_t first, std::uint64_t last,
                             std::uint64_t step_cap, const Nat& value_cap, std::size_t sample,
                             ProgressTracker& progress) {
    CensusPartial partial;
    std::uint64_t pending = 0;
    for (std::uint64_t seed = first; seed <= last; ++seed) {
        auto found = detect_cycle(Nat(static_cast<unsigned long>(seed)), map, step_cap, value_cap);
        if (found.cycle) {
            auto mc = min_normalize(*found.cycle);
            Nat key = mc.minimum();
            partial.cycles.try_emplace(std::move(key), std::move(mc));
        } else {
            ++partial.capped;
            if (partial.diverged.size() < sample) partial.diverged.push_back(seed);
        }
        if (++pending == kProgressChunk) {
            progress.add(pending);
            pending = 0;
        }
        if (seed == last) break;
    }
    progress.add(pending);
    return partial;
}

}  // namespace

bool CycleSearchReport::same_results(const CycleSearchReport& o) const {
    return map == o.map && seed_max == o.seed_max && step_cap == o.step_cap &&
           value_cap == o.value_cap && cycles == o.cycles &&
           capped_seed_count == o.capped_seed_count && diverged_examples == o.diverged_examples;
}

CycleSearchReport find_cycles(const MapParams& map, std::uint64_t seed_max,
                              std::uint64_t step_cap, const Nat& value_cap,
                              const SearchOptions& options) {
    if (seed_max == 0) throw DomainError("find_cycles requires seed_max >= 1");
    if (step_cap == 0) throw DomainError("find_cycles requires step_cap >= 1");
    const auto started = std::chrono::steady_clock::now();
    ProgressTracker progress(options.progress);

    const auto parts = partition_range(1, seed_max, options.partition_hint);
    std::vector<std::future<CensusPartial>> futures;
    futures.reserve(parts.size());
    for (auto [lo, hi] : parts) {
        futures.push_back(std::async(std::launch::async, [&, lo = lo, hi = hi] {
            return census_segment(map, lo, hi, step_cap, value_cap, options.diverged_sample,
                                  progress);
        }));
    }

    CensusPartial merged;
    for (auto& f : futures) {
        CensusPartial p = f.get();
        merged.cycles.merge(p.cycles);
        merged.capped += p.capped;
        merged.diverged.insert(merged.diverged.end(), p.diverged.begin(), p.diverged.end());
    }
    std::sort(merged.diverged.begin(), merged.diverged.end());
    if (merged.diverged.size() > options.diverged_sample) {
        merged.diverged.resize(options.diverged_sample);
    }

    CycleSearchReport rep;
    rep.map = map;
    rep.seed_max = seed_max;
    rep.step_cap = step_cap;
    rep.value_cap = value_cap;
    for (auto& [key, mc] : merged.cycles) rep.cycles.push_back(std::move(mc));
    rep.capped_seed_count = merged.capped;
    rep.diverged_examples = std::move(merged.diverged);
    rep.partition_count = parts.size();
    rep.elapsed = std::chrono::steady_clock::now() - started;
    return rep;
}

}  // namespace collatz
