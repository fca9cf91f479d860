#include "collatz/constraints.hpp"

namespace collatz {

PowGapSolutionSet enumerate_pow_gap(const Nat& c, std::uint64_t x_max, std::uint64_t y_max) {
    PowGapSolutionSet out{c, x_max, y_max, {}};
    // For fixed x, 2^y = c + 3^x pins y down, so one pass over x is exhaustive.
    Nat three_x = 1;
    for (std::uint64_t x = 0; x <= x_max; ++x) {
        Nat target = c + three_x;
        if (sgn(target) > 0 && mpz_popcount(target.get_mpz_t()) == 1) {
            const std::uint64_t y = mpz_scan1(target.get_mpz_t(), 0);
            if (y <= y_max) out.solutions.emplace_back(x, y);
        }
        three_x *= 3;
    }
    return out;
}

PowGapSolutionSet catalan_check(std::uint64_t x_max, std::uint64_t y_max) {
    return enumerate_pow_gap(Nat(1), x_max, y_max);
}

PowGapSolutionSet positive_x_only(PowGapSolutionSet set) {
    std::erase_if(set.solutions, [](const ExponentPair& p) { return p.first == 0; });
    return set;
}

bool power_gap_identity(const MapParams& map, std::uint64_t x, std::uint64_t y, const Nat& m,
                        const Nat& z) {
    return pow_ui(static_cast<long>(map.q()), x) * m + z == pow2(y) * m;
}

namespace {

std::string cmp_witness(const Nat& lhs, const char* op, const Nat& rhs) {
    return lhs.get_str() + " " + op + " " + rhs.get_str();
}

}  // namespace

DerivationReport evaluate_derivation(const Nat& k, const Nat& z0, const Nat& z1) {
    DerivationReport d;
    d.k = k;
    d.z0 = z0;
    d.z1 = z1;
    d.n_case = 2 * z0 - z1;
    d.residual = (2 * z0 - z1) + k * (3 * z0 - 2 * z1);
    const Nat& n = d.n_case;

    d.residual_zero = {"residual_zero", verdict_of(d.residual == 0),
                       "(2z0-z1)+k(3z0-2z1) = " + d.residual.get_str()};
    d.z1_le_2z0 = {"z1_le_2z0", verdict_of(z1 <= 2 * z0), cmp_witness(z1, "vs 2z0 =", Nat(2 * z0))};

    Nat lhs = (k + 1) * n;
    Nat rhs = k * (z0 - n);
    d.kn_identity = {"kn_identity", verdict_of(lhs == rhs),
                     "(k+1)n = " + lhs.get_str() + ", k(z0-n) = " + rhs.get_str()};

    d.n_ge_k = {"n_ge_k", verdict_of(n >= k), cmp_witness(n, "vs k =", k)};

    bool divides = false;
    if (k == 0) {
        divides = (n == 0);
    } else {
        divides = mpz_divisible_p(n.get_mpz_t(), k.get_mpz_t()) != 0;
    }
    d.k_divides_n = {"k_divides_n", verdict_of(divides), "k = " + k.get_str() + ", n = " + n.get_str()};

    Nat two_n = 2 * n;
    d.z0_gt_2n = {"z0_gt_2n", verdict_of(z0 > two_n), cmp_witness(z0, "vs 2n =", two_n)};
    d.z0_lt_2n_plus_2 = {"z0_lt_2n_plus_2", verdict_of(z0 < two_n + 2),
                         cmp_witness(z0, "vs 2n+2 =", Nat(two_n + 2))};
    d.z0_eq_2n_plus_1 = {"z0_eq_2n_plus_1", verdict_of(z0 == two_n + 1),
                         cmp_witness(z0, "vs 2n+1 =", Nat(two_n + 1))};
    return d;
}

namespace {

// Names of the derivation lines, needed when they are skipped.
DerivationReport named_placeholder() {
    DerivationReport d;
    d.residual_zero.name = "residual_zero";
    d.z1_le_2z0.name = "z1_le_2z0";
    d.kn_identity.name = "kn_identity";
    d.n_ge_k.name = "n_ge_k";
    d.k_divides_n.name = "k_divides_n";
    d.z0_gt_2n.name = "z0_gt_2n";
    d.z0_lt_2n_plus_2.name = "z0_lt_2n_plus_2";
    d.z0_eq_2n_plus_1.name = "z0_eq_2n_plus_1";
    return d;
}

}  // namespace

std::vector<LineVerdict> TheoremReport::lines() const {
    std::vector<LineVerdict> out{rational_m0, rational_m2};
    if (derivation) {
        for (auto& line : derivation->lines()) out.push_back(line);
    } else {
        for (auto& line : named_placeholder().lines()) {
            out.push_back({line.name, Verdict::NotApplicable, "z1 undefined (m2 even)"});
        }
    }
    out.push_back(z0_equals_m0);
    out.push_back(catalan_identity);
    out.push_back(final_reduction);
    return out;
}

TheoremReport replay_theorem(const MinNormalCycle& mc, std::uint64_t odd_step_cap) {
    return replay_theorem(mc.minimum(), mc.at(2), mc.map(), odd_step_cap);
}

TheoremReport replay_theorem(const Nat& m0, const Nat& m2, const MapParams& map,
                             std::uint64_t odd_step_cap) {
    if (!map.is_standard()) {
        throw TheoremReplayError("replay_theorem requires the standard map (q=3, r=1), got " +
                                 map.label());
    }
    if (sgn(m0) <= 0 || sgn(m2) <= 0) throw DomainError("replay_theorem requires m0, m2 >= 1");
    TheoremReport rep;
    rep.m0 = m0;
    if (mpz_even_p(m0.get_mpz_t())) {
        throw TheoremReplayError("replay_theorem: m0 = " + m0.get_str() + " is even");
    }
    rep.k = (m0 - 1) / 2;

    CycleSignature sig0 = decompose(rep.m0, map, odd_step_cap);
    rep.x = sig0.x;
    rep.y = sig0.y;
    rep.z0 = sig0.z;

    const Nat three_x = pow_ui(3, rep.x);
    const Nat two_y = pow2(rep.y);
    const Nat m0_form = 2 * rep.k + 1;
    const Nat m2_form = 3 * rep.k + 2;

    // 3^x + z0/(2k+1) = 2^y  <=>  3^x (2k+1) + z0 = 2^y (2k+1)
    rep.rational_m0 = {"rational_m0", verdict_of(three_x * m0_form + rep.z0 == two_y * m0_form),
                       "3^" + std::to_string(rep.x) + " + " + rep.z0.get_str() + "/" +
                           m0_form.get_str() + " vs 2^" + std::to_string(rep.y)};

    rep.m2 = m2;
    if (mpz_odd_p(rep.m2.get_mpz_t())) {
        CycleSignature sig2 = decompose(rep.m2, map, odd_step_cap);
        rep.z1 = sig2.z;
        const bool same_exponents = sig2.x == rep.x && sig2.y == rep.y;
        const bool holds =
            same_exponents && three_x * m2_form + *rep.z1 == two_y * m2_form && rep.m2 == m2_form;
        rep.rational_m2 = {"rational_m2", verdict_of(holds),
                           "3^" + std::to_string(sig2.x) + " + " + rep.z1->get_str() + "/" +
                               m2_form.get_str() + " vs 2^" + std::to_string(sig2.y)};
        rep.derivation = evaluate_derivation(rep.k, rep.z0, *rep.z1);
    } else {
        rep.trivial_cycle_flag = true;
        rep.rational_m2 = {"rational_m2", Verdict::NotApplicable,
                           "m2 = " + rep.m2.get_str() + " is even"};
    }

    const bool z0_is_m0 = rep.z0 == rep.m0;
    const bool catalan = three_x + 1 == two_y;
    rep.z0_equals_m0 = {"z0_equals_m0", verdict_of(z0_is_m0),
                        "z0 = " + rep.z0.get_str() + ", m0 = " + rep.m0.get_str()};
    rep.catalan_identity = {"catalan_identity", verdict_of(catalan),
                            "3^" + std::to_string(rep.x) + " + 1 = " + Nat(three_x + 1).get_str() +
                                ", 2^" + std::to_string(rep.y) + " = " + two_y.get_str()};
    rep.final_reduction = {"final_reduction",
                           z0_is_m0 ? verdict_of(catalan) : Verdict::NotApplicable,
                           z0_is_m0 ? "z0 = m0 and 3^x + 1 " + std::string(catalan ? "=" : "!=") + " 2^y"
                                    : "premise z0 = m0 does not hold"};
    return rep;
}

}  // namespace collatz
