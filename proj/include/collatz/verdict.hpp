#pragma once

#include <string>
#include <string_view>

namespace collatz {

enum class Verdict { Holds, Fails, NotApplicable };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::NotApplicable: return "not_applicable";
    }
    return "?";
}

inline Verdict verdict_of(bool holds) { return holds ? Verdict::Holds : Verdict::Fails; }

/// A named verdict with a human-readable witness, e.g. "m2 = 2".
struct LineVerdict {
    std::string name;
    Verdict verdict = Verdict::NotApplicable;
    std::string witness;
};

}  // namespace collatz
