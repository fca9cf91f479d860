#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "collatz/constraints.hpp"
#include "collatz/core.hpp"
#include "collatz/cycle.hpp"
#include "collatz/decomposition.hpp"
#include "collatz/search.hpp"

namespace collatz::cli {

namespace {

using nlohmann::json;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Outcome {
    json params = json::object();
    json result = json::object();
    std::vector<LineVerdict> verdicts;
    Table table;
    int exit_code = kExitOk;
};

struct Common {
    std::string map = "3,1";
    std::uint64_t step_cap = kDefaultStepCap;
    unsigned value_cap_bits = kDefaultValueCapBits;
    std::string format = "json";
};

/// Input rejected before any computation ran.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

json nat_list(const std::vector<Nat>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(v.get_str());
    return out;
}

json map_json(const MapParams& map) {
    return {{"q", map.q()}, {"r", map.r()}, {"label", map.label()}};
}

json verdicts_json(const std::vector<LineVerdict>& verdicts) {
    json out = json::array();
    for (const auto& v : verdicts) {
        out.push_back({{"name", v.name}, {"verdict", to_string(v.verdict)}, {"witness", v.witness}});
    }
    return out;
}

bool any_fails(const std::vector<LineVerdict>& verdicts) {
    return std::any_of(verdicts.begin(), verdicts.end(),
                       [](const LineVerdict& v) { return v.verdict == Verdict::Fails; });
}

Table index_table(const std::vector<Nat>& values) {
    Table t{{"index", "value"}, {}};
    for (std::size_t i = 0; i < values.size(); ++i) t.rows.push_back({std::to_string(i), values[i].get_str()});
    return t;
}

std::string join(const std::vector<Nat>& values, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += values[i].get_str();
    }
    return out;
}

// Accepts "4,2,1" as well as separate tokens.
std::vector<Nat> parse_elements(const std::vector<std::string>& tokens) {
    std::vector<Nat> out;
    for (const auto& token : tokens) {
        std::stringstream ss(token);
        std::string piece;
        while (std::getline(ss, piece, ',')) {
            if (!piece.empty()) out.push_back(parse_integer(piece));
        }
    }
    if (out.empty()) throw InvalidInput("expected at least one cycle element");
    return out;
}

std::uint64_t partitions_from_env(std::uint64_t hint) {
    const char* env = std::getenv("COLLATZ_LAB_THREADS");
    if (env == nullptr || *env == '\0') return hint;
    Nat value = parse_integer(env);
    if (value < 1 || !value.fits_ulong_p()) {
        throw InvalidInput(std::string("COLLATZ_LAB_THREADS must be a positive integer, got ") + env);
    }
    return value.get_ui();
}

std::uint64_t to_u64(const Nat& n, const char* what) {
    if (sgn(n) < 0 || !n.fits_ulong_p()) {
        throw InvalidInput(std::string(what) + " must fit in 64 bits, got " + n.get_str());
    }
    return n.get_ui();
}

json solutions_json(const std::vector<ExponentPair>& solutions) {
    json out = json::array();
    for (auto [x, y] : solutions) out.push_back({x, y});
    return out;
}

Table solutions_table(const std::vector<ExponentPair>& solutions) {
    Table t{{"x", "y"}, {}};
    for (auto [x, y] : solutions) t.rows.push_back({std::to_string(x), std::to_string(y)});
    return t;
}

// Scalars of the result as key,value rows (for payloads without a sequence).
Table scalar_table(const json& result) {
    Table t{{"key", "value"}, {}};
    for (auto it = result.begin(); it != result.end(); ++it) {
        if (it->is_structured()) continue;
        t.rows.push_back({it.key(), it->is_string() ? it->get<std::string>() : it->dump()});
    }
    return t;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void render_csv(std::ostream& out, const Table& table) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << csv_field(cells[i]);
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

void render_text(std::ostream& out, const json& envelope) {
    out << "command: " << envelope["command"].get<std::string>() << '\n';
    for (auto it = envelope["result"].begin(); it != envelope["result"].end(); ++it) {
        out << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    }
    for (const auto& v : envelope["verdicts"]) {
        out << "[" << v["verdict"].get<std::string>() << "] " << v["name"].get<std::string>()
            << ": " << v["witness"].get<std::string>() << '\n';
    }
    out << "elapsed_ms: " << envelope["elapsed_ms"].dump() << '\n';
}

// ---- subcommands ----------------------------------------------------------

void cmd_trajectory(const Common& c, const std::string& n_text, Outcome& o) {
    const auto map = MapParams::parse(c.map);
    const Nat n = parse_integer(n_text);
    o.params = {{"n", n.get_str()}, {"map", map_json(map)}, {"step_cap", c.step_cap},
                {"value_cap_bits", c.value_cap_bits}};
    auto rec = trajectory(n, map, c.step_cap, pow2(c.value_cap_bits));
    o.result = {{"start", rec.start.get_str()},
                {"values", nat_list(rec.values)},
                {"stop_reason", to_string(rec.stop_reason)},
                {"max_excursion", rec.max_excursion.get_str()},
                {"total_steps", rec.total_steps}};
    o.table = index_table(rec.values);
    if (rec.stop_reason == StopReason::StepCapHit || rec.stop_reason == StopReason::ValueCapHit) {
        o.exit_code = kExitCapExhausted;
    }
}

void cmd_cycles(const Common& c, std::uint64_t seed_max, std::uint64_t partitions, Outcome& o) {
    const auto map = MapParams::parse(c.map);
    partitions = partitions_from_env(partitions);
    o.params = {{"map", map_json(map)}, {"seed_max", seed_max}, {"step_cap", c.step_cap},
                {"value_cap_bits", c.value_cap_bits}, {"partitions", partitions}};
    SearchOptions opt;
    opt.partition_hint = partitions;
    auto rep = find_cycles(map, seed_max, c.step_cap, pow2(c.value_cap_bits), opt);

    json cycles = json::array();
    o.table = {{"minimum", "length", "odd_count", "even_count", "elements"}, {}};
    for (const auto& mc : rep.cycles) {
        std::uint64_t odd = 0;
        for (const auto& e : mc.elements()) odd += mpz_odd_p(e.get_mpz_t()) ? 1 : 0;
        const std::uint64_t even = mc.size() - odd;
        cycles.push_back({{"minimum", mc.minimum().get_str()},
                          {"length", mc.size()},
                          {"odd_count", odd},
                          {"even_count", even},
                          {"elements", nat_list(mc.elements())}});
        o.table.rows.push_back({mc.minimum().get_str(), std::to_string(mc.size()),
                                std::to_string(odd), std::to_string(even), join(mc.elements(), " ")});

        const std::string tag = "cycle_" + mc.minimum().get_str();
        auto props = check_preliminaries(mc);
        o.verdicts.push_back({tag + "_periodic", props.periodic.verdict, props.periodic.witness});

        bool signatures_ok = true;
        std::string witness = "x = " + std::to_string(odd) + ", y = " + std::to_string(even);
        for (const auto& sig : signatures_for_cycle(mc)) {
            if (!verify_signature(sig) || sig.x != odd || sig.y != even) {
                signatures_ok = false;
                witness = "signature of " + sig.m.get_str() + " fails";
                break;
            }
        }
        o.verdicts.push_back({tag + "_signatures", verdict_of(signatures_ok), witness});
    }
    std::vector<std::uint64_t> diverged = rep.diverged_examples;
    o.result = {{"cycles", cycles},
                {"cycle_count", rep.cycles.size()},
                {"capped_seed_count", rep.capped_seed_count},
                {"diverged_examples", diverged},
                {"partition_count", rep.partition_count}};
    if (any_fails(o.verdicts)) o.exit_code = kExitCheckFailed;
}

void cmd_normalize(const Common& c, const std::vector<std::string>& tokens, Outcome& o) {
    const auto map = MapParams::parse(c.map);
    const auto elements = parse_elements(tokens);
    o.params = {{"elements", nat_list(elements)}, {"map", map_json(map)}};
    auto mc = min_normalize(Cycle(elements, map));
    o.result = {{"elements", nat_list(mc.elements())},
                {"minimum", mc.minimum().get_str()},
                {"k", mc.k() ? json(mc.k()->get_str()) : json(nullptr)}};
    o.table = index_table(mc.elements());
}

void cmd_check_props(const Common& c, const std::vector<std::string>& tokens, Outcome& o) {
    const auto map = MapParams::parse(c.map);
    const auto elements = parse_elements(tokens);
    o.params = {{"elements", nat_list(elements)}, {"map", map_json(map)}};
    auto mc = min_normalize(Cycle(elements, map));
    auto rep = check_preliminaries(mc);
    o.result = {{"elements", nat_list(mc.elements())},
                {"k", mc.k() ? json(mc.k()->get_str()) : json(nullptr)},
                {"m2", rep.m2.get_str()},
                {"wraparound", rep.wraparound}};
    o.verdicts = rep.all();
    o.table = {{"property", "verdict", "witness"}, {}};
    for (const auto& v : o.verdicts) o.table.rows.push_back({v.name, std::string(to_string(v.verdict)), v.witness});
    if (any_fails(o.verdicts)) o.exit_code = kExitCheckFailed;
}

void cmd_decompose(const Common& c, const std::string& m_text, std::uint64_t odd_step_cap,
                   Outcome& o) {
    const auto map = MapParams::parse(c.map);
    const Nat m = parse_integer(m_text);
    o.params = {{"m", m.get_str()}, {"map", map_json(map)}, {"odd_step_cap", odd_step_cap}};
    auto sig = decompose(m, map, odd_step_cap);
    const Nat closed = closed_form_z(map, sig.y_profile);
    o.result = {{"m", sig.m.get_str()},
                {"x", sig.x},
                {"y", sig.y},
                {"y_profile", sig.y_profile},
                {"z_steps", nat_list(sig.z_steps)},
                {"z", sig.z.get_str()}};
    const Nat gap = pow2(sig.y) - pow_ui(static_cast<long>(map.q()), sig.x);
    o.verdicts.push_back({"signature_identity", verdict_of(verify_signature(sig)),
                          "m(2^y - q^x) = " + Nat(m * gap).get_str() + ", z = " + sig.z.get_str()});
    o.verdicts.push_back({"closed_form_z", verdict_of(closed == sig.z), "closed form = " + closed.get_str()});
    o.table = {{"step", "halvings", "z"}, {}};
    for (std::size_t i = 0; i < sig.y_profile.size(); ++i) {
        o.table.rows.push_back({std::to_string(i), std::to_string(sig.y_profile[i]), sig.z_steps[i].get_str()});
    }
    if (any_fails(o.verdicts)) o.exit_code = kExitCheckFailed;
}

void cmd_replay(const Common& c, const std::vector<std::string>& tokens, std::uint64_t odd_step_cap,
                Outcome& o) {
    const auto map = MapParams::parse(c.map);
    const auto elements = parse_elements(tokens);
    o.params = {{"elements", nat_list(elements)}, {"map", map_json(map)}, {"odd_step_cap", odd_step_cap}};
    auto mc = min_normalize(Cycle(elements, map));
    auto rep = replay_theorem(mc, odd_step_cap);
    o.result = {{"m0", rep.m0.get_str()},
                {"k", rep.k.get_str()},
                {"x", rep.x},
                {"y", rep.y},
                {"z0", rep.z0.get_str()},
                {"m2", rep.m2.get_str()},
                {"z1", rep.z1 ? json(rep.z1->get_str()) : json(nullptr)},
                {"n_case", rep.derivation ? json(rep.derivation->n_case.get_str()) : json(nullptr)},
                {"residual", rep.derivation ? json(rep.derivation->residual.get_str()) : json(nullptr)},
                {"trivial_cycle_flag", rep.trivial_cycle_flag}};
    o.verdicts = rep.lines();
    o.table = {{"line", "verdict", "witness"}, {}};
    for (const auto& v : o.verdicts) o.table.rows.push_back({v.name, std::string(to_string(v.verdict)), v.witness});
    if (any_fails(o.verdicts)) o.exit_code = kExitCheckFailed;
}

void cmd_diophantine(const std::string& c_text, std::uint64_t x_max, std::uint64_t y_max, Outcome& o) {
    const Nat target = parse_integer(c_text);
    o.params = {{"c", target.get_str()}, {"x_max", x_max}, {"y_max", y_max}};
    auto set = enumerate_pow_gap(target, x_max, y_max);
    o.result = {{"equation", "2^y - 3^x = c"},
                {"solutions", solutions_json(set.solutions)},
                {"solution_count", set.solutions.size()}};
    o.table = solutions_table(set.solutions);
}

void cmd_catalan(std::uint64_t x_max, std::uint64_t y_max, Outcome& o) {
    o.params = {{"x_max", x_max}, {"y_max", y_max}};
    auto all = catalan_check(x_max, y_max);
    auto positive = positive_x_only(all);
    o.result = {{"equation", "3^x + 1 = 2^y"},
                {"solutions", solutions_json(all.solutions)},
                {"solutions_x_ge_1", solutions_json(positive.solutions)}};
    bool none_beyond = std::all_of(all.solutions.begin(), all.solutions.end(),
                                   [](const ExponentPair& p) { return p.first <= 1; });
    o.verdicts.push_back({"no_solution_x_gt_1_within_bounds", verdict_of(none_beyond),
                          std::to_string(all.solutions.size()) + " solutions with x <= " +
                              std::to_string(x_max) + ", y <= " + std::to_string(y_max)});
    o.table = solutions_table(all.solutions);
    if (any_fails(o.verdicts)) o.exit_code = kExitCheckFailed;
}

void cmd_verify_range(const Common& c, const std::string& n_text, std::uint64_t partitions,
                      bool no_table, Outcome& o) {
    const auto map = MapParams::parse(c.map);
    const Nat n = parse_integer(n_text);
    partitions = partitions_from_env(partitions);
    o.params = {{"n", n.get_str()}, {"map", map_json(map)}, {"partitions", partitions},
                {"lookup_table", !no_table}, {"step_cap", c.step_cap},
                {"value_cap_bits", c.value_cap_bits}};
    RangeOptions opt;
    opt.partition_hint = partitions;
    opt.use_lookup_table = !no_table;
    opt.step_cap = c.step_cap;
    opt.value_cap_bits = c.value_cap_bits;
    auto rep = verify_range(to_u64(n, "N"), map, opt);
    o.result = {{"n_max", rep.n_max},
                {"verified_count", rep.verified_count},
                {"max_excursion", rep.max_excursion.get_str()},
                {"max_excursion_seed", rep.max_excursion_seed},
                {"max_total_steps", rep.max_total_steps},
                {"max_total_steps_seed", rep.max_total_steps_seed},
                {"partition_count", rep.partition_count}};
    o.verdicts.push_back({"all_seeds_verified", verdict_of(rep.verified_count == rep.n_max),
                          std::to_string(rep.verified_count) + " of " + std::to_string(rep.n_max)});
    o.table = scalar_table(o.result);
    if (any_fails(o.verdicts)) o.exit_code = kExitCheckFailed;
}

json make_envelope(const std::string& command, const Outcome& o, double elapsed_ms) {
    return {{"schema_version", kSchemaVersion},
            {"command", command},
            {"params", o.params},
            {"result", o.result},
            {"verdicts", verdicts_json(o.verdicts)},
            {"elapsed_ms", elapsed_ms}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Collatz cycle laboratory", "collatz_lab"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&common](CLI::App* sub, bool with_map = true) {
        if (with_map) {
            sub->add_option("--map", common.map, "map preset (standard, 3n-1, 5n+1) or q,r")
                ->capture_default_str();
            sub->add_option("--step-cap", common.step_cap, "maximum map applications")
                ->capture_default_str();
            sub->add_option("--value-cap-bits", common.value_cap_bits, "values above 2^bits stop a walk")
                ->capture_default_str();
        }
        sub->add_option("--format", common.format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}))
            ->capture_default_str();
    };

    std::string number;
    std::vector<std::string> elements;
    std::uint64_t seed_max = 1000;
    std::uint64_t partitions = 1;
    std::uint64_t odd_step_cap = kDefaultOddStepCap;
    std::uint64_t x_max = 40;
    std::uint64_t y_max = 40;
    bool no_table = false;

    std::map<std::string, std::function<void(Outcome&)>> handlers;

    auto* traj = app.add_subcommand("trajectory", "iterate from n until 1, a repeat, or a cap");
    traj->add_option("n", number, "start value")->required();
    add_common(traj);
    handlers["trajectory"] = [&](Outcome& o) { cmd_trajectory(common, number, o); };

    auto* cyc = app.add_subcommand("cycles", "census of cycles reachable from seeds 1..seed-max");
    cyc->add_option("--seed-max", seed_max)->capture_default_str();
    cyc->add_option("--partitions", partitions)->capture_default_str();
    add_common(cyc);
    handlers["cycles"] = [&](Outcome& o) { cmd_cycles(common, seed_max, partitions, o); };

    auto* norm = app.add_subcommand("normalize", "rotate a cycle so its minimum comes first");
    norm->add_option("elements", elements, "cycle elements, e.g. 4,2,1")->required();
    add_common(norm);
    handlers["normalize"] = [&](Outcome& o) { cmd_normalize(common, elements, o); };

    auto* props = app.add_subcommand("check-props", "evaluate the preliminary cycle properties");
    props->add_option("elements", elements)->required();
    add_common(props);
    handlers["check-props"] = [&](Outcome& o) { cmd_check_props(common, elements, o); };

    auto* dec = app.add_subcommand("decompose", "signature (x, y, y-profile, z) of an odd cycle element");
    dec->add_option("m", number)->required();
    dec->add_option("--odd-step-cap", odd_step_cap)->capture_default_str();
    add_common(dec);
    handlers["decompose"] = [&](Outcome& o) { cmd_decompose(common, number, odd_step_cap, o); };

    auto* replay = app.add_subcommand("replay-theorem", "evaluate the identity chain on a standard-map cycle");
    replay->add_option("elements", elements)->required();
    replay->add_option("--odd-step-cap", odd_step_cap)->capture_default_str();
    add_common(replay);
    handlers["replay-theorem"] = [&](Outcome& o) { cmd_replay(common, elements, odd_step_cap, o); };

    auto* dio = app.add_subcommand("diophantine", "solve 2^y - 3^x = c within bounds");
    dio->add_option("c", number)->required();
    dio->add_option("--x-max", x_max)->capture_default_str();
    dio->add_option("--y-max", y_max)->capture_default_str();
    add_common(dio, false);
    handlers["diophantine"] = [&](Outcome& o) { cmd_diophantine(number, x_max, y_max, o); };

    auto* cat = app.add_subcommand("catalan", "solve 3^x + 1 = 2^y within bounds");
    std::uint64_t cat_x_max = 60;
    std::uint64_t cat_y_max = 60;
    cat->add_option("--x-max", cat_x_max)->capture_default_str();
    cat->add_option("--y-max", cat_y_max)->capture_default_str();
    add_common(cat, false);
    handlers["catalan"] = [&](Outcome& o) { cmd_catalan(cat_x_max, cat_y_max, o); };

    auto* vr = app.add_subcommand("verify-range", "verify every seed in 1..N reaches 1");
    vr->add_option("n", number, "upper bound N")->required();
    vr->add_option("--partitions", partitions)->capture_default_str();
    vr->add_flag("--no-table", no_table, "disable the small-value lookup table");
    add_common(vr);
    handlers["verify-range"] = [&](Outcome& o) { cmd_verify_range(common, number, partitions, no_table, o); };

    Outcome outcome;
    std::string command;
    auto fail = [&](int code, const std::string& kind, const std::string& message) {
        err << "error: " << message << '\n';
        outcome.result = {{"error", {{"kind", kind}, {"message", message}}}};
        outcome.verdicts.clear();
        outcome.exit_code = code;
    };

    const auto started = std::chrono::steady_clock::now();
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        command = app.get_subcommands().front()->get_name();
        handlers.at(command)(outcome);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        fail(kExitInvalidInput, "InvalidArguments", e.what());
    } catch (const DecompositionError& e) {
        const bool cap = e.kind() == DecompositionError::Kind::CapExceeded;
        fail(cap ? kExitCapExhausted : kExitInvalidInput, std::string(to_string(e.kind())), e.what());
        outcome.result["error"]["witness"] = e.witness().get_str();
    } catch (const CapExhausted& e) {
        fail(kExitCapExhausted, "CapExhausted", e.what());
        outcome.result["error"]["seed"] = e.seed();
    } catch (const TheoremReplayError& e) {
        fail(kExitInvalidInput, "NotStandardMap", e.what());
    } catch (const std::invalid_argument& e) {
        fail(kExitInvalidInput, "InvalidInput", e.what());
    }
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - started;

    if (command.empty()) {
        auto subs = app.get_subcommands();
        command = subs.empty() ? "" : subs.front()->get_name();
    }
    json envelope = make_envelope(command, outcome, elapsed.count());
    const bool errored = outcome.result.contains("error");
    if (common.format == "csv" && !errored) {
        render_csv(out, outcome.table);
    } else if (common.format == "text") {
        render_text(out, envelope);
    } else {
        out << envelope.dump(2) << '\n';
    }
    return outcome.exit_code;
}

}  // namespace collatz::cli
