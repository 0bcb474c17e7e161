#include "summon/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string_view>
#include <variant>

#include "summon/errors.hpp"
#include "summon/lattice.hpp"

namespace summon {

const char* to_string(TaskKind k) {
    switch (k) {
        case TaskKind::Summoning: return "summoning";
        case TaskKind::Refined: return "refined";
        case TaskKind::Original: return "original";
    }
    return "?";
}

namespace {

std::string trim(std::string_view v) {
    std::size_t b = 0, e = v.size();
    while (b < e && std::isspace(static_cast<unsigned char>(v[b])) != 0) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(v[e - 1])) != 0) --e;
    return std::string(v.substr(b, e - b));
}

struct Entry {
    int line = 0;
    std::string key;
    std::string value;
};

[[noreturn]] void fail_at(int line, const std::string& reason) {
    throw input_error("line " + std::to_string(line) + ": " + reason);
}

Coord parse_coord(int line, std::string_view text) {
    const std::string s = trim(text);
    Coord v = 0;
    const char* last = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), last, v);
    if (ec == std::errc::result_out_of_range) fail_at(line, "integer '" + s + "' out of range");
    if (ec != std::errc() || p != last) fail_at(line, "malformed integer '" + s + "'");
    return v;
}

std::vector<Coord> parse_coords(int line, std::string_view text, std::size_t n, const char* shape) {
    std::vector<Coord> out;
    std::string_view rest = text;
    for (;;) {
        const std::size_t comma = rest.find(',');
        if (comma == std::string_view::npos) {
            out.push_back(parse_coord(line, rest));
            break;
        }
        out.push_back(parse_coord(line, rest.substr(0, comma)));
        rest = rest.substr(comma + 1);
        if (out.size() > n) break;
    }
    if (out.size() != n) fail_at(line, shape);
    return out;
}

std::string coord_pair(Coord a, Coord b) { return std::to_string(a) + "," + std::to_string(b); }

const char* yn(bool b) { return b ? "yes" : "no"; }

}  // namespace

ScenarioDocument parse_scenario(const std::string& text) {
    std::vector<Entry> entries;
    int line_no = 0;
    std::size_t start = 0;
    for (;;) {
        const std::size_t nl = text.find('\n', start);
        const std::size_t end = (nl == std::string::npos) ? text.size() : nl;
        std::string_view raw(text.data() + start, end - start);
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string flat = trim(raw);
        if (!flat.empty()) {
            const std::size_t eq = flat.find('=');
            if (eq == std::string::npos) fail_at(line_no, "expected key=value");
            std::string key = trim(std::string_view(flat).substr(0, eq));
            std::string value = trim(std::string_view(flat).substr(eq + 1));
            if (key.empty()) fail_at(line_no, "empty key");
            entries.push_back({line_no, std::move(key), std::move(value)});
        }
        if (nl == std::string::npos) break;
        start = nl + 1;
    }

    const Entry* task_entry = nullptr;
    for (const Entry& e : entries) {
        if (e.key != "task") continue;
        if (task_entry != nullptr) fail_at(e.line, "duplicate key 'task'");
        task_entry = &e;
    }
    if (task_entry == nullptr) throw input_error("missing required key 'task'");

    ScenarioDocument doc;
    if (task_entry->value == "summoning") doc.kind = TaskKind::Summoning;
    else if (task_entry->value == "refined") doc.kind = TaskKind::Refined;
    else if (task_entry->value == "original") doc.kind = TaskKind::Original;
    else fail_at(task_entry->line, "task must be summoning, refined, or original");

    const auto known = [](const std::string& k) {
        return k == "task" || k == "mode" || k == "promise" || k == "D" || k == "eps" ||
               k == "start" || k == "pair" || k == "window" || k == "states" || k == "alphabet";
    };
    const auto applies = [&](const std::string& k) {
        switch (doc.kind) {
            case TaskKind::Summoning: return k == "mode" || k == "start" || k == "pair" || k == "window";
            case TaskKind::Refined:
                return k == "D" || k == "eps" || k == "promise" || k == "states" || k == "alphabet";
            case TaskKind::Original: return k == "D" || k == "states" || k == "alphabet";
        }
        return false;
    };

    for (const Entry& e : entries) {
        if (e.key == "task") continue;
        if (!known(e.key)) fail_at(e.line, "unknown key '" + e.key + "'");
        if (!applies(e.key))
            fail_at(e.line, "key '" + e.key + "' does not apply to the " +
                                std::string(to_string(doc.kind)) + " task");
        if (e.key == "mode") {
            if (doc.mode) fail_at(e.line, "duplicate key 'mode'");
            if (e.value == "single") doc.mode = CallMode::SingleGuaranteed;
            else if (e.value == "multiple") doc.mode = CallMode::MultiplePossible;
            else fail_at(e.line, "mode must be single or multiple");
        } else if (e.key == "promise") {
            if (doc.promise) fail_at(e.line, "duplicate key 'promise'");
            if (e.value == "exactly_one") doc.promise = Promise::ExactlyOne;
            else if (e.value == "at_least_one") doc.promise = Promise::AtLeastOne;
            else fail_at(e.line, "promise must be exactly_one or at_least_one");
        } else if (e.key == "D") {
            if (doc.D) fail_at(e.line, "duplicate key 'D'");
            const Coord v = parse_coord(e.line, e.value);
            if (v < 1) fail_at(e.line, "D must be >= 1");
            doc.D = v;
        } else if (e.key == "eps") {
            if (doc.eps) fail_at(e.line, "duplicate key 'eps'");
            const Coord v = parse_coord(e.line, e.value);
            if (v < 1) fail_at(e.line, "eps must be >= 1");
            doc.eps = v;
        } else if (e.key == "start") {
            if (doc.start) fail_at(e.line, "duplicate key 'start'");
            const auto c = parse_coords(e.line, e.value, 2, "start needs <t>,<x>");
            doc.start = pt(c[0], c[1]);
        } else if (e.key == "pair") {
            const char* shape = "pair needs <ct>,<cx> -> <rt>,<rx>";
            const std::string_view v(e.value);
            const std::size_t arrow = v.find("->");
            if (arrow == std::string_view::npos || v.find("->", arrow + 2) != std::string_view::npos)
                fail_at(e.line, shape);
            const auto c = parse_coords(e.line, v.substr(0, arrow), 2, shape);
            const auto r = parse_coords(e.line, v.substr(arrow + 2), 2, shape);
            doc.pairs.push_back({pt(c[0], c[1]), pt(r[0], r[1])});
        } else if (e.key == "window") {
            if (doc.window) fail_at(e.line, "duplicate key 'window'");
            const auto c = parse_coords(e.line, e.value, 3, "window needs <xmin>,<xmax>,<tmax>");
            if (c[0] > c[1]) fail_at(e.line, "window has x_min greater than x_max");
            if (c[2] < 0) fail_at(e.line, "window t_max must be >= 0");
            doc.window = TokenWindow{c[0], c[1], c[2]};
        } else if (e.key == "states") {
            if (doc.states) fail_at(e.line, "duplicate key 'states'");
            const Coord v = parse_coord(e.line, e.value);
            if (v < 1) fail_at(e.line, "states must be >= 1");
            if (v > 1024) fail_at(e.line, "states must be <= 1024");
            doc.states = static_cast<int>(v);
        } else if (e.key == "alphabet") {
            if (doc.alphabet) fail_at(e.line, "duplicate key 'alphabet'");
            const Coord v = parse_coord(e.line, e.value);
            if (v < 2) fail_at(e.line, "alphabet must be >= 2");
            if (v > 1024) fail_at(e.line, "alphabet must be <= 1024");
            doc.alphabet = static_cast<int>(v);
        }
    }

    switch (doc.kind) {
        case TaskKind::Summoning:
            if (!doc.mode) throw input_error("missing required key 'mode'");
            if (!doc.start) throw input_error("missing required key 'start'");
            if (doc.pairs.empty()) throw input_error("summoning scenario needs at least one pair");
            break;
        case TaskKind::Refined:
            if (!doc.D) throw input_error("missing required key 'D'");
            if (!doc.eps) throw input_error("missing required key 'eps'");
            if (!doc.promise) throw input_error("missing required key 'promise'");
            break;
        case TaskKind::Original:
            if (!doc.D) throw input_error("missing required key 'D'");
            break;
    }
    document_task(doc);  // cross-field invariants surface here
    return doc;
}

std::string format_scenario(const ScenarioDocument& doc) {
    std::string out = "task = ";
    out += to_string(doc.kind);
    out += "\n";
    switch (doc.kind) {
        case TaskKind::Summoning:
            if (doc.mode)
                out += std::string("mode = ") +
                       (*doc.mode == CallMode::SingleGuaranteed ? "single" : "multiple") + "\n";
            if (doc.start) out += "start = " + coord_pair(doc.start->t, doc.start->x[0]) + "\n";
            for (const CallReturnPair& p : doc.pairs)
                out += "pair = " + coord_pair(p.call.t, p.call.x[0]) + " -> " +
                       coord_pair(p.ret.t, p.ret.x[0]) + "\n";
            if (doc.window)
                out += "window = " + std::to_string(doc.window->x_min) + "," +
                       std::to_string(doc.window->x_max) + "," + std::to_string(doc.window->t_max) + "\n";
            break;
        case TaskKind::Refined:
            if (doc.D) out += "D = " + std::to_string(*doc.D) + "\n";
            if (doc.eps) out += "eps = " + std::to_string(*doc.eps) + "\n";
            if (doc.promise)
                out += std::string("promise = ") +
                       (*doc.promise == Promise::ExactlyOne ? "exactly_one" : "at_least_one") + "\n";
            break;
        case TaskKind::Original:
            if (doc.D) out += "D = " + std::to_string(*doc.D) + "\n";
            break;
    }
    if (doc.kind != TaskKind::Summoning) {
        if (doc.states) out += "states = " + std::to_string(*doc.states) + "\n";
        if (doc.alphabet) out += "alphabet = " + std::to_string(*doc.alphabet) + "\n";
    }
    return out;
}

Task document_task(const ScenarioDocument& doc) {
    switch (doc.kind) {
        case TaskKind::Summoning: {
            if (!doc.mode) throw input_error("summoning document needs a mode");
            if (!doc.start) throw input_error("summoning document needs a start point");
            return SummoningTask(*doc.start, doc.pairs, *doc.mode);
        }
        case TaskKind::Refined: {
            if (!doc.D || !doc.eps || !doc.promise)
                throw input_error("refined document needs D, eps, and promise");
            return RefinedBitTask(*doc.D, *doc.eps, *doc.promise);
        }
        case TaskKind::Original: {
            if (!doc.D) throw input_error("original document needs D");
            return OriginalSignalTask(*doc.D);
        }
    }
    throw input_error("document has no task kind");
}

TokenWindow document_window(const ScenarioDocument& doc, const SummoningTask& task) {
    if (doc.window) return *doc.window;
    if (task.start.dimension() != 1) throw input_error("token windows apply to one-dimensional tasks");
    TokenWindow w{task.start.x[0], task.start.x[0], task.start.t};
    const auto grow = [&](const Point& p) {
        w.x_min = std::min(w.x_min, p.x[0]);
        w.x_max = std::max(w.x_max, p.x[0]);
        w.t_max = std::max(w.t_max, p.t);
    };
    for (const CallReturnPair& p : task.pairs) {
        grow(p.call);
        grow(p.ret);
    }
    return w;
}

ProtocolSetup document_protocol(const Task& task, std::optional<Coord> relay) {
    if (const auto* orig = std::get_if<OriginalSignalTask>(&task)) {
        const Coord site = relay.value_or(orig->D / 2);
        return {make_original_scenario(*orig, site), make_relay_strategy(*orig, site)};
    }
    if (const auto* refined = std::get_if<RefinedBitTask>(&task))
        return {make_refined_scenario(*refined), make_echo_strategy(*refined)};
    throw input_error("summoning tasks have no lattice protocol; use a token plan search");
}

LatticeScenario document_search_scenario(const Task& task, std::optional<Coord> relay,
                                         StrategyFamily family) {
    if (const auto* orig = std::get_if<OriginalSignalTask>(&task))
        return make_original_scenario(*orig, relay.value_or(orig->D / 2));
    if (const auto* refined = std::get_if<RefinedBitTask>(&task))
        return family == StrategyFamily::LocalResponseMaps ? make_refined_scenario(*refined)
                                                           : make_refined_search_scenario(*refined);
    throw input_error("summoning tasks have no lattice strategy space; use a token plan search");
}

std::string task_line(const SummoningTask& task) {
    if (task.start.dimension() != 1) throw input_error("task lines apply to one-dimensional tasks");
    std::string s = "start=" + coord_pair(task.start.t, task.start.x[0]);
    for (const CallReturnPair& p : task.pairs)
        s += " pair=" + coord_pair(p.call.t, p.call.x[0]) + "->" + coord_pair(p.ret.t, p.ret.x[0]);
    return s;
}

Report format_report(const Task& task) {
    Report rep;
    if (const auto* s = std::get_if<SummoningTask>(&task)) {
        const ValidationReport check = validate_summoning(*s);
        rep.exit_code = check.passed() ? 0 : 1;
        rep.machine = "task=summoning\n";
        rep.machine += std::string("mode=") +
                       (s->mode == CallMode::SingleGuaranteed ? "single" : "multiple") + "\n";
        rep.machine += "pairs=" + std::to_string(s->pair_count()) + "\n";
        rep.machine += std::string("valid=") + yn(check.passed()) + "\n";
        rep.human = "summoning task: " + std::to_string(s->pair_count()) + " call/return pair(s), " +
                    (s->mode == CallMode::SingleGuaranteed ? "exactly one call guaranteed"
                                                           : "several calls possible") +
                    "\n";
        for (const PairCheck& pc : check.pairs) {
            rep.machine += "pair=" + std::to_string(pc.index + 1) +
                           " call_before_return=" + yn(pc.call_before_return) +
                           " start_before_return=" + yn(pc.start_before_return) + "\n";
            rep.human += "pair " + std::to_string(pc.index + 1) + ": " + pc.reason() + "\n";
        }
        rep.human += std::string("verdict: ") + (check.passed() ? "valid" : "invalid") + "\n";
    } else if (const auto* r = std::get_if<RefinedBitTask>(&task)) {
        rep.machine = "task=refined\n";
        rep.machine += "D=" + std::to_string(r->D) + "\n";
        rep.machine += "eps=" + std::to_string(r->eps) + "\n";
        rep.machine += std::string("promise=") +
                       (r->promise == Promise::ExactlyOne ? "exactly_one" : "at_least_one") + "\n";
        rep.machine += "valid=yes\n";
        rep.machine += "b0=" + std::to_string(r->b_site(0)) + "\n";
        rep.machine += "a0=" + std::to_string(r->a_site(0)) + "\n";
        rep.machine += "a1=" + std::to_string(r->a_site(1)) + "\n";
        rep.machine += "b1=" + std::to_string(r->b_site(1)) + "\n";
        rep.machine += "deadline=" + std::to_string(r->deadline()) + "\n";
        rep.human = "two-wing bit task: B0 at x=" + std::to_string(r->b_site(0)) + ", A0 at x=" +
                    std::to_string(r->a_site(0)) + ", A1 at x=" + std::to_string(r->a_site(1)) +
                    ", B1 at x=" + std::to_string(r->b_site(1)) + "; outputs due by t=" +
                    std::to_string(r->deadline()) + "\nverdict: valid\n";
    } else if (const auto* o = std::get_if<OriginalSignalTask>(&task)) {
        rep.machine = "task=original\n";
        rep.machine += "D=" + std::to_string(o->D) + "\n";
        rep.machine += "valid=yes\n";
        rep.machine += "L=0\n";
        rep.machine += "R=" + std::to_string(o->D) + "\n";
        rep.machine += "T=" + std::to_string(o->transit_time()) + "\n";
        rep.human = "two-lab signal task: labs at x=0 and x=" + std::to_string(o->D) +
                    ", lightspeed transit time T=" + std::to_string(o->transit_time()) +
                    "\nverdict: valid\n";
    }
    return rep;
}

Report format_report(const LatticeScenario& scenario, const CallPattern& pattern,
                     const Transcript& transcript) {
    const RunSummary summary = transcript.summary(scenario.encoding);
    const bool ok = success_predicate(scenario.task, pattern, summary);
    const std::string why = failure_reason(scenario.task, pattern, summary);
    const std::string pat = pattern_to_string(scenario.task, pattern);

    Report rep;
    rep.exit_code = ok ? 0 : 1;
    rep.machine = "pattern=" + pat + "\n" + render_transcript(scenario, transcript) +
                  "verdict=" + (ok ? "success" : "failure") + "\n";
    if (!ok) rep.machine += "reason=" + why + "\n";
    rep.human = "pattern " + pat + ": " + std::to_string(transcript.deliveries.size()) +
                " delivery(ies)\n" + render_transcript(scenario, transcript) + "verdict: " +
                (ok ? "success" : ("failure (" + why + ")")) + "\n";
    return rep;
}

Report format_report(const LatticeScenario& scenario, const FeasibilityResult& result) {
    Report rep;
    if (const auto* f = std::get_if<Feasible>(&result)) {
        rep.exit_code = 0;
        rep.machine = "verdict=feasible\nwitness=" + std::to_string(f->witness_index) + "\n";
        rep.human = "feasible: canonical strategy " + std::to_string(f->witness_index) +
                    " succeeds on every admissible pattern\n";
    } else if (const auto* inf = std::get_if<Infeasible>(&result)) {
        rep.exit_code = 1;
        rep.machine = "verdict=infeasible\n";
        for (std::size_t i = 0; i < inf->certificates.size(); ++i)
            rep.machine += "strategy=" + std::to_string(i) +
                           " fails_on=" + pattern_to_string(scenario.task, inf->certificates[i]) + "\n";
        rep.human = "infeasible: all " + std::to_string(inf->certificates.size()) +
                    " strategies fail; each certificate names the first pattern that beats it\n";
    } else if (const auto* ex = std::get_if<Exhausted>(&result)) {
        rep.exit_code = 3;
        rep.machine = "verdict=exhausted\nevaluated=" + std::to_string(ex->evaluated) +
                      "\nbudget_ms=" + std::to_string(ex->budget.count()) + "\n";
        rep.human = "budget exhausted after " + std::to_string(ex->evaluated) + " strategies (" +
                    std::to_string(ex->budget.count()) + " ms)\n";
    }
    return rep;
}

Report format_report(const SummoningTask& task, const TokenWindow& window,
                     const std::optional<TokenPlan>& plan) {
    (void)task;
    const std::string win = std::to_string(window.x_min) + "," + std::to_string(window.x_max) + "," +
                            std::to_string(window.t_max);
    Report rep;
    if (!plan.has_value()) {
        rep.exit_code = 1;
        rep.machine = "verdict=infeasible\nwindow=" + win + "\n";
        rep.human = "infeasible: no routing plan for a single unclonable token guarantees delivery "
                    "(window " + win + ")\n";
        return rep;
    }
    rep.exit_code = 0;
    rep.machine = "verdict=feasible\nwindow=" + win + "\ndecisions=" +
                  std::to_string(plan->decisions.size()) + "\n";
    rep.human = "feasible: a knowledge-keyed routing plan with " +
                std::to_string(plan->decisions.size()) + " decisions guarantees delivery (window " +
                win + ")\n";
    for (const auto& [key, action] : plan->decisions) {
        const auto& [t, x, k] = key;
        rep.machine += "decision t=" + std::to_string(t) + " x=" + std::to_string(x) +
                       " knowledge=" + to_string(k) + " action=" + to_string(action) + "\n";
    }
    return rep;
}

Report format_report(const SweepReport& sweep) {
    Report rep;
    rep.exit_code = sweep.counterexamples.empty() ? 0 : 1;
    rep.machine = "tasks=" + std::to_string(sweep.tasks) +
                  " single_feasible=" + std::to_string(sweep.single_feasible) +
                  " multi_feasible=" + std::to_string(sweep.multi_feasible) +
                  " counterexamples=" + std::to_string(sweep.counterexamples.size()) + "\n";
    for (const SummoningTask& t : sweep.counterexamples)
        rep.machine += "counterexample " + task_line(t) + "\n";
    rep.human = "swept " + std::to_string(sweep.tasks) + " tasks: " +
                std::to_string(sweep.single_feasible) + " feasible under a guaranteed single call, " +
                std::to_string(sweep.multi_feasible) + " under possibly-multiple calls; " +
                std::to_string(sweep.counterexamples.size()) +
                " lost feasibility when the promise weakened\n";
    return rep;
}

}  // namespace summon
