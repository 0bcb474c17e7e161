#include "summon/demos.hpp"

#include <algorithm>

#include "summon/errors.hpp"
#include "summon/lattice.hpp"

namespace summon {

namespace {

const char* yn(bool b) { return b ? "yes" : "no"; }

Report original_demo(const DemoOptions& opt) {
    const OriginalSignalTask task(opt.D);
    std::vector<Coord> relays;
    if (opt.relay) relays.push_back(*opt.relay);
    else
        for (Coord r = 1; r < opt.D; ++r) relays.push_back(r);

    Report rep;
    rep.machine = "demo=finkelstein-original\nD=" + std::to_string(opt.D) +
                  "\nT=" + std::to_string(task.transit_time()) + "\n";
    rep.human = "Two labs, L at x=0 and R at x=" + std::to_string(opt.D) +
                ", may each request a lightspeed signal from the opposite lab, due at exactly t=" +
                std::to_string(task.transit_time()) +
                ". A relay between them forwards the first arrival and absorbs the rest.\n";

    bool holds = true;
    for (const Coord relay : relays) {
        const LatticeScenario scenario = make_original_scenario(task, relay);
        const Strategy strategy = make_relay_strategy(task, relay);
        for (const CallPattern& pattern : admissible_patterns(task)) {
            const Transcript tr = run(scenario, strategy, pattern);
            const bool ok = success_predicate(task, pattern, tr.summary(scenario.encoding));
            const std::size_t n = tr.deliveries.size();
            holds = holds && ok && n == 1;
            rep.machine += "relay=" + std::to_string(relay) +
                           " pattern=" + pattern_to_string(Task(task), pattern) +
                           " deliveries=" + std::to_string(n) +
                           " verdict=" + (ok ? "success" : "failure") + "\n";
        }
    }
    rep.machine += "claim=every request subset yields exactly one delivery, at the right lab, on time\n";
    rep.machine += std::string("claim_holds=") + yn(holds) + "\n";
    rep.human += "Checked " + std::to_string(relays.size()) + " relay site(s) x 3 request subsets: " +
                 (holds ? "each run delivered exactly one signal to the right lab at t=T."
                        : "the claim FAILED; see the machine section.") +
                 "\n";
    rep.exit_code = holds ? 0 : 1;
    return rep;
}

Report refined_demo(const DemoOptions& opt, Promise promise) {
    const bool exactly = promise == Promise::ExactlyOne;
    const RefinedBitTask task(opt.D, opt.eps, promise);
    const std::vector<int> winners = refined_local_search(task);
    const bool holds = exactly ? winners == std::vector<int>{EchoLocalIndex} : winners.empty();

    Report rep;
    rep.machine = std::string("demo=finkelstein-refined-") +
                  (exactly ? "exactly-one" : "at-least-one") + "\n";
    rep.machine += "D=" + std::to_string(opt.D) + "\neps=" + std::to_string(opt.eps) +
                   "\ndeadline=" + std::to_string(task.deadline()) + "\n";
    rep.machine += "strategies=16\n";
    rep.machine += "winners=" + std::to_string(winners.size());
    if (exactly && winners.size() == 1) {
        rep.machine += " witness=";
        rep.machine += winners[0] == EchoLocalIndex ? "echo" : std::to_string(winners[0]);
    }
    rep.machine += "\n";
    if (!holds)
        for (const int w : winners) rep.machine += "winner=" + std::to_string(w) + "\n";
    rep.machine += std::string("claim_holds=") + yn(holds) + "\n";

    rep.human = "Each wing may hand its agent a bit at t=0; a bit must be back at a wing boundary "
                "by t=" + std::to_string(task.deadline()) + ". Promise: " +
                (exactly ? "exactly one wing sends 1" : "at least one wing sends 1") +
                ". All 16 joint wing-response maps evaluated.\n";
    if (exactly)
        rep.human += holds ? "Exactly one map wins: the echo, which returns each received bit unchanged.\n"
                           : "Claim FAILED: the winner set is not exactly the echo map.\n";
    else
        rep.human += holds ? "No map wins: whatever the wings precommit to, some admissible pattern "
                             "defeats it.\n"
                           : "Claim FAILED: some map wins despite the weakened promise.\n";
    rep.exit_code = holds ? 0 : 1;
    return rep;
}

Report token_demo(const DemoOptions& opt) {
    SweepOptions sopt;
    sopt.window = opt.window.value_or(TokenWindow{});
    sopt.pairs = 2;
    sopt.parallelism = opt.parallelism;
    const SweepReport sweep = monotonicity_sweep(sopt);
    const bool holds = sweep.counterexamples.empty();

    Report rep;
    rep.machine = "demo=token-monotonicity\nwindow=" + std::to_string(sopt.window.x_min) + "," +
                  std::to_string(sopt.window.x_max) + "," + std::to_string(sopt.window.t_max) +
                  "\npairs=2\n";
    rep.machine += format_report(sweep).machine;
    rep.machine += std::string("claim_holds=") + yn(holds) + "\n";
    rep.human = "Exhaustive check of every valid two-pair token task in the window: does weakening "
                "the promise from one guaranteed call to possibly-several ever destroy "
                "feasibility?\n" + format_report(sweep).human;
    rep.human += holds ? "It never does: the single unclonable token is never the obstacle here.\n"
                       : "Claim FAILED: counterexamples exist; see the machine section.\n";
    rep.exit_code = holds ? 0 : 1;
    return rep;
}

}  // namespace

std::vector<std::string> demo_names() {
    return {"finkelstein-original", "finkelstein-refined-exactly-one",
            "finkelstein-refined-at-least-one", "token-monotonicity"};
}

Report run_demo(const std::string& name, const DemoOptions& options) {
    if (name == "finkelstein-original") return original_demo(options);
    if (name == "finkelstein-refined-exactly-one") return refined_demo(options, Promise::ExactlyOne);
    if (name == "finkelstein-refined-at-least-one") return refined_demo(options, Promise::AtLeastOne);
    if (name == "token-monotonicity") return token_demo(options);
    std::string names;
    for (const std::string& n : demo_names()) {
        if (!names.empty()) names += ", ";
        names += n;
    }
    throw input_error("unknown demo '" + name + "'; valid names: " + names);
}

}  // namespace summon
