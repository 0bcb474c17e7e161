#pragma once

#include <optional>
#include <string>
#include <vector>

#include "summon/search.hpp"
#include "summon/task.hpp"
#include "summon/token.hpp"

namespace summon {

enum class TaskKind { Summoning, Refined, Original };

const char* to_string(TaskKind k);

/// Parsed scenario file. Which fields apply depends on the kind:
/// summoning uses mode/start/pairs and optionally a window; refined uses
/// D/eps/promise; original uses D. states/alphabet are optional search
/// bounds for the lattice kinds.
struct ScenarioDocument {
    TaskKind kind = TaskKind::Summoning;
    std::optional<CallMode> mode;
    std::optional<Point> start;
    std::vector<CallReturnPair> pairs;
    std::optional<Coord> D;
    std::optional<Coord> eps;
    std::optional<Promise> promise;
    std::optional<TokenWindow> window;
    std::optional<int> states;
    std::optional<int> alphabet;

    bool operator==(const ScenarioDocument&) const = default;
};

/// Flat key=value grammar, one pair per line, # starts a comment.
/// Total on arbitrary bytes: the result is either a document whose task
/// constructs cleanly, or an input_error naming the offending line and
/// reason. Never anything else.
ScenarioDocument parse_scenario(const std::string& text);

/// Canonical rendering; parse_scenario(format_scenario(d)) == d for any
/// document that parses.
std::string format_scenario(const ScenarioDocument& doc);

/// The task a document describes. Throws input_error when a required
/// field is absent or a task invariant fails.
Task document_task(const ScenarioDocument& doc);

/// Window a token search should use: the document's explicit window if
/// present, else the tightest window containing every task point.
TokenWindow document_window(const ScenarioDocument& doc, const SummoningTask& task);

/// Scenario plus the built-in protocol a run drives: the relay strategy
/// for the signal task (site defaults to the midpoint), the echo for the
/// refined task. Summoning tasks have no lattice protocol.
struct ProtocolSetup {
    LatticeScenario scenario;
    Strategy strategy;
};

ProtocolSetup document_protocol(const Task& task, std::optional<Coord> relay);

/// Scenario a strategy search explores. The local-response family needs
/// the explicit wing layout; bounded transducers search the presence
/// encoding.
LatticeScenario document_search_scenario(const Task& task, std::optional<Coord> relay,
                                         StrategyFamily family);

/// A finished deliverable for one subcommand: prose for humans, a
/// line-oriented key=value section for machines (order-stable and
/// byte-reproducible), and the process exit code. Codes: 0 success or
/// feasible, 1 failure or infeasible, 2 input error, 3 budget exhausted.
struct Report {
    std::string human;
    std::string machine;
    int exit_code = 0;
};

/// validate: layout facts plus the per-pair causal checks for summoning.
Report format_report(const Task& task);

/// run: the pattern, the rendered transcript, and the verdict.
Report format_report(const LatticeScenario& scenario, const CallPattern& pattern,
                     const Transcript& transcript);

/// search: verdict line, then witness index or one certificate line per
/// enumerated strategy.
Report format_report(const LatticeScenario& scenario, const FeasibilityResult& result);

/// token: verdict, window, and the witness decision table when feasible.
Report format_report(const SummoningTask& task, const TokenWindow& window,
                     const std::optional<TokenPlan>& plan);

/// sweep: the one-line totals, then one line per counterexample.
Report format_report(const SweepReport& sweep);

/// One-line task rendering used in counterexample lines:
/// `start=<t>,<x> pair=<ct>,<cx>-><rt>,<rx> ...`.
std::string task_line(const SummoningTask& task);

}  // namespace summon
