#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "summon/task.hpp"

namespace summon {

/// What the token's carrier can know about one call at a spacetime
/// location: the call point's cone has not arrived yet, or it has and
/// carried a call, or it has and carried silence.
enum class CallKnowledge { Unknown, Called, NotCalled };

struct Knowledge {
    std::vector<CallKnowledge> calls;  // one entry per pair index

    auto operator<=>(const Knowledge&) const = default;
};

std::string to_string(const Knowledge& k);

/// Pair i is Called/NotCalled iff c_i lies in the (non-strict) causal
/// past of the location; silence from a call point whose cone has
/// arrived is itself information.
Knowledge knowledge_at(const Point& location, const CallPattern& pattern, const SummoningTask& task);

enum class TokenAction { Deliver, Hold, MoveLeft, MoveRight };

const char* to_string(TokenAction a);

/// A routing plan for the single unclonable token: an action for every
/// reachable (time, position, Knowledge) state. Keying decisions by
/// Knowledge, never by the raw pattern, is what makes a plan causally
/// honest.
struct TokenPlan {
    std::map<std::tuple<Coord, Coord, Knowledge>, TokenAction> decisions;
};

struct TokenStep {
    Coord t = 0;
    Coord x = 0;
    Knowledge knowledge;
    TokenAction action = TokenAction::Hold;
};

struct TokenRunResult {
    std::vector<TokenStep> steps;
    std::optional<Point> delivered;
    bool success = false;
};

/// Simulates the token from the start point until delivery or until the
/// last return time passes. Success iff the delivery coincides with r_i
/// for some called i. Throws input_error naming the state if the plan
/// has no action for a reached state.
TokenRunResult plan_run(const SummoningTask& task, const TokenPlan& plan, const CallPattern& pattern);

struct TokenWindow {
    Coord x_min = -4;
    Coord x_max = 4;
    Coord t_max = 6;

    bool operator==(const TokenWindow&) const = default;
};

/// Exact AND-OR search over (time, position, consistent-pattern set)
/// within the window: the token owner picks actions, and each move
/// splits the consistent set by the knowledge it reveals. Returns a
/// witness plan iff some plan succeeds on every admissible pattern.
/// The window must contain every task point.
std::optional<TokenPlan> token_feasible(const SummoningTask& task, const TokenWindow& window);

struct SweepOptions {
    TokenWindow window;
    int pairs = 2;
    std::uint64_t enumeration_cap = 50'000'000;
    int parallelism = 1;
};

struct SweepReport {
    std::uint64_t tasks = 0;
    std::uint64_t single_feasible = 0;
    std::uint64_t multi_feasible = 0;
    // Tasks feasible under SingleGuaranteed but not MultiplePossible,
    // stored in multiple mode, in enumeration order.
    std::vector<SummoningTask> counterexamples;
};

/// Enumerates every valid task with `pairs` call/return pairs inside the
/// window (pairs as an unordered set, listed in a fixed grid order) and
/// decides both modes for each. A counterexample would show the promise
/// weakening from "exactly one call" to "possibly several" destroying
/// feasibility; the expected outcome is none.
SweepReport monotonicity_sweep(const SweepOptions& options);

}  // namespace summon
