#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "summon/lattice.hpp"

namespace summon {

struct SearchBounds {
    int max_states = 2;     // S: per-agent state cap
    int alphabet_size = 2;  // A: must equal the scenario alphabet's size
    std::optional<std::chrono::milliseconds> budget;
    std::uint64_t enumeration_cap = 10'000'000;
};

enum class StrategyFamily {
    LocalResponseMaps,   // the 16 joint wing maps of the two-wing bit task
    BoundedTransducers,  // every per-agent transducer with <= S states
};

/// Canonical, duplicate-free strategy enumeration. Order: per agent,
/// tables with fewer states come first; within one state count, tables
/// compare lexicographically over flattened cells (cell 0 most
/// significant) with each cell packed as (next, out_left, out_right,
/// ext_out), ext_out least significant. Joint index is mixed-radix with
/// agent 0 most significant. Index 0 is the all-absorbing strategy.
class StrategyEnumeration {
public:
    StrategyEnumeration(const LatticeScenario& scenario, const SearchBounds& bounds,
                        StrategyFamily family = StrategyFamily::BoundedTransducers);

    std::uint64_t size() const { return total_; }
    Strategy at(std::uint64_t index) const;
    StrategyFamily family() const { return family_; }

private:
    struct AgentSpace {
        AgentChannels channels;
        std::vector<std::uint64_t> count_by_states;  // index n-1: n-state table count
        std::uint64_t total = 0;
    };

    StrategyFamily family_;
    int alphabet_size_ = 2;
    std::vector<AgentSpace> agents_;
    std::uint64_t total_ = 0;
};

struct Feasible {
    std::uint64_t witness_index = 0;
    Strategy witness;
};

struct Infeasible {
    // certificates[i] is one failing pattern for canonical strategy i.
    std::vector<CallPattern> certificates;
};

struct Exhausted {
    std::uint64_t evaluated = 0;
    std::chrono::milliseconds budget{0};
};

using FeasibilityResult = std::variant<Feasible, Infeasible, Exhausted>;

/// First admissible pattern (in canonical order) the strategy fails on,
/// or nullopt when it passes all of them.
std::optional<CallPattern> first_failure(const LatticeScenario& scenario, const Strategy& strategy);

/// Exhaustive bounded feasibility decision. Feasible carries the lowest
/// canonical witness; Infeasible carries one failing pattern per
/// enumerated strategy; Exhausted reports how many strategies were fully
/// evaluated before the budget expired. Verdict and witness do not
/// depend on the worker count.
FeasibilityResult decide_feasible(const LatticeScenario& scenario, const SearchBounds& bounds,
                                  StrategyFamily family = StrategyFamily::BoundedTransducers,
                                  int parallelism = 1);

/// Joint local-response map indices (0..15) that guarantee success,
/// ascending. Under the exactly-one promise this is {5}, the echo; under
/// at-least-one it is empty.
std::vector<int> refined_local_search(const RefinedBitTask& task);
std::vector<int> refined_local_search(Promise promise);

}  // namespace summon
