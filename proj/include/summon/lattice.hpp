#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "summon/task.hpp"

namespace summon {

/// Message symbols are small integers; index 0 is always Silence ("-").
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> names);

    static Alphabet binary();  // {-, 1}: presence signalling
    static Alphabet bits();    // {-, 0, 1}: explicit bit transport

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int sym) const;
    int index_of(const std::string& name) const;

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> names_;
};

inline constexpr int Silence = 0;

/// Which transducer channels an agent actually has. Inactive input
/// channels are pinned to Silence; inactive outputs must stay Silence.
struct AgentChannels {
    bool in_left = false;
    bool in_right = false;
    bool ext_in = false;
    bool out_left = false;
    bool out_right = false;
    bool ext_out = false;

    bool operator==(const AgentChannels&) const = default;
};

struct AgentSpec {
    Coord site = 0;
    std::string label;
    AgentChannels channels;
    bool controlled = false;  // a Strategy supplies this agent's transducer
    bool delivery = false;    // arrivals here are recorded and absorbed
};

/// One deterministic finite-state transducer. The table is flattened
/// row-major over (state, in_left, in_right, ext_in) with inactive input
/// dimensions collapsed to size 1; initial state is 0.
struct Transducer {
    struct Cell {
        int next = 0;
        int out_left = Silence;
        int out_right = Silence;
        int ext_out = Silence;

        auto operator<=>(const Cell&) const = default;
    };

    int states = 1;
    AgentChannels channels;
    std::vector<Cell> table;

    int input_arity(int alphabet_size) const;
    int cell_index(int state, int in_left, int in_right, int ext_in, int alphabet_size) const;
    const Cell& at(int state, int in_left, int in_right, int ext_in, int alphabet_size) const;

    bool operator==(const Transducer&) const = default;
};

/// Checks table shape, state range, symbol range, and that inactive
/// output channels never emit. Throws input_error on violation.
void validate_transducer(const Transducer& t, int alphabet_size);

/// Transducers for the scenario's controlled agents, in site order.
struct Strategy {
    std::vector<Transducer> agents;

    bool operator==(const Strategy&) const = default;
};

/// A scripted event the adversary injects when a pattern includes it:
/// either a message departing a site or an external input to an agent.
struct InputEvent {
    enum class Kind { EmitLeft, EmitRight, External };

    Coord t = 0;
    Coord site = 0;
    int sym = Silence;
    Kind kind = Kind::External;

    bool operator==(const InputEvent&) const = default;
};

struct LatticeScenario {
    Coord x_min = 0;
    Coord x_max = 0;
    Coord t_max = 0;
    Alphabet alphabet = Alphabet::binary();
    std::vector<AgentSpec> agents;  // strictly increasing site order
    std::map<CallPattern, std::vector<InputEvent>> inputs;
    Task task;
    BitEncoding encoding = BitEncoding::ExplicitBits;

    std::vector<const AgentSpec*> controlled_agents() const;
    const AgentSpec* agent_at(Coord site) const;
};

/// Structural checks: bounds, site order, input admissibility coverage,
/// external inputs only at controlled sites. Throws input_error.
void validate_scenario(const LatticeScenario& scenario);

struct Event {
    enum class Kind { Move, Deliver, Emit, Output };

    Coord t = 0;
    Coord x = 0;
    Kind kind = Kind::Move;
    int sym = Silence;
    int dir = 0;  // -1 leftward, +1 rightward, 0 none

    bool operator==(const Event&) const = default;
};

struct Transcript {
    std::vector<Event> events;                   // canonical order
    std::vector<Delivery> deliveries;            // named symbols, time order
    std::vector<std::vector<int>> agent_states;  // [step][controlled agent]

    RunSummary summary(BitEncoding encoding) const;

    bool operator==(const Transcript&) const = default;
};

std::string render_transcript(const LatticeScenario& scenario, const Transcript& transcript);

/// Synchronous simulation from t=0 to t_max. Within one step: messages
/// arrive (and are delivered or absorbed), agents read this step's
/// arrivals and emit, emissions depart this step and land one site away
/// at the next step. Zero-delay relaying is an agent copying an arrival
/// into an emission in the same step; nothing outruns one site per step.
Transcript run(const LatticeScenario& scenario, const Strategy& strategy, const CallPattern& pattern);

struct PatternFailure {
    CallPattern pattern;
    std::string reason;
};

struct Verdict {
    bool success = false;
    std::vector<PatternFailure> failures;  // one entry per failing pattern
};

/// Runs every admissible pattern; Success iff the task's success
/// predicate holds on each.
Verdict guaranteed_success(const LatticeScenario& scenario, const Strategy& strategy);

/// Two-lab scenario: controlled agents at L=0, relay_site, R=D; requests
/// arrive as external inputs at t=0; both labs are delivery sites.
LatticeScenario make_original_scenario(const OriginalSignalTask& task, Coord relay_site);

/// Endpoint agents emit on request; the relay forwards the first arrival
/// with zero delay and absorbs everything afterwards; an exact tie
/// forwards the L-originated signal.
Strategy make_relay_strategy(const OriginalSignalTask& task, Coord relay_site);

/// Two-wing scenario carrying explicit bit symbols; B sites inject the
/// input bits at t=0 and record deliveries; A sites are controlled with
/// only their B-facing channels active (the far wing is out of causal
/// range before the deadline).
LatticeScenario make_refined_scenario(const RefinedBitTask& task);

/// Two-wing scenario in presence encoding over the binary alphabet:
/// input bit 1 is an injected symbol, bit 0 is silence, and a wing's
/// output bit is whether anything reaches its B site by the deadline.
LatticeScenario make_refined_search_scenario(const RefinedBitTask& task);

/// Each A_i returns the incoming bit unchanged toward its B_i.
Strategy make_echo_strategy(const RefinedBitTask& task);

/// Joint local-response strategy: wing i applies f_i where the 2-bit map
/// code m encodes f(0) = (m >> 1) & 1 and f(1) = m & 1. The joint index
/// is code_0 * 4 + code_1; echo is index 5.
Strategy make_local_response_strategy(int joint_index);

inline constexpr int EchoLocalIndex = 5;

}  // namespace summon
