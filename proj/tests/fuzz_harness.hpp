#pragma once

#include <random>
#include <string>
#include <vector>

#include "summon/lattice.hpp"

// Randomized scenario generator shared by the lattice fuzz cases and the
// acceptance checks.
namespace fuzz {

using namespace summon;

struct FuzzWorld {
    LatticeScenario scenario;
    Strategy strategy;
};

inline std::vector<Event> events_at(const Transcript& tr, Coord t, Coord x) {
    std::vector<Event> out;
    for (const Event& e : tr.events)
        if (e.t == t && e.x == x) out.push_back(e);
    return out;
}

// Random world with injections only at t=0, at most one per site and
// direction, and emissions only from non-controlled sites; under these
// constraints departure collisions cannot occur on any run.
inline FuzzWorld random_world(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> width_pick(5, 9), t_pick(6, 10), coin(0, 1);
    FuzzWorld w;
    w.scenario.x_min = 0;
    w.scenario.x_max = width_pick(rng);
    w.scenario.t_max = t_pick(rng);
    w.scenario.alphabet = coin(rng) ? Alphabet::bits() : Alphabet::binary();
    const int A = w.scenario.alphabet.size();
    w.scenario.task = SummoningTask(Point{0, {0}}, {{Point{1, {0}}, Point{2, {0}}}},
                                    CallMode::SingleGuaranteed);

    std::vector<InputEvent> events;
    std::uniform_int_distribution<int> sym_pick(1, A - 1);
    for (Coord x = w.scenario.x_min; x <= w.scenario.x_max; ++x) {
        std::uniform_int_distribution<int> role(0, 3);
        const int r = role(rng);
        if (r == 0) continue;  // empty pass-through site
        if (r == 1) {          // delivery site, may inject at t=0
            w.scenario.agents.push_back({x, "D" + std::to_string(x), {}, false, true});
            if (coin(rng)) events.push_back({0, x, sym_pick(rng), InputEvent::Kind::EmitRight});
            if (coin(rng)) events.push_back({0, x, sym_pick(rng), InputEvent::Kind::EmitLeft});
            continue;
        }
        AgentSpec agent{x, "C" + std::to_string(x), {}, true, r == 3};
        agent.channels.in_left = coin(rng);
        agent.channels.in_right = coin(rng);
        agent.channels.out_left = coin(rng);
        agent.channels.out_right = coin(rng);
        agent.channels.ext_in = coin(rng);
        agent.channels.ext_out = coin(rng);
        if (agent.channels.ext_in && coin(rng))
            events.push_back({0, x, sym_pick(rng), InputEvent::Kind::External});
        w.scenario.agents.push_back(agent);

        Transducer td;
        td.states = coin(rng) + 1;
        td.channels = agent.channels;
        td.table.resize(static_cast<size_t>(td.states) * td.input_arity(A));
        std::uniform_int_distribution<int> next_pick(0, td.states - 1), out_pick(0, A - 1);
        for (auto& cell : td.table) {
            cell.next = next_pick(rng);
            if (td.channels.out_left) cell.out_left = out_pick(rng);
            if (td.channels.out_right) cell.out_right = out_pick(rng);
            if (td.channels.ext_out) cell.ext_out = out_pick(rng);
        }
        w.strategy.agents.push_back(td);
    }
    w.scenario.inputs[CallPattern(1)] = events;
    return w;
}

}  // namespace fuzz
