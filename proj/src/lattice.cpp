#include "summon/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace summon {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) throw input_error("alphabet needs Silence plus at least one symbol");
    if (names_[0] != "-") throw input_error("alphabet symbol 0 must be Silence (\"-\")");
    for (size_t i = 0; i < names_.size(); ++i)
        for (size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j]) throw input_error("duplicate alphabet symbol " + names_[i]);
}

Alphabet Alphabet::binary() { return Alphabet({"-", "1"}); }

Alphabet Alphabet::bits() { return Alphabet({"-", "0", "1"}); }

const std::string& Alphabet::name(int sym) const {
    if (sym < 0 || sym >= size()) throw input_error("symbol index out of range");
    return names_[sym];
}

int Alphabet::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names_[i] == name) return i;
    throw input_error("unknown symbol '" + name + "'");
}

int Transducer::input_arity(int alphabet_size) const {
    int arity = 1;
    if (channels.in_left) arity *= alphabet_size;
    if (channels.in_right) arity *= alphabet_size;
    if (channels.ext_in) arity *= alphabet_size;
    return arity;
}

int Transducer::cell_index(int state, int in_left, int in_right, int ext_in, int alphabet_size) const {
    int idx = state;
    if (channels.in_left) idx = idx * alphabet_size + in_left;
    if (channels.in_right) idx = idx * alphabet_size + in_right;
    if (channels.ext_in) idx = idx * alphabet_size + ext_in;
    return idx;
}

const Transducer::Cell& Transducer::at(int state, int in_left, int in_right, int ext_in,
                                       int alphabet_size) const {
    return table[cell_index(state, in_left, in_right, ext_in, alphabet_size)];
}

void validate_transducer(const Transducer& t, int alphabet_size) {
    if (t.states < 1) throw input_error("transducer needs at least one state");
    const size_t expected = static_cast<size_t>(t.states) * t.input_arity(alphabet_size);
    if (t.table.size() != expected)
        throw input_error("transducer table has " + std::to_string(t.table.size()) +
                          " cells, expected " + std::to_string(expected));
    for (const auto& cell : t.table) {
        if (cell.next < 0 || cell.next >= t.states) throw input_error("transducer next-state out of range");
        for (int sym : {cell.out_left, cell.out_right, cell.ext_out})
            if (sym < 0 || sym >= alphabet_size) throw input_error("transducer output symbol out of range");
        if (!t.channels.out_left && cell.out_left != Silence)
            throw input_error("transducer emits on inactive left output");
        if (!t.channels.out_right && cell.out_right != Silence)
            throw input_error("transducer emits on inactive right output");
        if (!t.channels.ext_out && cell.ext_out != Silence)
            throw input_error("transducer emits on inactive external output");
    }
}

std::vector<const AgentSpec*> LatticeScenario::controlled_agents() const {
    std::vector<const AgentSpec*> out;
    for (const auto& a : agents)
        if (a.controlled) out.push_back(&a);
    return out;
}

const AgentSpec* LatticeScenario::agent_at(Coord site) const {
    for (const auto& a : agents)
        if (a.site == site) return &a;
    return nullptr;
}

void validate_scenario(const LatticeScenario& scenario) {
    if (scenario.x_min > scenario.x_max) throw input_error("x_min exceeds x_max");
    if (scenario.t_max < 0) throw input_error("t_max must be >= 0");
    for (size_t i = 0; i < scenario.agents.size(); ++i) {
        const AgentSpec& a = scenario.agents[i];
        if (a.site < scenario.x_min || a.site > scenario.x_max)
            throw input_error("agent " + a.label + " outside the spatial extent");
        if (i > 0 && scenario.agents[i - 1].site >= a.site)
            throw input_error("agent sites must be strictly increasing");
        if (!a.controlled && !a.delivery)
            throw input_error("agent " + a.label + " is neither controlled nor a delivery site");
    }
    const auto admissible = admissible_patterns(scenario.task);
    for (const CallPattern& p : admissible)
        if (!scenario.inputs.count(p))
            throw input_error("no input events for an admissible pattern");
    for (const auto& [pattern, events] : scenario.inputs) {
        if (std::find(admissible.begin(), admissible.end(), pattern) == admissible.end())
            throw input_error("input events for an inadmissible pattern");
        for (size_t i = 0; i < events.size(); ++i) {
            const InputEvent& e = events[i];
            if (e.site < scenario.x_min || e.site > scenario.x_max)
                throw input_error("input event outside the spatial extent");
            if (e.t < 0 || e.t > scenario.t_max) throw input_error("input event outside the time horizon");
            if (e.sym <= Silence || e.sym >= scenario.alphabet.size())
                throw input_error("input event symbol must be a non-silent alphabet symbol");
            if (e.kind == InputEvent::Kind::External) {
                const AgentSpec* a = scenario.agent_at(e.site);
                if (!a || !a->controlled || !a->channels.ext_in)
                    throw input_error("external input at a site without an ext-in agent");
            }
            for (size_t j = i + 1; j < events.size(); ++j) {
                const InputEvent& f = events[j];
                if (e.t == f.t && e.site == f.site && e.kind == f.kind)
                    throw input_error("duplicate input event at one site, time, and kind");
            }
        }
    }
}

namespace {

int event_kind_rank(Event::Kind k) {
    switch (k) {
        case Event::Kind::Move: return 0;
        case Event::Kind::Deliver: return 1;
        case Event::Kind::Emit: return 2;
        case Event::Kind::Output: return 3;
    }
    return 4;
}

const char* event_kind_name(Event::Kind k) {
    switch (k) {
        case Event::Kind::Move: return "move";
        case Event::Kind::Deliver: return "deliver";
        case Event::Kind::Emit: return "emit";
        case Event::Kind::Output: return "output";
    }
    return "?";
}

bool event_before(const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    const int ra = event_kind_rank(a.kind), rb = event_kind_rank(b.kind);
    if (ra != rb) return ra < rb;
    if (a.x != b.x) return a.x < b.x;
    if (a.dir != b.dir) return a.dir < b.dir;
    return a.sym < b.sym;
}

}  // namespace

RunSummary Transcript::summary(BitEncoding encoding) const {
    return RunSummary{deliveries, encoding};
}

std::string render_transcript(const LatticeScenario& scenario, const Transcript& transcript) {
    std::ostringstream out;
    for (const Event& e : transcript.events) {
        out << "t=" << e.t << " x=" << e.x << " kind=" << event_kind_name(e.kind)
            << " sym=" << scenario.alphabet.name(e.sym)
            << " dir=" << (e.dir < 0 ? "L" : e.dir > 0 ? "R" : "-") << "\n";
    }
    return out.str();
}

Transcript run(const LatticeScenario& scenario, const Strategy& strategy, const CallPattern& pattern) {
    validate_scenario(scenario);
    const auto input_it = scenario.inputs.find(pattern);
    if (input_it == scenario.inputs.end()) throw input_error("pattern is not admissible for this scenario");
    const auto controlled = scenario.controlled_agents();
    if (strategy.agents.size() != controlled.size())
        throw input_error("strategy has " + std::to_string(strategy.agents.size()) +
                          " transducers for " + std::to_string(controlled.size()) + " controlled agents");
    const int A = scenario.alphabet.size();
    for (size_t i = 0; i < controlled.size(); ++i) {
        if (strategy.agents[i].channels != controlled[i]->channels)
            throw input_error("transducer channels differ from agent " + controlled[i]->label);
        validate_transducer(strategy.agents[i], A);
    }

    const int width = static_cast<int>(scenario.x_max - scenario.x_min) + 1;
    const auto idx = [&](Coord x) { return static_cast<int>(x - scenario.x_min); };

    // Per-site lookup: -1 no agent, else index into scenario.agents.
    std::vector<int> agent_index(width, -1);
    std::vector<int> control_slot(width, -1);
    for (size_t i = 0, c = 0; i < scenario.agents.size(); ++i) {
        agent_index[idx(scenario.agents[i].site)] = static_cast<int>(i);
        if (scenario.agents[i].controlled) control_slot[idx(scenario.agents[i].site)] = static_cast<int>(c++);
    }

    std::vector<int> states(controlled.size(), 0);
    std::vector<int> from_left(width, Silence), from_right(width, Silence);

    Transcript transcript;
    transcript.agent_states.push_back(states);

    for (Coord t = 0; t <= scenario.t_max; ++t) {
        // Arrivals this step.
        for (int i = 0; i < width; ++i) {
            const Coord x = scenario.x_min + i;
            if (from_left[i] != Silence)
                transcript.events.push_back({t, x, Event::Kind::Move, from_left[i], +1});
            if (from_right[i] != Silence)
                transcript.events.push_back({t, x, Event::Kind::Move, from_right[i], -1});
            const int ai = agent_index[i];
            if (ai >= 0 && scenario.agents[ai].delivery) {
                for (auto [sym, dir] : {std::pair{from_left[i], +1}, std::pair{from_right[i], -1}})
                    if (sym != Silence)
                        transcript.events.push_back({t, x, Event::Kind::Deliver, sym, dir});
            }
        }

        // Departures this step.
        std::vector<int> to_left(width, Silence), to_right(width, Silence);
        const auto depart = [&](std::vector<int>& track, Coord x, int sym) {
            if (sym == Silence) return;
            int& slot = track[idx(x)];
            if (slot != Silence)
                throw input_error("departure collision at t=" + std::to_string(t) +
                                  " x=" + std::to_string(x));
            slot = sym;
        };

        std::vector<int> ext_in(width, Silence);
        for (const InputEvent& e : input_it->second) {
            if (e.t != t) continue;
            switch (e.kind) {
                case InputEvent::Kind::EmitLeft:
                    depart(to_left, e.site, e.sym);
                    transcript.events.push_back({t, e.site, Event::Kind::Emit, e.sym, -1});
                    break;
                case InputEvent::Kind::EmitRight:
                    depart(to_right, e.site, e.sym);
                    transcript.events.push_back({t, e.site, Event::Kind::Emit, e.sym, +1});
                    break;
                case InputEvent::Kind::External:
                    ext_in[idx(e.site)] = e.sym;
                    break;
            }
        }

        for (int i = 0; i < width; ++i) {
            const Coord x = scenario.x_min + i;
            const int ai = agent_index[i];
            if (ai < 0) {
                // Empty site: messages pass through, one site per step.
                depart(to_right, x, from_left[i]);
                depart(to_left, x, from_right[i]);
                continue;
            }
            const int slot = control_slot[i];
            if (slot < 0) continue;  // delivery-only site absorbs
            const AgentSpec& spec = scenario.agents[ai];
            const Transducer& td = strategy.agents[slot];
            const int in_l = spec.channels.in_left ? from_left[i] : Silence;
            const int in_r = spec.channels.in_right ? from_right[i] : Silence;
            const int in_e = spec.channels.ext_in ? ext_in[i] : Silence;
            const Transducer::Cell& cell = td.at(states[slot], in_l, in_r, in_e, A);
            states[slot] = cell.next;
            if (cell.out_left != Silence) {
                depart(to_left, x, cell.out_left);
                transcript.events.push_back({t, x, Event::Kind::Emit, cell.out_left, -1});
            }
            if (cell.out_right != Silence) {
                depart(to_right, x, cell.out_right);
                transcript.events.push_back({t, x, Event::Kind::Emit, cell.out_right, +1});
            }
            if (cell.ext_out != Silence)
                transcript.events.push_back({t, x, Event::Kind::Output, cell.ext_out, 0});
        }

        transcript.agent_states.push_back(states);

        // Propagate: a departure lands one site over at the next step.
        std::vector<int> next_from_left(width, Silence), next_from_right(width, Silence);
        for (int i = 0; i < width; ++i) {
            if (to_right[i] != Silence && i + 1 < width) next_from_left[i + 1] = to_right[i];
            if (to_left[i] != Silence && i - 1 >= 0) next_from_right[i - 1] = to_left[i];
        }
        from_left = std::move(next_from_left);
        from_right = std::move(next_from_right);
    }

    std::sort(transcript.events.begin(), transcript.events.end(), event_before);
    for (const Event& e : transcript.events)
        if (e.kind == Event::Kind::Deliver)
            transcript.deliveries.push_back({e.t, e.x, scenario.alphabet.name(e.sym)});
    return transcript;
}

Verdict guaranteed_success(const LatticeScenario& scenario, const Strategy& strategy) {
    Verdict verdict;
    verdict.success = true;
    for (const CallPattern& pattern : admissible_patterns(scenario.task)) {
        const Transcript transcript = run(scenario, strategy, pattern);
        const RunSummary outcome = transcript.summary(scenario.encoding);
        if (!success_predicate(scenario.task, pattern, outcome)) {
            verdict.success = false;
            verdict.failures.push_back({pattern, failure_reason(scenario.task, pattern, outcome)});
        }
    }
    return verdict;
}

LatticeScenario make_original_scenario(const OriginalSignalTask& task, Coord relay_site) {
    if (relay_site <= 0 || relay_site >= task.D)
        throw input_error("relay site must lie strictly between the labs");
    LatticeScenario s;
    s.x_min = 0;
    s.x_max = task.D;
    s.t_max = task.D;
    s.alphabet = Alphabet::binary();
    s.encoding = BitEncoding::ExplicitBits;
    s.task = task;

    AgentSpec lab_l{0, "L", {}, true, true};
    lab_l.channels.ext_in = true;
    lab_l.channels.out_right = true;
    AgentSpec relay{relay_site, "relay", {}, true, false};
    relay.channels.in_left = relay.channels.in_right = true;
    relay.channels.out_left = relay.channels.out_right = true;
    AgentSpec lab_r{task.D, "R", {}, true, true};
    lab_r.channels.ext_in = true;
    lab_r.channels.out_left = true;
    s.agents = {lab_l, relay, lab_r};

    const int one = s.alphabet.index_of("1");
    for (const CallPattern& p : admissible_patterns(task)) {
        std::vector<InputEvent> events;
        for (int i : p.indices())
            events.push_back({0, task.source_site(i), one, InputEvent::Kind::External});
        s.inputs[p] = events;
    }
    return s;
}

Strategy make_relay_strategy(const OriginalSignalTask& task, Coord relay_site) {
    if (relay_site <= 0 || relay_site >= task.D)
        throw input_error("relay site must lie strictly between the labs");
    const int A = 2;
    const int one = 1;

    // Labs: one state, emit toward the far lab when the request fires.
    const auto make_lab = [&](bool left_lab) {
        Transducer td;
        td.states = 1;
        td.channels.ext_in = true;
        (left_lab ? td.channels.out_right : td.channels.out_left) = true;
        td.table.resize(td.input_arity(A));
        Transducer::Cell& fire = td.table[td.cell_index(0, Silence, Silence, one, A)];
        (left_lab ? fire.out_right : fire.out_left) = one;
        return td;
    };

    // Relay: forward the first arrival onward, then absorb everything.
    // A simultaneous arrival from both sides forwards the L-originated one.
    Transducer relay;
    relay.states = 2;
    relay.channels.in_left = relay.channels.in_right = true;
    relay.channels.out_left = relay.channels.out_right = true;
    relay.table.resize(2 * relay.input_arity(A));
    for (int in_l = 0; in_l < A; ++in_l)
        for (int in_r = 0; in_r < A; ++in_r) {
            Transducer::Cell& c0 = relay.table[relay.cell_index(0, in_l, in_r, Silence, A)];
            if (in_l != Silence) {
                c0.out_right = in_l;
                c0.next = 1;
            } else if (in_r != Silence) {
                c0.out_left = in_r;
                c0.next = 1;
            }
            relay.table[relay.cell_index(1, in_l, in_r, Silence, A)].next = 1;
        }

    return Strategy{{make_lab(true), relay, make_lab(false)}};
}

namespace {

LatticeScenario refined_scenario_base(const RefinedBitTask& task) {
    LatticeScenario s;
    s.x_min = task.b_site(0);
    s.x_max = task.b_site(1);
    s.t_max = task.deadline();
    s.task = task;

    AgentSpec b0{task.b_site(0), "B0", {}, false, true};
    AgentSpec a0{task.a_site(0), "A0", {}, true, false};
    a0.channels.in_left = a0.channels.out_left = true;
    AgentSpec a1{task.a_site(1), "A1", {}, true, false};
    a1.channels.in_right = a1.channels.out_right = true;
    AgentSpec b1{task.b_site(1), "B1", {}, false, true};
    s.agents = {b0, a0, a1, b1};
    return s;
}

}  // namespace

LatticeScenario make_refined_scenario(const RefinedBitTask& task) {
    LatticeScenario s = refined_scenario_base(task);
    s.alphabet = Alphabet::bits();
    s.encoding = BitEncoding::ExplicitBits;
    for (const CallPattern& p : admissible_patterns(task)) {
        const int sym0 = s.alphabet.index_of(p.contains(0) ? "1" : "0");
        const int sym1 = s.alphabet.index_of(p.contains(1) ? "1" : "0");
        s.inputs[p] = {{0, task.b_site(0), sym0, InputEvent::Kind::EmitRight},
                       {0, task.b_site(1), sym1, InputEvent::Kind::EmitLeft}};
    }
    return s;
}

LatticeScenario make_refined_search_scenario(const RefinedBitTask& task) {
    LatticeScenario s = refined_scenario_base(task);
    s.alphabet = Alphabet::binary();
    s.encoding = BitEncoding::Presence;
    const int one = s.alphabet.index_of("1");
    for (const CallPattern& p : admissible_patterns(task)) {
        std::vector<InputEvent> events;
        if (p.contains(0)) events.push_back({0, task.b_site(0), one, InputEvent::Kind::EmitRight});
        if (p.contains(1)) events.push_back({0, task.b_site(1), one, InputEvent::Kind::EmitLeft});
        s.inputs[p] = events;
    }
    return s;
}

Strategy make_echo_strategy(const RefinedBitTask&) {
    const int A = 3;  // bits alphabet
    const auto make_wing = [&](bool left_wing) {
        Transducer td;
        td.states = 1;
        (left_wing ? td.channels.in_left : td.channels.in_right) = true;
        (left_wing ? td.channels.out_left : td.channels.out_right) = true;
        td.table.resize(td.input_arity(A));
        for (int sym = 0; sym < A; ++sym) {
            Transducer::Cell& cell =
                td.table[td.cell_index(0, left_wing ? sym : Silence, left_wing ? Silence : sym, Silence, A)];
            (left_wing ? cell.out_left : cell.out_right) = sym;
        }
        return td;
    };
    return Strategy{{make_wing(true), make_wing(false)}};
}

Strategy make_local_response_strategy(int joint_index) {
    if (joint_index < 0 || joint_index > 15) throw input_error("local-response index must be in 0..15");
    const int A = 3;
    const int code0 = joint_index / 4, code1 = joint_index % 4;
    const auto make_wing = [&](bool left_wing, int code) {
        Transducer td;
        td.states = 1;
        (left_wing ? td.channels.in_left : td.channels.in_right) = true;
        (left_wing ? td.channels.out_left : td.channels.out_right) = true;
        td.table.resize(td.input_arity(A));
        for (int bit = 0; bit < 2; ++bit) {
            const int in_sym = 1 + bit;
            const int out_sym = 1 + ((bit == 0) ? ((code >> 1) & 1) : (code & 1));
            Transducer::Cell& cell = td.table[td.cell_index(
                0, left_wing ? in_sym : Silence, left_wing ? Silence : in_sym, Silence, A)];
            (left_wing ? cell.out_left : cell.out_right) = out_sym;
        }
        return td;
    };
    return Strategy{{make_wing(true, code0), make_wing(false, code1)}};
}

}  // namespace summon
