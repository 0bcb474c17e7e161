#include "summon/search.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace summon {

namespace {

using u128 = unsigned __int128;
constexpr u128 kSaturated = ~u128{0} >> 1;

u128 mul_sat(u128 a, u128 b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

u128 pow_sat(u128 base, int exp) {
    u128 out = 1;
    for (int i = 0; i < exp; ++i) out = mul_sat(out, base);
    return out;
}

std::string u128_str(u128 v) {
    if (v >= kSaturated) return "(overflow)";
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s += static_cast<char>('0' + static_cast<int>(v % 10));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

int in_arity_of(const AgentChannels& ch, int A) {
    int arity = 1;
    if (ch.in_left) arity *= A;
    if (ch.in_right) arity *= A;
    if (ch.ext_in) arity *= A;
    return arity;
}

int out_choices_of(const AgentChannels& ch, int A) {
    int choices = 1;
    if (ch.out_left) choices *= A;
    if (ch.out_right) choices *= A;
    if (ch.ext_out) choices *= A;
    return choices;
}

bool is_refined_wing_scenario(const LatticeScenario& scenario) {
    if (!std::holds_alternative<RefinedBitTask>(scenario.task)) return false;
    if (scenario.alphabet != Alphabet::bits()) return false;
    const auto controlled = scenario.controlled_agents();
    if (controlled.size() != 2) return false;
    AgentChannels left, right;
    left.in_left = left.out_left = true;
    right.in_right = right.out_right = true;
    return controlled[0]->channels == left && controlled[1]->channels == right;
}

}  // namespace

StrategyEnumeration::StrategyEnumeration(const LatticeScenario& scenario, const SearchBounds& bounds,
                                         StrategyFamily family)
    : family_(family) {
    validate_scenario(scenario);
    if (family_ == StrategyFamily::LocalResponseMaps) {
        if (!is_refined_wing_scenario(scenario))
            throw input_error("the local-response family needs the refined two-wing scenario");
        total_ = 16;
        return;
    }
    if (bounds.max_states < 1) throw input_error("max_states must be >= 1");
    if (bounds.alphabet_size < 2) throw input_error("alphabet size must be >= 2");
    if (bounds.alphabet_size != scenario.alphabet.size())
        throw input_error("bounds declare alphabet size " + std::to_string(bounds.alphabet_size) +
                          " but the scenario alphabet has " + std::to_string(scenario.alphabet.size()));
    alphabet_size_ = bounds.alphabet_size;

    u128 total = 1;
    for (const AgentSpec* agent : scenario.controlled_agents()) {
        AgentSpace space;
        space.channels = agent->channels;
        u128 agent_total = 0;
        for (int n = 1; n <= bounds.max_states; ++n) {
            const int cells = n * in_arity_of(space.channels, alphabet_size_);
            const u128 choices = static_cast<u128>(n) * out_choices_of(space.channels, alphabet_size_);
            const u128 count = pow_sat(choices, cells);
            agent_total = std::min(agent_total + count, kSaturated);
            space.count_by_states.push_back(
                static_cast<std::uint64_t>(std::min<u128>(count, bounds.enumeration_cap + 1)));
        }
        space.total = static_cast<std::uint64_t>(std::min<u128>(agent_total, bounds.enumeration_cap + 1));
        agents_.push_back(std::move(space));
        total = mul_sat(total, agent_total);
    }
    if (total > bounds.enumeration_cap)
        throw resource_error("enumeration needs " + u128_str(total) + " strategies, cap is " +
                             std::to_string(bounds.enumeration_cap));
    total_ = static_cast<std::uint64_t>(total);
}

Strategy StrategyEnumeration::at(std::uint64_t index) const {
    if (index >= total_) throw input_error("strategy index out of range");
    if (family_ == StrategyFamily::LocalResponseMaps)
        return make_local_response_strategy(static_cast<int>(index));

    Strategy strategy;
    strategy.agents.resize(agents_.size());
    std::uint64_t rem = index;
    for (size_t i = agents_.size(); i-- > 0;) {
        const AgentSpace& space = agents_[i];
        std::uint64_t agent_index = rem % space.total;
        rem /= space.total;

        int states = 1;
        for (std::uint64_t count : space.count_by_states) {
            if (agent_index < count) break;
            agent_index -= count;
            ++states;
        }

        Transducer td;
        td.states = states;
        td.channels = space.channels;
        const int cells = states * in_arity_of(space.channels, alphabet_size_);
        const std::uint64_t choices =
            static_cast<std::uint64_t>(states) * out_choices_of(space.channels, alphabet_size_);
        const int ol = space.channels.out_left ? alphabet_size_ : 1;
        const int orr = space.channels.out_right ? alphabet_size_ : 1;
        const int oe = space.channels.ext_out ? alphabet_size_ : 1;
        std::vector<std::uint64_t> place(cells, 1);
        for (int c = cells - 2; c >= 0; --c) place[c] = place[c + 1] * choices;
        td.table.resize(cells);
        for (int c = 0; c < cells; ++c) {
            std::uint64_t digit = (agent_index / place[c]) % choices;
            Transducer::Cell& cell = td.table[c];
            cell.ext_out = static_cast<int>(digit % oe);
            digit /= oe;
            cell.out_right = static_cast<int>(digit % orr);
            digit /= orr;
            cell.out_left = static_cast<int>(digit % ol);
            digit /= ol;
            cell.next = static_cast<int>(digit);
        }
        strategy.agents[i] = std::move(td);
    }
    return strategy;
}

std::optional<CallPattern> first_failure(const LatticeScenario& scenario, const Strategy& strategy) {
    for (const CallPattern& pattern : admissible_patterns(scenario.task)) {
        const Transcript transcript = run(scenario, strategy, pattern);
        if (!success_predicate(scenario.task, pattern, transcript.summary(scenario.encoding)))
            return pattern;
    }
    return std::nullopt;
}

FeasibilityResult decide_feasible(const LatticeScenario& scenario, const SearchBounds& bounds,
                                  StrategyFamily family, int parallelism) {
    const StrategyEnumeration enumeration(scenario, bounds, family);
    if (admissible_patterns(scenario.task).empty())
        throw input_error("scenario has no admissible pattern");

    const std::uint64_t total = enumeration.size();
    const int workers =
        std::max(1, std::min<int>(parallelism, static_cast<int>(std::min<std::uint64_t>(total, 64))));

    const auto deadline = bounds.budget
                              ? std::chrono::steady_clock::now() + *bounds.budget
                              : std::chrono::steady_clock::time_point::max();

    std::vector<CallPattern> certificates(total);
    std::atomic<std::uint64_t> best{UINT64_MAX};
    std::atomic<bool> expired{false};
    std::vector<std::uint64_t> evaluated(workers, 0);

    const auto work = [&](int w) {
        const std::uint64_t lo = total * w / workers;
        const std::uint64_t hi = total * (w + 1) / workers;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            if ((idx - lo) % 64 == 0 && bounds.budget && std::chrono::steady_clock::now() > deadline)
                expired.store(true, std::memory_order_relaxed);
            if (expired.load(std::memory_order_relaxed)) break;
            if (best.load(std::memory_order_relaxed) < lo) break;  // a lower chunk already won
            const auto failure = first_failure(scenario, enumeration.at(idx));
            ++evaluated[w];
            if (!failure) {
                std::uint64_t seen = best.load(std::memory_order_relaxed);
                while (idx < seen && !best.compare_exchange_weak(seen, idx)) {
                }
                break;  // later indices in this chunk cannot beat idx
            }
            certificates[idx] = *failure;
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    if (expired.load()) {
        std::uint64_t count = 0;
        for (std::uint64_t c : evaluated) count += c;
        return Exhausted{count, *bounds.budget};
    }
    const std::uint64_t winner = best.load();
    if (winner != UINT64_MAX) {
        Strategy witness = enumeration.at(winner);
        if (!guaranteed_success(scenario, witness).success)
            throw std::logic_error("witness failed re-verification");
        return Feasible{winner, std::move(witness)};
    }
    return Infeasible{std::move(certificates)};
}

std::vector<int> refined_local_search(const RefinedBitTask& task) {
    const LatticeScenario scenario = make_refined_scenario(task);
    std::vector<int> winners;
    for (int idx = 0; idx < 16; ++idx)
        if (guaranteed_success(scenario, make_local_response_strategy(idx)).success)
            winners.push_back(idx);
    return winners;
}

std::vector<int> refined_local_search(Promise promise) {
    return refined_local_search(RefinedBitTask(8, 1, promise));
}

}  // namespace summon
