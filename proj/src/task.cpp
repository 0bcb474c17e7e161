#include "summon/task.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace summon {

CallPattern::CallPattern(const std::vector<int>& indices) {
    for (int i : indices) {
        if (i < 0 || i >= 64) throw input_error("pattern index out of range: " + std::to_string(i));
        mask_ |= std::uint64_t{1} << i;
    }
}

CallPattern CallPattern::from_bits(int b0, int b1) {
    std::uint64_t m = 0;
    if (b0) m |= 1;
    if (b1) m |= 2;
    return CallPattern(m);
}

int CallPattern::size() const { return std::popcount(mask_); }

std::vector<int> CallPattern::indices() const {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if (contains(i)) out.push_back(i);
    return out;
}

SummoningTask::SummoningTask(Point start_, std::vector<CallReturnPair> pairs_, CallMode mode_)
    : start(std::move(start_)), pairs(std::move(pairs_)), mode(mode_) {
    if (pairs.empty()) throw input_error("summoning task needs at least one call/return pair");
    if (pairs.size() > 63) throw input_error("too many pairs (max 63)");
    for (const auto& p : pairs) {
        if (p.call.dimension() != start.dimension() || p.ret.dimension() != start.dimension())
            throw input_error("all task points must share one dimension");
    }
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = i + 1; j < pairs.size(); ++j)
            if (pairs[i] == pairs[j]) throw input_error("duplicate call/return pair");
}

RefinedBitTask::RefinedBitTask(Coord D_, Coord eps_, Promise promise_)
    : D(D_), eps(eps_), promise(promise_) {
    if (eps < 1) throw input_error("eps must be >= 1");
    if (D < 2 * eps) throw input_error("D must be >= 2*eps");
}

OriginalSignalTask::OriginalSignalTask(Coord D_, CallPattern requests_)
    : D(D_), requests(requests_) {
    if (D < 2) throw input_error("D must be >= 2");
    if (requests.empty() || (requests.mask() & ~std::uint64_t{0b11}) != 0)
        throw input_error("requests must be a nonempty subset of {1,2}");
}

std::string PairCheck::reason() const {
    if (passed()) return "ok";
    std::string why;
    if (!call_before_return) why = "return point not strictly after call point";
    if (!start_before_return) {
        if (!why.empty()) why += "; ";
        why += "return point not strictly after start";
    }
    return why;
}

bool ValidationReport::passed() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const PairCheck& c) { return c.passed(); });
}

ValidationReport validate_summoning(const SummoningTask& task) {
    ValidationReport report;
    for (int i = 0; i < task.pair_count(); ++i) {
        const auto& pair = task.pairs[i];
        PairCheck check;
        check.index = i;
        check.call_before_return = strictly_precedes(pair.call, pair.ret);
        check.start_before_return = strictly_precedes(task.start, pair.ret);
        report.pairs.push_back(check);
    }
    return report;
}

std::vector<CallPattern> admissible_patterns(const SummoningTask& task) {
    std::vector<CallPattern> out;
    const int n = task.pair_count();
    if (task.mode == CallMode::SingleGuaranteed) {
        for (int i = 0; i < n; ++i) out.push_back(CallPattern(std::uint64_t{1} << i));
    } else {
        const std::uint64_t full = (std::uint64_t{1} << n) - 1;
        for (std::uint64_t m = 1; m <= full; ++m) out.push_back(CallPattern(m));
    }
    return out;
}

std::vector<CallPattern> admissible_patterns(const RefinedBitTask& task) {
    // (b0,b1) listed as (0,1), (1,0), then (1,1) when the promise allows it.
    std::vector<CallPattern> out{CallPattern::from_bits(0, 1), CallPattern::from_bits(1, 0)};
    if (task.promise == Promise::AtLeastOne) out.push_back(CallPattern::from_bits(1, 1));
    return out;
}

std::vector<CallPattern> admissible_patterns(const OriginalSignalTask& task) {
    std::vector<CallPattern> out;
    for (std::uint64_t m = 1; m <= 3; ++m)
        if ((m & ~task.requests.mask()) == 0) out.push_back(CallPattern(m));
    return out;
}

std::vector<CallPattern> admissible_patterns(const Task& task) {
    return std::visit([](const auto& t) { return admissible_patterns(t); }, task);
}

bool success_predicate(const SummoningTask& task, const CallPattern& pattern, const RunSummary& outcome) {
    if (task.start.dimension() != 1)
        throw input_error("delivery outcomes are one-dimensional; task is not");
    // Exactly one delivery, and it must coincide with the return point of a called pair.
    if (outcome.deliveries.size() != 1) return false;
    const Delivery& d = outcome.deliveries.front();
    for (int i : pattern.indices()) {
        if (i >= task.pair_count()) throw input_error("pattern index exceeds pair count");
        const Point& r = task.pairs[i].ret;
        if (d.t == r.t && d.x == r.x[0]) return true;
    }
    return false;
}

namespace {

// Bit received by wing i, judged from deliveries at its B site up to the
// deadline: -1 none, 0/1 a clean bit, -2 garbled (wrong symbol or more
// than one arrival).
int wing_bit(const RefinedBitTask& task, const RunSummary& outcome, int wing) {
    const Coord site = task.b_site(wing);
    int count = 0;
    int bit = -1;
    for (const Delivery& d : outcome.deliveries) {
        if (d.x != site || d.t < 0 || d.t > task.deadline()) continue;
        ++count;
        if (outcome.encoding == BitEncoding::Presence) {
            bit = 1;
        } else if (d.sym == "0") {
            bit = 0;
        } else if (d.sym == "1") {
            bit = 1;
        } else {
            return -2;
        }
    }
    if (count == 0) return outcome.encoding == BitEncoding::Presence ? 0 : -1;
    if (count > 1) return -2;
    return bit;
}

}  // namespace

bool success_predicate(const RefinedBitTask& task, const CallPattern& pattern, const RunSummary& outcome) {
    if ((pattern.mask() & ~std::uint64_t{0b11}) != 0 || pattern.empty())
        throw input_error("refined-task pattern must be a nonempty subset of {0,1}");
    const int b0 = wing_bit(task, outcome, 0);
    const int b1 = wing_bit(task, outcome, 1);
    if (b0 < 0 || b1 < 0) return false;
    if (b0 + b1 != 1) return false;  // one 0 and one 1
    const int one_wing = b1 == 1 ? 1 : 0;
    return pattern.contains(one_wing);
}

CallPattern fulfilled_requests(const OriginalSignalTask& task, const RunSummary& outcome) {
    const Coord T = task.transit_time();
    std::uint64_t m = 0;
    for (int req = 0; req < 2; ++req) {
        const Coord dest = task.lab_site(req);
        const Coord opposite = task.source_site(req);
        bool arrived = false;
        bool opposite_hit = false;
        for (const Delivery& d : outcome.deliveries) {
            if (d.x == dest && d.t == T) arrived = true;
            if (d.x == opposite && d.t >= 0 && d.t <= T) opposite_hit = true;
        }
        if (arrived && !opposite_hit) m |= std::uint64_t{1} << req;
    }
    return CallPattern(m);
}

bool success_predicate(const OriginalSignalTask& task, const CallPattern& pattern, const RunSummary& outcome) {
    if ((pattern.mask() & ~task.requests.mask()) != 0 || pattern.empty())
        throw input_error("pattern is not an admissible request subset");
    // B is satisfied when at least one submitted request is fulfilled.
    return (fulfilled_requests(task, outcome).mask() & pattern.mask()) != 0;
}

bool success_predicate(const Task& task, const CallPattern& pattern, const RunSummary& outcome) {
    return std::visit([&](const auto& t) { return success_predicate(t, pattern, outcome); }, task);
}

namespace {

std::string reason_for(const SummoningTask& task, const CallPattern& pattern, const RunSummary& outcome) {
    if (outcome.deliveries.size() != 1)
        return "expected exactly one delivery, got " + std::to_string(outcome.deliveries.size());
    const Delivery& d = outcome.deliveries.front();
    for (int i = 0; i < task.pair_count(); ++i) {
        const Point& r = task.pairs[i].ret;
        if (d.t == r.t && d.x == r.x[0] && !pattern.contains(i))
            return "delivered at return point " + std::to_string(i + 1) + ", which was not called";
    }
    return "delivery at (t=" + std::to_string(d.t) + ", x=" + std::to_string(d.x) +
           ") is not a return point";
}

std::string reason_for(const RefinedBitTask& task, const CallPattern& pattern, const RunSummary& outcome) {
    const int b0 = wing_bit(task, outcome, 0);
    const int b1 = wing_bit(task, outcome, 1);
    for (int wing = 0; wing < 2; ++wing) {
        const int bit = wing == 0 ? b0 : b1;
        if (bit == -2) return "wing " + std::to_string(wing) + " output garbled";
        if (bit == -1) return "wing " + std::to_string(wing) + " received no bit by the deadline";
    }
    if (b0 + b1 != 1)
        return "outputs not anti-correlated (wing 0 got " + std::to_string(b0) +
               ", wing 1 got " + std::to_string(b1) + ")";
    const int one_wing = b1 == 1 ? 1 : 0;
    if (!pattern.contains(one_wing))
        return "the 1 went to wing " + std::to_string(one_wing) + ", whose input bit was 0";
    return "ok";
}

std::string reason_for(const OriginalSignalTask& task, const CallPattern& pattern, const RunSummary& outcome) {
    const CallPattern fulfilled = fulfilled_requests(task, outcome);
    if ((fulfilled.mask() & pattern.mask()) != 0) return "ok";
    std::string why;
    for (int req : pattern.indices()) {
        if (!why.empty()) why += "; ";
        const Coord dest = task.lab_site(req);
        bool arrived = false;
        for (const Delivery& d : outcome.deliveries)
            if (d.x == dest && d.t == task.transit_time()) arrived = true;
        why += "task " + std::to_string(req + 1);
        if (!arrived)
            why += ": nothing delivered at x=" + std::to_string(dest) +
                   " at t=" + std::to_string(task.transit_time());
        else
            why += ": an opposite-direction delivery occurred within [0, T]";
    }
    return why;
}

}  // namespace

std::string failure_reason(const Task& task, const CallPattern& pattern, const RunSummary& outcome) {
    if (success_predicate(task, pattern, outcome)) return "ok";
    return std::visit([&](const auto& t) { return reason_for(t, pattern, outcome); }, task);
}

std::string pattern_to_string(const Task& task, const CallPattern& pattern) {
    if (std::holds_alternative<RefinedBitTask>(task)) {
        std::string s;
        s += pattern.contains(0) ? '1' : '0';
        s += pattern.contains(1) ? '1' : '0';
        return s;
    }
    std::ostringstream out;
    bool first = true;
    for (int i : pattern.indices()) {
        if (!first) out << ",";
        out << (i + 1);
        first = false;
    }
    return out.str();
}

CallPattern pattern_from_string(const Task& task, const std::string& text) {
    if (std::holds_alternative<RefinedBitTask>(task)) {
        if (text.size() != 2 || (text[0] != '0' && text[0] != '1') || (text[1] != '0' && text[1] != '1'))
            throw input_error("refined pattern must be two bits, e.g. 01");
        CallPattern p = CallPattern::from_bits(text[0] == '1', text[1] == '1');
        if (p.empty()) throw input_error("refined pattern must contain at least one 1");
        return p;
    }
    int limit = 64;
    if (const auto* s = std::get_if<SummoningTask>(&task)) limit = s->pair_count();
    if (std::holds_alternative<OriginalSignalTask>(task)) limit = 2;
    std::uint64_t m = 0;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(item, &pos);
        } catch (const std::exception&) {
            throw input_error("bad pattern element '" + item + "'");
        }
        if (pos != item.size()) throw input_error("bad pattern element '" + item + "'");
        if (v < 1 || v > limit) throw input_error("pattern index " + std::to_string(v) + " out of range 1.." + std::to_string(limit));
        const std::uint64_t bit = std::uint64_t{1} << (v - 1);
        if (m & bit) throw input_error("duplicate pattern index " + std::to_string(v));
        m |= bit;
    }
    if (m == 0) throw input_error("pattern must be nonempty");
    return CallPattern(m);
}

}  // namespace summon
