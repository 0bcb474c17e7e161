#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "summon/geometry.hpp"

namespace summon {

/// A set of pair indices the adversary calls. For the two-wing bit task
/// index i set means "B_i sent a 1"; for the signal task index 0 is the
/// L-side request and index 1 the R-side request.
class CallPattern {
public:
    CallPattern() = default;
    explicit CallPattern(std::uint64_t mask) : mask_(mask) {}
    explicit CallPattern(const std::vector<int>& indices);

    static CallPattern from_bits(int b0, int b1);

    std::uint64_t mask() const { return mask_; }
    bool contains(int i) const { return (mask_ >> i) & 1u; }
    bool empty() const { return mask_ == 0; }
    int size() const;
    std::vector<int> indices() const;

    bool operator==(const CallPattern&) const = default;
    auto operator<=>(const CallPattern&) const = default;

private:
    std::uint64_t mask_ = 0;
};

enum class CallMode { SingleGuaranteed, MultiplePossible };
enum class Promise { ExactlyOne, AtLeastOne };

struct CallReturnPair {
    Point call;
    Point ret;

    bool operator==(const CallReturnPair&) const = default;
};

/// The general summoning task: a start point s, call points c_i with
/// return points r_i, and the call mode.
struct SummoningTask {
    Point start;
    std::vector<CallReturnPair> pairs;
    CallMode mode = CallMode::SingleGuaranteed;

    SummoningTask() = default;
    SummoningTask(Point start_, std::vector<CallReturnPair> pairs_, CallMode mode_);

    int pair_count() const { return static_cast<int>(pairs.size()); }
};

/// The two-wing bit task. Wing layout is derived from D and eps:
/// B_0 at -eps, A_0 at 0, A_1 at D, B_1 at D+eps; inputs at t=0,
/// outputs due back at the B sites by t = 2*eps.
struct RefinedBitTask {
    Coord D = 0;
    Coord eps = 0;
    Promise promise = Promise::AtLeastOne;

    RefinedBitTask() = default;
    RefinedBitTask(Coord D_, Coord eps_, Promise promise_);

    Coord a_site(int wing) const { return wing == 0 ? 0 : D; }
    Coord b_site(int wing) const { return wing == 0 ? -eps : D + eps; }
    Coord deadline() const { return 2 * eps; }
};

/// The two-lab signal task: labs L at x=0 and R at x=D, lightspeed
/// transit time T = D. Request i=0 asks for a signal delivered at R at
/// exactly t=T with nothing delivered at L in [0,T]; request i=1 is the
/// mirror image.
struct OriginalSignalTask {
    Coord D = 0;
    CallPattern requests = CallPattern(0b11);  // which requests may occur

    OriginalSignalTask() = default;
    explicit OriginalSignalTask(Coord D_, CallPattern requests_ = CallPattern(0b11));

    Coord lab_site(int request) const { return request == 0 ? D : 0; }  // delivery destination
    Coord source_site(int request) const { return request == 0 ? 0 : D; }
    Coord transit_time() const { return D; }
};

using Task = std::variant<SummoningTask, RefinedBitTask, OriginalSignalTask>;

/// Per-pair result of the summoning validity check r_i > c_i and r_i > s.
struct PairCheck {
    int index = 0;
    bool call_before_return = false;
    bool start_before_return = false;

    bool passed() const { return call_before_return && start_before_return; }
    std::string reason() const;
};

struct ValidationReport {
    std::vector<PairCheck> pairs;

    bool passed() const;
};

ValidationReport validate_summoning(const SummoningTask& task);

std::vector<CallPattern> admissible_patterns(const SummoningTask& task);
std::vector<CallPattern> admissible_patterns(const RefinedBitTask& task);
std::vector<CallPattern> admissible_patterns(const OriginalSignalTask& task);
std::vector<CallPattern> admissible_patterns(const Task& task);

/// How delivered symbols encode bits in a scenario. ExplicitBits carries
/// "0"/"1" message symbols; Presence encodes a wing's bit as whether any
/// symbol arrives at its B site before the deadline.
enum class BitEncoding { ExplicitBits, Presence };

struct Delivery {
    Coord t = 0;
    Coord x = 0;
    std::string sym;

    bool operator==(const Delivery&) const = default;
};

/// The outcome summary a success predicate consumes: the delivery events
/// of one completed run, plus how symbols encode bits.
struct RunSummary {
    std::vector<Delivery> deliveries;
    BitEncoding encoding = BitEncoding::ExplicitBits;
};

bool success_predicate(const SummoningTask& task, const CallPattern& pattern, const RunSummary& outcome);
bool success_predicate(const RefinedBitTask& task, const CallPattern& pattern, const RunSummary& outcome);
bool success_predicate(const OriginalSignalTask& task, const CallPattern& pattern, const RunSummary& outcome);
bool success_predicate(const Task& task, const CallPattern& pattern, const RunSummary& outcome);

/// Which of the two signal requests a run fulfilled. Judged by delivery:
/// request 0 is fulfilled iff something arrives at R at exactly t=T and
/// nothing arrives at L within [0, T].
CallPattern fulfilled_requests(const OriginalSignalTask& task, const RunSummary& outcome);

/// "ok" when the success predicate holds; otherwise a short account of
/// the violated requirement, for failure certificates and reports.
std::string failure_reason(const Task& task, const CallPattern& pattern, const RunSummary& outcome);

/// Render a pattern for reports: bit form "01"/"10"/"11" for the refined
/// task, comma-separated 1-based indices otherwise.
std::string pattern_to_string(const Task& task, const CallPattern& pattern);
CallPattern pattern_from_string(const Task& task, const std::string& text);

}  // namespace summon
