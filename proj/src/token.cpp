#include "summon/token.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "summon/errors.hpp"

namespace summon {

std::string to_string(const Knowledge& k) {
    std::string s;
    s.reserve(k.calls.size());
    for (CallKnowledge c : k.calls) {
        switch (c) {
            case CallKnowledge::Unknown: s += 'U'; break;
            case CallKnowledge::Called: s += 'C'; break;
            case CallKnowledge::NotCalled: s += 'N'; break;
        }
    }
    return s;
}

const char* to_string(TokenAction a) {
    switch (a) {
        case TokenAction::Deliver: return "deliver";
        case TokenAction::Hold: return "hold";
        case TokenAction::MoveLeft: return "move-left";
        case TokenAction::MoveRight: return "move-right";
    }
    return "?";
}

Knowledge knowledge_at(const Point& location, const CallPattern& pattern, const SummoningTask& task) {
    if (location.dimension() != task.start.dimension())
        throw input_error("knowledge_at: location dimension does not match the task");
    Knowledge k;
    k.calls.reserve(task.pairs.size());
    for (int i = 0; i < task.pair_count(); ++i) {
        if (!precedes(task.pairs[i].call, location))
            k.calls.push_back(CallKnowledge::Unknown);
        else
            k.calls.push_back(pattern.contains(i) ? CallKnowledge::Called : CallKnowledge::NotCalled);
    }
    return k;
}

namespace {

void require_token_task(const SummoningTask& task) {
    if (task.start.dimension() != 1)
        throw input_error("token tasks live on a line; points must be one-dimensional");
    if (task.pairs.empty()) throw input_error("token task has no call/return pairs");
    if (!validate_summoning(task).passed())
        throw input_error("token task fails the summoning validity check");
}

Coord last_return_time(const SummoningTask& task) {
    Coord t = task.pairs.front().ret.t;
    for (const auto& p : task.pairs) t = std::max(t, p.ret.t);
    return t;
}

std::string u128_to_string(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s += static_cast<char>('0' + static_cast<int>(v % 10));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

unsigned __int128 choose(std::uint64_t n, int k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - static_cast<std::uint64_t>(k) + i) / i;
    return r;
}

// The guaranteed-delivery game on (time, position, set of consistent
// patterns). After a move the consistent set splits by the knowledge
// revealed at the new point; the mover wins a state iff delivering
// succeeds for every consistent pattern, or some move wins every piece
// of the split. Along any reachable history the consistent set is a
// function of (t, x, Knowledge): the past cones of earlier trajectory
// points nest inside the current one, so agreeing with the knowledge
// here means agreeing with it everywhere behind.
struct TokenSearch {
    const SummoningTask* task = nullptr;
    TokenWindow window;
    std::vector<std::uint32_t> patterns;  // admissible patterns as pair bitmasks
    int P = 0;
    Coord t0 = 0;
    Coord t_stop = 0;
    int width = 0;
    std::vector<std::int8_t>* memo = nullptr;  // -1 unknown, 0 lose, 1 win

    struct Group {
        std::uint64_t code = 0;
        std::uint32_t mask = 0;
    };

    void bind(const SummoningTask& tk, const TokenWindow& w, std::vector<std::int8_t>& m) {
        task = &tk;
        window = w;
        patterns.clear();
        for (const CallPattern& p : admissible_patterns(tk))
            patterns.push_back(static_cast<std::uint32_t>(p.mask()));
        P = static_cast<int>(patterns.size());
        if (P > 16)
            throw resource_error("consistent-set search handles at most 16 admissible patterns, task has " +
                                 std::to_string(P));
        t0 = tk.start.t;
        t_stop = std::min(window.t_max, last_return_time(tk));
        width = static_cast<int>(window.x_max - window.x_min + 1);
        const std::uint64_t states =
            (static_cast<std::uint64_t>(t_stop - t0 + 1) * static_cast<std::uint64_t>(width)) << P;
        const std::uint64_t cap = std::uint64_t{64} << 20;
        if (states > cap)
            throw resource_error("consistent-set search needs " + std::to_string(states) +
                                 " memo entries, cap is " + std::to_string(cap));
        memo = &m;
        m.assign(states, -1);
    }

    std::size_t idx(Coord t, Coord x, std::uint32_t cmask) const {
        const std::size_t cell = static_cast<std::size_t>(t - t0) * static_cast<std::size_t>(width) +
                                 static_cast<std::size_t>(x - window.x_min);
        return (cell << P) + cmask;
    }

    bool cone_reached(int pair, Coord t, Coord x) const {
        const Point& c = task->pairs[static_cast<std::size_t>(pair)].call;
        const Coord dx = x >= c.x[0] ? x - c.x[0] : c.x[0] - x;
        return t - c.t >= dx;
    }

    std::uint64_t kcode(std::uint32_t pmask, Coord t, Coord x) const {
        std::uint64_t code = 0;
        for (int i = 0; i < task->pair_count(); ++i)
            if (cone_reached(i, t, x))
                code |= static_cast<std::uint64_t>(((pmask >> i) & 1u) ? 1 : 2) << (2 * i);
        return code;
    }

    std::uint32_t return_mask(Coord t, Coord x) const {
        std::uint32_t m = 0;
        for (int i = 0; i < task->pair_count(); ++i) {
            const Point& r = task->pairs[static_cast<std::size_t>(i)].ret;
            if (r.t == t && r.x[0] == x) m |= 1u << i;
        }
        return m;
    }

    // Delivering here wins iff every consistent pattern calls some pair
    // whose return point is exactly here.
    bool deliver_wins(Coord t, Coord x, std::uint32_t cmask) const {
        const std::uint32_t rm = return_mask(t, x);
        if (rm == 0) return false;
        for (std::uint32_t rest = cmask; rest != 0; rest &= rest - 1) {
            const int p = std::countr_zero(rest);
            if ((patterns[static_cast<std::size_t>(p)] & rm) == 0) return false;
        }
        return true;
    }

    int split(Coord t, Coord x, std::uint32_t cmask, Group* groups) const {
        int count = 0;
        for (std::uint32_t rest = cmask; rest != 0; rest &= rest - 1) {
            const int p = std::countr_zero(rest);
            const std::uint64_t code = kcode(patterns[static_cast<std::size_t>(p)], t, x);
            int g = 0;
            while (g < count && groups[g].code != code) ++g;
            if (g == count) groups[count++] = Group{code, 0};
            groups[g].mask |= 1u << p;
        }
        return count;
    }

    bool move_wins(Coord t, Coord x, std::uint32_t cmask) {
        Group groups[16];
        const int n = split(t, x, cmask, groups);
        for (int g = 0; g < n; ++g)
            if (!win(t, x, groups[g].mask)) return false;
        return true;
    }

    bool win(Coord t, Coord x, std::uint32_t cmask) {
        std::int8_t& slot = (*memo)[idx(t, x, cmask)];
        if (slot >= 0) return slot != 0;
        bool w = deliver_wins(t, x, cmask);
        if (!w && t < t_stop) {
            if (move_wins(t + 1, x, cmask)) w = true;
            else if (x > window.x_min && move_wins(t + 1, x - 1, cmask)) w = true;
            else if (x < window.x_max && move_wins(t + 1, x + 1, cmask)) w = true;
        }
        slot = w ? 1 : 0;
        return w;
    }

    int initial_split(Group* groups) const {
        const std::uint32_t all = (P >= 32) ? ~0u : ((1u << P) - 1u);
        return split(t0, task->start.x[0], all, groups);
    }

    bool decide() {
        Group groups[16];
        const int n = initial_split(groups);
        for (int g = 0; g < n; ++g)
            if (!win(t0, task->start.x[0], groups[g].mask)) return false;
        return true;
    }

    // Witness actions are chosen deliver first, then hold, move-left,
    // move-right; the same order win() probes, so the recorded plan is
    // the one the search certified.
    void extract(Coord t, Coord x, std::uint32_t cmask, TokenPlan& plan,
                 std::set<std::tuple<Coord, Coord, std::uint32_t>>& seen) {
        if (!seen.insert({t, x, cmask}).second) return;
        const int first = std::countr_zero(cmask);
        const auto key = std::make_tuple(
            t, x, knowledge_at(pt(t, x), CallPattern(patterns[static_cast<std::size_t>(first)]), *task));
        if (deliver_wins(t, x, cmask)) {
            plan.decisions[key] = TokenAction::Deliver;
            return;
        }
        if (t < t_stop) {
            struct Option {
                TokenAction action;
                Coord nx;
                bool allowed;
            };
            const Option options[3] = {
                {TokenAction::Hold, x, true},
                {TokenAction::MoveLeft, x - 1, x > window.x_min},
                {TokenAction::MoveRight, x + 1, x < window.x_max},
            };
            for (const Option& o : options) {
                if (!o.allowed || !move_wins(t + 1, o.nx, cmask)) continue;
                plan.decisions[key] = o.action;
                Group groups[16];
                const int n = split(t + 1, o.nx, cmask, groups);
                for (int g = 0; g < n; ++g) extract(t + 1, o.nx, groups[g].mask, plan, seen);
                return;
            }
        }
        throw std::logic_error("token witness extraction reached a losing state");
    }
};

}  // namespace

TokenRunResult plan_run(const SummoningTask& task, const TokenPlan& plan, const CallPattern& pattern) {
    require_token_task(task);
    if (pattern.empty()) throw input_error("plan_run needs at least one called pair");
    for (int i : pattern.indices())
        if (i >= task.pair_count())
            throw input_error("pattern calls pair index " + std::to_string(i) + ", task has only " +
                              std::to_string(task.pair_count()));

    TokenRunResult res;
    Coord t = task.start.t;
    Coord x = task.start.x[0];
    const Coord t_end = last_return_time(task);
    while (t <= t_end) {
        Knowledge k = knowledge_at(pt(t, x), pattern, task);
        const auto it = plan.decisions.find({t, x, k});
        if (it == plan.decisions.end())
            throw input_error("plan has no action for t=" + std::to_string(t) + " x=" + std::to_string(x) +
                              " knowledge=" + to_string(k));
        res.steps.push_back({t, x, k, it->second});
        if (it->second == TokenAction::Deliver) {
            res.delivered = pt(t, x);
            break;
        }
        if (it->second == TokenAction::MoveLeft) --x;
        else if (it->second == TokenAction::MoveRight) ++x;
        ++t;
    }
    if (res.delivered)
        for (int i : pattern.indices())
            if (task.pairs[static_cast<std::size_t>(i)].ret == *res.delivered) res.success = true;
    return res;
}

std::optional<TokenPlan> token_feasible(const SummoningTask& task, const TokenWindow& window) {
    require_token_task(task);
    if (window.x_min > window.x_max) throw input_error("window has x_min greater than x_max");
    const auto inside = [&](const Point& p) {
        return p.x[0] >= window.x_min && p.x[0] <= window.x_max && p.t <= window.t_max;
    };
    bool contained = inside(task.start);
    for (const auto& pr : task.pairs) contained = contained && inside(pr.call) && inside(pr.ret);
    if (!contained) throw input_error("window too small to contain all task points");

    std::vector<std::int8_t> memo;
    TokenSearch search;
    search.bind(task, window, memo);
    if (!search.decide()) return std::nullopt;

    TokenPlan plan;
    std::set<std::tuple<Coord, Coord, std::uint32_t>> seen;
    TokenSearch::Group groups[16];
    const int n = search.initial_split(groups);
    for (int g = 0; g < n; ++g) search.extract(task.start.t, task.start.x[0], groups[g].mask, plan, seen);
    return plan;
}

namespace {

struct GridPair {
    Coord ct = 0, cx = 0, rt = 0, rx = 0;
};

struct SweepSlice {
    std::uint64_t tasks = 0;
    std::uint64_t single_feasible = 0;
    std::uint64_t multi_feasible = 0;
    std::vector<SummoningTask> counterexamples;
    std::exception_ptr error;
};

}  // namespace

SweepReport monotonicity_sweep(const SweepOptions& options) {
    const TokenWindow& w = options.window;
    if (w.x_min > w.x_max) throw input_error("window has x_min greater than x_max");
    if (w.t_max < 0) throw input_error("window has no nonnegative times");
    if (options.pairs < 1) throw input_error("sweep needs at least one call/return pair");
    if (options.pairs > 4)
        throw resource_error("sweep handles at most 4 pairs; the multiple-mode pattern set doubles per pair");

    const int N = options.pairs;
    const std::uint64_t width = static_cast<std::uint64_t>(w.x_max - w.x_min + 1);
    const std::uint64_t grid = static_cast<std::uint64_t>(w.t_max + 1) * width;
    if (grid > 1024)
        throw resource_error("sweep grid has " + std::to_string(grid) + " lattice points, cap is 1024");

    // Fixed grid order: time-major, position ascending; candidate pairs
    // and tasks inherit it, so reports are stable across thread counts.
    std::vector<Point> sites;
    sites.reserve(grid);
    for (Coord t = 0; t <= w.t_max; ++t)
        for (Coord x = w.x_min; x <= w.x_max; ++x) sites.push_back(pt(t, x));

    std::vector<GridPair> candidates;
    {
        Point a = pt(0, 0), b = pt(0, 0);
        for (const Point& c : sites)
            for (const Point& r : sites) {
                a.t = c.t;
                a.x[0] = c.x[0];
                b.t = r.t;
                b.x[0] = r.x[0];
                if (strictly_precedes(a, b)) candidates.push_back({c.t, c.x[0], r.t, r.x[0]});
            }
    }

    // Count first so the cap rejects before any search runs.
    std::vector<std::uint64_t> tasks_per_start(sites.size(), 0);
    unsigned __int128 total = 0;
    {
        Point a = pt(0, 0), b = pt(0, 0);
        for (std::size_t si = 0; si < sites.size(); ++si) {
            std::uint64_t compatible = 0;
            for (const GridPair& g : candidates) {
                a.t = sites[si].t;
                a.x[0] = sites[si].x[0];
                b.t = g.rt;
                b.x[0] = g.rx;
                if (strictly_precedes(a, b)) ++compatible;
            }
            const unsigned __int128 here = choose(compatible, N);
            tasks_per_start[si] = static_cast<std::uint64_t>(here);
            total += here;
        }
    }
    if (total > options.enumeration_cap)
        throw resource_error("sweep needs " + u128_to_string(total) + " tasks, enumeration cap is " +
                             std::to_string(options.enumeration_cap));

    const std::uint64_t total64 = static_cast<std::uint64_t>(total);
    int workers = std::clamp(options.parallelism, 1, 64);
    workers = static_cast<int>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(sites.size(), 1)));

    // Contiguous start-site ranges with roughly equal task counts.
    std::vector<std::size_t> cuts;
    cuts.push_back(0);
    {
        std::uint64_t done = 0;
        std::size_t si = 0;
        for (int c = 1; c < workers; ++c) {
            const std::uint64_t goal = total64 * static_cast<std::uint64_t>(c) / static_cast<std::uint64_t>(workers);
            while (si < sites.size() && done < goal) done += tasks_per_start[si++];
            cuts.push_back(si);
        }
        cuts.push_back(sites.size());
    }

    std::vector<SweepSlice> slices(static_cast<std::size_t>(workers));
    const auto run_slice = [&](std::size_t lo, std::size_t hi, SweepSlice& out) {
        try {
            SummoningTask scratch;
            scratch.start = pt(0, 0);
            scratch.pairs.assign(static_cast<std::size_t>(N), CallReturnPair{pt(0, 0), pt(0, 0)});
            TokenSearch search;
            std::vector<std::int8_t> memo;
            Point a = pt(0, 0), b = pt(0, 0);
            std::vector<std::uint32_t> live;  // candidate indices compatible with this start
            std::vector<std::size_t> combo(static_cast<std::size_t>(N));
            for (std::size_t si = lo; si < hi; ++si) {
                live.clear();
                for (std::uint32_t gi = 0; gi < candidates.size(); ++gi) {
                    a.t = sites[si].t;
                    a.x[0] = sites[si].x[0];
                    b.t = candidates[gi].rt;
                    b.x[0] = candidates[gi].rx;
                    if (strictly_precedes(a, b)) live.push_back(gi);
                }
                if (live.size() < static_cast<std::size_t>(N)) continue;
                for (std::size_t j = 0; j < combo.size(); ++j) combo[j] = j;
                for (;;) {
                    scratch.start.t = sites[si].t;
                    scratch.start.x[0] = sites[si].x[0];
                    for (std::size_t j = 0; j < combo.size(); ++j) {
                        const GridPair& g = candidates[live[combo[j]]];
                        scratch.pairs[j].call.t = g.ct;
                        scratch.pairs[j].call.x[0] = g.cx;
                        scratch.pairs[j].ret.t = g.rt;
                        scratch.pairs[j].ret.x[0] = g.rx;
                    }
                    ++out.tasks;
                    scratch.mode = CallMode::SingleGuaranteed;
                    search.bind(scratch, w, memo);
                    const bool single_ok = search.decide();
                    scratch.mode = CallMode::MultiplePossible;
                    search.bind(scratch, w, memo);
                    const bool multi_ok = search.decide();
                    if (single_ok) ++out.single_feasible;
                    if (multi_ok) ++out.multi_feasible;
                    if (single_ok && !multi_ok)
                        out.counterexamples.emplace_back(scratch.start, scratch.pairs,
                                                         CallMode::MultiplePossible);
                    // next N-combination of live indices, ascending
                    std::size_t j = combo.size();
                    while (j > 0 && combo[j - 1] == live.size() - combo.size() + (j - 1)) --j;
                    if (j == 0) break;
                    ++combo[j - 1];
                    for (std::size_t k = j; k < combo.size(); ++k) combo[k] = combo[k - 1] + 1;
                }
            }
        } catch (...) {
            out.error = std::current_exception();
        }
    };

    if (workers == 1) {
        run_slice(0, sites.size(), slices[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int c = 0; c < workers; ++c)
            pool.emplace_back(run_slice, cuts[static_cast<std::size_t>(c)], cuts[static_cast<std::size_t>(c) + 1],
                              std::ref(slices[static_cast<std::size_t>(c)]));
        for (std::thread& th : pool) th.join();
    }

    SweepReport report;
    for (const SweepSlice& s : slices) {
        if (s.error) std::rethrow_exception(s.error);
        report.tasks += s.tasks;
        report.single_feasible += s.single_feasible;
        report.multi_feasible += s.multi_feasible;
        report.counterexamples.insert(report.counterexamples.end(), s.counterexamples.begin(),
                                      s.counterexamples.end());
    }
    if (report.tasks != total64)
        throw std::logic_error("sweep enumeration count disagrees with the pre-count");
    return report;
}

}  // namespace summon
