#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "summon/errors.hpp"
#include "summon/token.hpp"

using namespace summon;

namespace {

SummoningTask two_pair_task(Coord ret_t, CallMode mode) {
    return SummoningTask(pt(0, 2), {{pt(1, 0), pt(ret_t, 0)}, {pt(1, 4), pt(ret_t, 4)}}, mode);
}

TokenWindow wide_window() { return TokenWindow{-4, 4, 6}; }

// Bottom-up table, filled latest time first with plain loops. Shares
// only the task types and the public cone predicates with the library;
// the recursive consistent-set search must agree with it.
bool oracle_feasible(const SummoningTask& task, const TokenWindow& w) {
    const auto pats = admissible_patterns(task);
    const int P = static_cast<int>(pats.size());
    const Coord t0 = task.start.t;
    Coord t_stop = task.pairs.front().ret.t;
    for (const auto& pr : task.pairs) t_stop = std::max(t_stop, pr.ret.t);
    t_stop = std::min(t_stop, w.t_max);
    const int width = static_cast<int>(w.x_max - w.x_min + 1);
    const std::size_t cmasks = std::size_t{1} << P;

    const auto kcode = [&](std::uint64_t pmask, Coord t, Coord x) {
        std::uint64_t code = 0;
        for (int i = 0; i < task.pair_count(); ++i) {
            if (!precedes(task.pairs[static_cast<std::size_t>(i)].call, pt(t, x))) continue;
            code |= (((pmask >> i) & 1u) ? std::uint64_t{1} : std::uint64_t{2}) << (2 * i);
        }
        return code;
    };
    const auto deliver_ok = [&](std::uint32_t cm, Coord t, Coord x) {
        for (int p = 0; p < P; ++p) {
            if (((cm >> p) & 1u) == 0) continue;
            bool hit = false;
            for (int i : pats[static_cast<std::size_t>(p)].indices())
                if (task.pairs[static_cast<std::size_t>(i)].ret == pt(t, x)) hit = true;
            if (!hit) return false;
        }
        return true;
    };

    std::vector<std::vector<char>> next(static_cast<std::size_t>(width), std::vector<char>(cmasks, 0));
    std::vector<std::vector<char>> here = next;
    for (Coord t = t_stop; t >= t0; --t) {
        for (int xi = 0; xi < width; ++xi) {
            const Coord x = w.x_min + xi;
            for (std::uint32_t cm = 1; cm < cmasks; ++cm) {
                bool ok = deliver_ok(cm, t, x);
                for (int d = -1; d <= 1 && !ok; ++d) {
                    if (t == t_stop) break;
                    const Coord nx = x + d;
                    if (nx < w.x_min || nx > w.x_max) continue;
                    bool all = true;
                    std::uint32_t left = cm;
                    while (left != 0 && all) {
                        const int p = std::countr_zero(left);
                        const std::uint64_t code = kcode(pats[static_cast<std::size_t>(p)].mask(), t + 1, nx);
                        std::uint32_t gmask = 0;
                        for (std::uint32_t q = left; q != 0; q &= q - 1) {
                            const int pq = std::countr_zero(q);
                            if (kcode(pats[static_cast<std::size_t>(pq)].mask(), t + 1, nx) == code)
                                gmask |= 1u << pq;
                        }
                        left &= ~gmask;
                        all = next[static_cast<std::size_t>(nx - w.x_min)][gmask] != 0;
                    }
                    ok = all;
                }
                here[static_cast<std::size_t>(xi)][cm] = ok ? 1 : 0;
            }
        }
        std::swap(here, next);
    }

    const Coord sx = task.start.x[0];
    std::uint32_t left = (1u << P) - 1u;
    while (left != 0) {
        const int p = std::countr_zero(left);
        const std::uint64_t code = kcode(pats[static_cast<std::size_t>(p)].mask(), t0, sx);
        std::uint32_t gmask = 0;
        for (std::uint32_t q = left; q != 0; q &= q - 1) {
            const int pq = std::countr_zero(q);
            if (kcode(pats[static_cast<std::size_t>(pq)].mask(), t0, sx) == code) gmask |= 1u << pq;
        }
        left &= ~gmask;
        if (next[static_cast<std::size_t>(sx - w.x_min)][gmask] == 0) return false;
    }
    return true;
}

struct GridTask {
    SummoningTask single;
    SummoningTask multi;
};

// Direct nested-loop enumeration of every valid two-pair task in the
// window, in grid order: start sites time-major, candidate pairs by
// (call site, return site), combinations ascending.
std::vector<GridTask> enumerate_two_pair_tasks(const TokenWindow& w) {
    std::vector<Point> sites;
    for (Coord t = 0; t <= w.t_max; ++t)
        for (Coord x = w.x_min; x <= w.x_max; ++x) sites.push_back(pt(t, x));
    std::vector<CallReturnPair> cand;
    for (const Point& c : sites)
        for (const Point& r : sites)
            if (strictly_precedes(c, r)) cand.push_back({c, r});
    std::vector<GridTask> out;
    for (const Point& s : sites) {
        std::vector<CallReturnPair> live;
        for (const CallReturnPair& p : cand)
            if (strictly_precedes(s, p.ret)) live.push_back(p);
        for (std::size_t i = 0; i < live.size(); ++i)
            for (std::size_t j = i + 1; j < live.size(); ++j)
                out.push_back({SummoningTask(s, {live[i], live[j]}, CallMode::SingleGuaranteed),
                               SummoningTask(s, {live[i], live[j]}, CallMode::MultiplePossible)});
    }
    return out;
}

SummoningTask random_task_in_window(std::mt19937& rng, const TokenWindow& w, int pairs, CallMode mode) {
    std::uniform_int_distribution<Coord> pick_t(0, w.t_max);
    std::uniform_int_distribution<Coord> pick_x(w.x_min, w.x_max);
    for (;;) {
        const Point s = pt(pick_t(rng), pick_x(rng));
        std::vector<CallReturnPair> chosen;
        for (int k = 0; k < pairs && static_cast<int>(chosen.size()) == k; ++k)
            for (int attempt = 0; attempt < 200; ++attempt) {
                const Point c = pt(pick_t(rng), pick_x(rng));
                const Point r = pt(pick_t(rng), pick_x(rng));
                if (!strictly_precedes(c, r) || !strictly_precedes(s, r)) continue;
                const CallReturnPair pr{c, r};
                bool dup = false;
                for (const auto& q : chosen) dup = dup || q == pr;
                if (dup) continue;
                chosen.push_back(pr);
                break;
            }
        if (static_cast<int>(chosen.size()) == pairs) return SummoningTask(s, chosen, mode);
    }
}

}  // namespace

TEST_CASE("knowledge resolves exactly on the light cone") {
    const SummoningTask task = two_pair_task(5, CallMode::SingleGuaranteed);
    const CallPattern first_called(0b01);

    SUBCASE("at the start nothing is resolved") {
        CHECK(to_string(knowledge_at(pt(0, 2), first_called, task)) == "UU");
    }
    SUBCASE("one step before the cones arrive") {
        const Knowledge k = knowledge_at(pt(2, 2), first_called, task);
        CHECK(k.calls == std::vector<CallKnowledge>{CallKnowledge::Unknown, CallKnowledge::Unknown});
    }
    SUBCASE("the lightlike boundary already counts") {
        const Knowledge k = knowledge_at(pt(3, 2), first_called, task);
        CHECK(k.calls == std::vector<CallKnowledge>{CallKnowledge::Called, CallKnowledge::NotCalled});
        CHECK(to_string(k) == "CN");
    }
    SUBCASE("silence is information too") {
        CHECK(to_string(knowledge_at(pt(3, 2), CallPattern(0b10), task)) == "NC");
        CHECK(to_string(knowledge_at(pt(6, 2), CallPattern(0b11), task)) == "CC");
    }
    SUBCASE("coincidence with the call point resolves it") {
        CHECK(to_string(knowledge_at(pt(1, 0), first_called, task)) == "CU");
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(knowledge_at(Point(3, {2, 2}), first_called, task), input_error);
    }
}

TEST_CASE("plan runs follow the decision table") {
    const SummoningTask task(pt(0, 0), {{pt(1, 0), pt(2, 0)}}, CallMode::SingleGuaranteed);
    const Knowledge unknown{{CallKnowledge::Unknown}};
    const Knowledge called{{CallKnowledge::Called}};

    TokenPlan plan;
    plan.decisions[{0, 0, unknown}] = TokenAction::Hold;
    plan.decisions[{1, 0, called}] = TokenAction::Hold;
    plan.decisions[{2, 0, called}] = TokenAction::Deliver;

    SUBCASE("hold then deliver on time") {
        const TokenRunResult res = plan_run(task, plan, CallPattern(0b1));
        REQUIRE(res.steps.size() == 3);
        CHECK(res.steps[0].action == TokenAction::Hold);
        CHECK(res.steps[1].knowledge == called);
        CHECK(res.steps[2].action == TokenAction::Deliver);
        REQUIRE(res.delivered.has_value());
        CHECK(*res.delivered == pt(2, 0));
        CHECK(res.success);
    }
    SUBCASE("a missing state is an input error naming it") {
        plan.decisions.erase({2, 0, called});
        try {
            plan_run(task, plan, CallPattern(0b1));
            FAIL("incomplete plan accepted");
        } catch (const input_error& err) {
            const std::string msg = err.what();
            CHECK(msg.find("t=2 x=0 knowledge=C") != std::string::npos);
        }
    }
    SUBCASE("delivering anywhere else fails without throwing") {
        TokenPlan eager;
        eager.decisions[{0, 0, unknown}] = TokenAction::Deliver;
        const TokenRunResult res = plan_run(task, eager, CallPattern(0b1));
        REQUIRE(res.delivered.has_value());
        CHECK(*res.delivered == pt(0, 0));
        CHECK_FALSE(res.success);
    }
    SUBCASE("moves change position by exactly one site") {
        const SummoningTask mover(pt(0, 0), {{pt(1, 0), pt(3, 1)}}, CallMode::SingleGuaranteed);
        TokenPlan route;
        route.decisions[{0, 0, unknown}] = TokenAction::Hold;
        route.decisions[{1, 0, called}] = TokenAction::MoveRight;
        route.decisions[{2, 1, called}] = TokenAction::Hold;
        route.decisions[{3, 1, called}] = TokenAction::Deliver;
        const TokenRunResult res = plan_run(mover, route, CallPattern(0b1));
        CHECK(res.success);
        std::vector<Coord> xs;
        for (const TokenStep& s : res.steps) xs.push_back(s.x);
        CHECK(xs == std::vector<Coord>{0, 0, 1, 1});
    }
    SUBCASE("empty patterns and bad indices are rejected") {
        CHECK_THROWS_AS(plan_run(task, plan, CallPattern(0)), input_error);
        CHECK_THROWS_AS(plan_run(task, plan, CallPattern(0b10)), input_error);
    }
}

TEST_CASE("the symmetric two-pair task is feasible in single mode") {
    const SummoningTask task = two_pair_task(5, CallMode::SingleGuaranteed);
    const auto plan = token_feasible(task, wide_window());
    REQUIRE(plan.has_value());

    SUBCASE("the witness waits at the midpoint until the cones arrive") {
        const TokenRunResult res = plan_run(task, *plan, CallPattern(0b01));
        REQUIRE(res.steps.size() == 6);
        for (int i = 0; i < 3; ++i) {
            CHECK(res.steps[static_cast<std::size_t>(i)].action == TokenAction::Hold);
            CHECK(res.steps[static_cast<std::size_t>(i)].x == 2);
            CHECK(to_string(res.steps[static_cast<std::size_t>(i)].knowledge) == "UU");
        }
        CHECK(res.steps[3].t == 3);
        CHECK(to_string(res.steps[3].knowledge) == "CN");
        CHECK(res.steps[3].action == TokenAction::MoveLeft);
        CHECK(res.steps[4].action == TokenAction::MoveLeft);
        CHECK(res.steps[5].action == TokenAction::Deliver);
        REQUIRE(res.delivered.has_value());
        CHECK(*res.delivered == pt(5, 0));
        CHECK(res.success);
    }
    SUBCASE("the mirror pattern is sent the other way") {
        const TokenRunResult res = plan_run(task, *plan, CallPattern(0b10));
        CHECK(res.success);
        REQUIRE(res.delivered.has_value());
        CHECK(*res.delivered == pt(5, 4));
        CHECK(to_string(res.steps[3].knowledge) == "NC");
        CHECK(res.steps[3].action == TokenAction::MoveRight);
    }
    SUBCASE("multiple mode stays feasible here") {
        const SummoningTask multi = two_pair_task(5, CallMode::MultiplePossible);
        const auto mplan = token_feasible(multi, wide_window());
        REQUIRE(mplan.has_value());
        for (std::uint64_t m = 1; m <= 3; ++m) {
            const TokenRunResult res = plan_run(multi, *mplan, CallPattern(m));
            CHECK(res.success);
        }
    }
}

TEST_CASE("tightening the returns by one step kills feasibility") {
    const SummoningTask task = two_pair_task(4, CallMode::SingleGuaranteed);
    CHECK_FALSE(token_feasible(task, wide_window()).has_value());
    CHECK_FALSE(token_feasible(two_pair_task(4, CallMode::MultiplePossible), wide_window()).has_value());
}

TEST_CASE("one-pair tasks are always feasible") {
    std::mt19937 rng(612);
    const TokenWindow w = wide_window();
    for (int trial = 0; trial < 300; ++trial) {
        const SummoningTask task = random_task_in_window(rng, w, 1, CallMode::SingleGuaranteed);
        CAPTURE(to_string(task.start));
        CHECK(token_feasible(task, w).has_value());
    }
}

TEST_CASE("token_feasible input guards") {
    SUBCASE("points outside the window") {
        const SummoningTask task = two_pair_task(5, CallMode::SingleGuaranteed);
        try {
            token_feasible(task, TokenWindow{-4, 3, 6});
            FAIL("window check missed");
        } catch (const input_error& err) {
            CHECK(std::string(err.what()).find("window too small") != std::string::npos);
        }
        CHECK_THROWS_AS(token_feasible(task, TokenWindow{-4, 4, 4}), input_error);
        CHECK_THROWS_AS(token_feasible(task, TokenWindow{4, -4, 6}), input_error);
    }
    SUBCASE("invalid tasks are rejected before searching") {
        const SummoningTask late(pt(0, 0), {{pt(3, 0), pt(2, 0)}}, CallMode::SingleGuaranteed);
        CHECK_THROWS_AS(token_feasible(late, wide_window()), input_error);
        const SummoningTask planar(Point(0, {0, 0}), {{Point(1, {0, 0}), Point(2, {0, 0})}},
                                   CallMode::SingleGuaranteed);
        CHECK_THROWS_AS(token_feasible(planar, wide_window()), input_error);
    }
    SUBCASE("too many admissible patterns") {
        std::vector<CallReturnPair> pairs;
        for (Coord i = -2; i <= 2; ++i) pairs.push_back({pt(1, i), pt(10, i)});
        const SummoningTask big(pt(0, 0), pairs, CallMode::MultiplePossible);
        try {
            token_feasible(big, TokenWindow{-2, 2, 10});
            FAIL("pattern cap missed");
        } catch (const resource_error& err) {
            CHECK(std::string(err.what()).find("31") != std::string::npos);
        }
    }
}

TEST_CASE("witness runs respect the physical invariants") {
    std::mt19937 rng(4417);
    const TokenWindow w{-3, 3, 6};
    int feasible_seen = 0;
    for (int trial = 0; trial < 400 && feasible_seen < 40; ++trial) {
        const SummoningTask task = random_task_in_window(rng, w, 2, CallMode::MultiplePossible);
        const auto plan = token_feasible(task, w);
        if (!plan.has_value()) continue;
        ++feasible_seen;

        std::vector<TokenRunResult> runs;
        for (const CallPattern& p : admissible_patterns(task)) {
            const TokenRunResult res = plan_run(task, *plan, p);
            CHECK(res.success);
            REQUIRE(res.delivered.has_value());
            bool at_called_return = false;
            for (int i : p.indices())
                at_called_return =
                    at_called_return || task.pairs[static_cast<std::size_t>(i)].ret == *res.delivered;
            CHECK(at_called_return);

            int deliver_count = 0;
            for (std::size_t s = 0; s < res.steps.size(); ++s) {
                if (res.steps[s].action == TokenAction::Deliver) ++deliver_count;
                if (s > 0) {
                    const Coord dx = res.steps[s].x - res.steps[s - 1].x;
                    CHECK(dx * dx <= 1);
                    // knowledge never un-resolves along the trajectory
                    for (int i = 0; i < task.pair_count(); ++i) {
                        const CallKnowledge before = res.steps[s - 1].knowledge.calls[static_cast<std::size_t>(i)];
                        const CallKnowledge after = res.steps[s].knowledge.calls[static_cast<std::size_t>(i)];
                        if (before != CallKnowledge::Unknown) CHECK(after == before);
                    }
                }
            }
            CHECK(deliver_count == 1);
            runs.push_back(res);
        }

        // measurability: trajectories for two patterns agree while their
        // knowledge does, so the plan cannot be peeking at the pattern
        for (std::size_t a = 0; a < runs.size(); ++a)
            for (std::size_t b = a + 1; b < runs.size(); ++b) {
                const std::size_t n = std::min(runs[a].steps.size(), runs[b].steps.size());
                for (std::size_t s = 0; s < n; ++s) {
                    const TokenStep& sa = runs[a].steps[s];
                    const TokenStep& sb = runs[b].steps[s];
                    if (!(sa.knowledge == sb.knowledge)) break;
                    CHECK(sa.x == sb.x);
                    CHECK(sa.action == sb.action);
                }
            }
    }
    CHECK(feasible_seen == 40);
}

TEST_CASE("the recursive search agrees with a bottom-up table") {
    SUBCASE("exhaustively on a tiny window") {
        const TokenWindow w{-1, 1, 3};
        const std::vector<GridTask> all = enumerate_two_pair_tasks(w);
        REQUIRE(all.size() > 100);
        for (const GridTask& g : all) {
            CHECK(token_feasible(g.single, w).has_value() == oracle_feasible(g.single, w));
            CHECK(token_feasible(g.multi, w).has_value() == oracle_feasible(g.multi, w));
        }
    }
    SUBCASE("on random tasks in a wider window") {
        std::mt19937 rng(90125);
        const TokenWindow w{-2, 2, 5};
        for (int trial = 0; trial < 600; ++trial) {
            const CallMode mode = (trial % 2 == 0) ? CallMode::SingleGuaranteed : CallMode::MultiplePossible;
            const SummoningTask task = random_task_in_window(rng, w, 2, mode);
            CHECK(token_feasible(task, w).has_value() == oracle_feasible(task, w));
        }
    }
}

TEST_CASE("monotonicity sweep") {
    SUBCASE("matches the direct enumeration on a tiny window") {
        const TokenWindow w{-1, 1, 3};
        SweepOptions opt;
        opt.window = w;
        opt.pairs = 2;
        const SweepReport report = monotonicity_sweep(opt);

        const std::vector<GridTask> all = enumerate_two_pair_tasks(w);
        std::uint64_t singles = 0, multis = 0;
        for (const GridTask& g : all) {
            if (token_feasible(g.single, w).has_value()) ++singles;
            if (token_feasible(g.multi, w).has_value()) ++multis;
        }
        CHECK(report.tasks == all.size());
        CHECK(report.single_feasible == singles);
        CHECK(report.multi_feasible == multis);
        CHECK(report.counterexamples.empty());
        CHECK(report.multi_feasible <= report.single_feasible);
    }
    SUBCASE("thread count does not change the report") {
        SweepOptions serial;
        serial.window = TokenWindow{-2, 2, 4};
        SweepOptions wide = serial;
        wide.parallelism = 4;
        const SweepReport a = monotonicity_sweep(serial);
        const SweepReport b = monotonicity_sweep(wide);
        CHECK(a.tasks == b.tasks);
        CHECK(a.single_feasible == b.single_feasible);
        CHECK(a.multi_feasible == b.multi_feasible);
        CHECK(a.counterexamples.empty());
        CHECK(b.counterexamples.empty());
    }
    SUBCASE("one-pair sweeps are feasible throughout") {
        SweepOptions opt;
        opt.window = TokenWindow{-2, 2, 4};
        opt.pairs = 1;
        const SweepReport report = monotonicity_sweep(opt);
        CHECK(report.tasks > 0);
        CHECK(report.single_feasible == report.tasks);
        CHECK(report.multi_feasible == report.tasks);
        CHECK(report.counterexamples.empty());
    }
    SUBCASE("the enumeration cap rejects with the required count") {
        SweepOptions opt;
        opt.window = TokenWindow{-1, 1, 3};
        opt.enumeration_cap = 10;
        try {
            monotonicity_sweep(opt);
            FAIL("cap not enforced");
        } catch (const resource_error& err) {
            const std::string msg = err.what();
            CHECK(msg.find("enumeration cap is 10") != std::string::npos);
            CHECK(msg.find("sweep needs") != std::string::npos);
        }
    }
    SUBCASE("bad options are rejected") {
        SweepOptions opt;
        opt.pairs = 0;
        CHECK_THROWS_AS(monotonicity_sweep(opt), input_error);
        opt.pairs = 5;
        CHECK_THROWS_AS(monotonicity_sweep(opt), resource_error);
        opt.pairs = 2;
        opt.window = TokenWindow{-20, 20, 1000};
        try {
            monotonicity_sweep(opt);
            FAIL("grid cap missed");
        } catch (const resource_error& err) {
            CHECK(std::string(err.what()).find("cap is 1024") != std::string::npos);
        }
        opt.window = TokenWindow{2, -2, 4};
        CHECK_THROWS_AS(monotonicity_sweep(opt), input_error);
    }
}
