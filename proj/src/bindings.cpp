#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <optional>
#include <tuple>

#include "summon/demos.hpp"
#include "summon/errors.hpp"
#include "summon/geometry.hpp"
#include "summon/lattice.hpp"
#include "summon/scenario.hpp"
#include "summon/search.hpp"
#include "summon/task.hpp"
#include "summon/token.hpp"

namespace py = pybind11;
using namespace summon;

namespace {

TokenWindow window_from_tuple(const std::tuple<Coord, Coord, Coord>& w) {
    return TokenWindow{std::get<0>(w), std::get<1>(w), std::get<2>(w)};
}

StrategyFamily family_from_name(const std::string& name) {
    if (name == "local") return StrategyFamily::LocalResponseMaps;
    if (name == "bounded") return StrategyFamily::BoundedTransducers;
    throw input_error("family must be 'local' or 'bounded'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "feasibility toolkit for summoning and signalling tasks";

    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<resource_error>(m, "ResourceError", PyExc_RuntimeError);

    py::enum_<CausalClass>(m, "CausalClass")
        .value("COINCIDENT", CausalClass::Coincident)
        .value("CAUSAL_FUTURE", CausalClass::CausalFuture)
        .value("CAUSAL_PAST", CausalClass::CausalPast)
        .value("SPACELIKE", CausalClass::Spacelike);

    py::class_<Point>(m, "Point")
        .def(py::init<Coord, std::vector<Coord>>(), py::arg("t"), py::arg("x"))
        .def_readwrite("t", &Point::t)
        .def_readwrite("x", &Point::x)
        .def("dimension", &Point::dimension)
        .def("__eq__", [](const Point& a, const Point& b) { return a == b; })
        .def("__repr__", [](const Point& p) { return to_string(p); });

    m.def("pt", &pt, py::arg("t"), py::arg("x"), "one-dimensional point");
    m.def("classify", &classify, py::arg("from_"), py::arg("to"));
    m.def("precedes", &precedes, py::arg("from_"), py::arg("to"));
    m.def("strictly_precedes", &strictly_precedes, py::arg("from_"), py::arg("to"));
    m.def("earliest_arrival", &earliest_arrival, py::arg("t_emit"), py::arg("x_from"),
          py::arg("x_to"));

    py::enum_<CallMode>(m, "CallMode")
        .value("SINGLE_GUARANTEED", CallMode::SingleGuaranteed)
        .value("MULTIPLE_POSSIBLE", CallMode::MultiplePossible);
    py::enum_<Promise>(m, "Promise")
        .value("EXACTLY_ONE", Promise::ExactlyOne)
        .value("AT_LEAST_ONE", Promise::AtLeastOne);

    py::class_<CallPattern>(m, "CallPattern")
        .def(py::init<std::uint64_t>(), py::arg("mask"))
        .def(py::init<const std::vector<int>&>(), py::arg("indices"))
        .def_property_readonly("mask", &CallPattern::mask)
        .def("indices", &CallPattern::indices)
        .def("contains", &CallPattern::contains)
        .def("__eq__", [](const CallPattern& a, const CallPattern& b) { return a == b; })
        .def("__repr__",
             [](const CallPattern& p) { return "CallPattern(" + std::to_string(p.mask()) + ")"; });

    py::class_<CallReturnPair>(m, "CallReturnPair")
        .def(py::init([](Point call, Point ret) {
                 return CallReturnPair{std::move(call), std::move(ret)};
             }),
             py::arg("call"), py::arg("ret"))
        .def_readwrite("call", &CallReturnPair::call)
        .def_readwrite("ret", &CallReturnPair::ret);

    py::class_<SummoningTask>(m, "SummoningTask")
        .def(py::init<Point, std::vector<CallReturnPair>, CallMode>(), py::arg("start"),
             py::arg("pairs"), py::arg("mode"))
        .def_readonly("start", &SummoningTask::start)
        .def_readonly("pairs", &SummoningTask::pairs)
        .def_readonly("mode", &SummoningTask::mode)
        .def("pair_count", &SummoningTask::pair_count);

    py::class_<RefinedBitTask>(m, "RefinedBitTask")
        .def(py::init<Coord, Coord, Promise>(), py::arg("D"), py::arg("eps"), py::arg("promise"))
        .def_readonly("D", &RefinedBitTask::D)
        .def_readonly("eps", &RefinedBitTask::eps)
        .def_readonly("promise", &RefinedBitTask::promise)
        .def("a_site", &RefinedBitTask::a_site)
        .def("b_site", &RefinedBitTask::b_site)
        .def("deadline", &RefinedBitTask::deadline);

    py::class_<OriginalSignalTask>(m, "OriginalSignalTask")
        .def(py::init<Coord>(), py::arg("D"))
        .def_readonly("D", &OriginalSignalTask::D)
        .def("lab_site", &OriginalSignalTask::lab_site)
        .def("source_site", &OriginalSignalTask::source_site)
        .def("transit_time", &OriginalSignalTask::transit_time);

    py::class_<PairCheck>(m, "PairCheck")
        .def_readonly("index", &PairCheck::index)
        .def_readonly("call_before_return", &PairCheck::call_before_return)
        .def_readonly("start_before_return", &PairCheck::start_before_return)
        .def("passed", &PairCheck::passed)
        .def("reason", &PairCheck::reason);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("pairs", &ValidationReport::pairs)
        .def("passed", &ValidationReport::passed);

    m.def("validate_summoning", &validate_summoning, py::arg("task"));
    m.def("admissible_patterns",
          [](const SummoningTask& t) { return admissible_patterns(t); });
    m.def("admissible_patterns",
          [](const RefinedBitTask& t) { return admissible_patterns(t); });
    m.def("admissible_patterns",
          [](const OriginalSignalTask& t) { return admissible_patterns(t); });

    m.attr("ECHO_LOCAL_INDEX") = EchoLocalIndex;
    m.def("refined_local_search",
          [](const RefinedBitTask& t) { return refined_local_search(t); }, py::arg("task"));

    py::class_<TokenWindow>(m, "TokenWindow")
        .def(py::init([](Coord x_min, Coord x_max, Coord t_max) {
                 return TokenWindow{x_min, x_max, t_max};
             }),
             py::arg("x_min") = -4, py::arg("x_max") = 4, py::arg("t_max") = 6)
        .def_readwrite("x_min", &TokenWindow::x_min)
        .def_readwrite("x_max", &TokenWindow::x_max)
        .def_readwrite("t_max", &TokenWindow::t_max);

    py::class_<TokenPlan>(m, "TokenPlan")
        .def_property_readonly("decisions", [](const TokenPlan& plan) {
            std::vector<std::tuple<Coord, Coord, std::string, std::string>> out;
            for (const auto& [key, action] : plan.decisions)
                out.emplace_back(std::get<0>(key), std::get<1>(key),
                                 to_string(std::get<2>(key)), to_string(action));
            return out;
        });

    m.def("token_feasible", &token_feasible, py::arg("task"), py::arg("window"));

    py::class_<SweepReport>(m, "SweepReport")
        .def_readonly("tasks", &SweepReport::tasks)
        .def_readonly("single_feasible", &SweepReport::single_feasible)
        .def_readonly("multi_feasible", &SweepReport::multi_feasible)
        .def_property_readonly("counterexamples", [](const SweepReport& r) {
            std::vector<std::string> out;
            out.reserve(r.counterexamples.size());
            for (const SummoningTask& t : r.counterexamples) out.push_back(task_line(t));
            return out;
        });

    m.def(
        "monotonicity_sweep",
        [](const std::tuple<Coord, Coord, Coord>& window, int pairs,
           std::uint64_t enumeration_cap, int parallelism) {
            SweepOptions options;
            options.window = window_from_tuple(window);
            options.pairs = pairs;
            options.enumeration_cap = enumeration_cap;
            options.parallelism = parallelism;
            return monotonicity_sweep(options);
        },
        py::arg("window") = std::make_tuple<Coord, Coord, Coord>(-4, 4, 6), py::arg("pairs") = 2,
        py::arg("enumeration_cap") = 50'000'000, py::arg("parallelism") = 1,
        py::call_guard<py::gil_scoped_release>());

    py::class_<Report>(m, "Report")
        .def_readonly("human", &Report::human)
        .def_readonly("machine", &Report::machine)
        .def_readonly("exit_code", &Report::exit_code);

    m.def("validate_text", [](const std::string& text) {
        return format_report(document_task(parse_scenario(text)));
    });

    m.def(
        "run_text",
        [](const std::string& text, const std::string& pattern, std::optional<Coord> relay) {
            const Task task = document_task(parse_scenario(text));
            const ProtocolSetup setup = document_protocol(task, relay);
            const CallPattern parsed = pattern_from_string(task, pattern);
            const Transcript tr = run(setup.scenario, setup.strategy, parsed);
            return format_report(setup.scenario, parsed, tr);
        },
        py::arg("text"), py::arg("pattern"), py::arg("relay") = std::nullopt);

    m.def(
        "search_text",
        [](const std::string& text, std::optional<int> states, std::optional<int> alphabet,
           std::optional<long long> budget_ms, const std::string& family,
           std::optional<Coord> relay, int parallelism) {
            const ScenarioDocument doc = parse_scenario(text);
            const StrategyFamily chosen = family_from_name(family);
            const LatticeScenario scenario =
                document_search_scenario(document_task(doc), relay, chosen);
            SearchBounds bounds;
            bounds.alphabet_size = scenario.alphabet.size();
            if (doc.states) bounds.max_states = *doc.states;
            if (doc.alphabet) bounds.alphabet_size = *doc.alphabet;
            if (states) bounds.max_states = *states;
            if (alphabet) bounds.alphabet_size = *alphabet;
            if (budget_ms) bounds.budget = std::chrono::milliseconds(*budget_ms);
            return format_report(scenario, decide_feasible(scenario, bounds, chosen, parallelism));
        },
        py::arg("text"), py::arg("states") = std::nullopt, py::arg("alphabet") = std::nullopt,
        py::arg("budget_ms") = std::nullopt, py::arg("family") = "bounded",
        py::arg("relay") = std::nullopt, py::arg("parallelism") = 1,
        py::call_guard<py::gil_scoped_release>());

    m.def("token_text", [](const std::string& text) {
        const ScenarioDocument doc = parse_scenario(text);
        const Task task = document_task(doc);
        const auto* summoning = std::get_if<SummoningTask>(&task);
        if (!summoning) throw input_error("token planning applies to summoning documents");
        const TokenWindow window = document_window(doc, *summoning);
        return format_report(*summoning, window, token_feasible(*summoning, window));
    });

    m.def("demo_names", &demo_names);
    m.def(
        "run_demo",
        [](const std::string& name, Coord D, Coord eps, std::optional<Coord> relay,
           std::optional<std::tuple<Coord, Coord, Coord>> window, int parallelism) {
            DemoOptions opt;
            opt.D = D;
            opt.eps = eps;
            opt.relay = relay;
            opt.parallelism = parallelism;
            if (window) opt.window = window_from_tuple(*window);
            return run_demo(name, opt);
        },
        py::arg("name"), py::arg("D") = 8, py::arg("eps") = 1, py::arg("relay") = std::nullopt,
        py::arg("window") = std::nullopt, py::arg("parallelism") = 1,
        py::call_guard<py::gil_scoped_release>());
}
