#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "summon/demos.hpp"
#include "summon/errors.hpp"
#include "summon/lattice.hpp"
#include "summon/scenario.hpp"
#include "summon/search.hpp"
#include "summon/token.hpp"

using namespace summon;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int emit(const Report& rep, const std::string& format) {
    std::fputs((format == "machine" ? rep.machine : rep.human).c_str(), stdout);
    return rep.exit_code;
}

TokenWindow parse_window_spec(const std::string& text) {
    TokenWindow w;
    Coord* fields[3] = {&w.x_min, &w.x_max, &w.t_max};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i == 2 ? text.size() : text.find(',', pos);
        if (end == std::string::npos || end < pos)
            throw input_error("window must be <xmin>,<xmax>,<tmax>");
        const char* first = text.data() + pos;
        const char* last = text.data() + end;
        const auto res = std::from_chars(first, last, *fields[i]);
        if (res.ec != std::errc{} || res.ptr != last)
            throw input_error("window must be <xmin>,<xmax>,<tmax>");
        pos = end + 1;
    }
    return w;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feasibility toolkit for summoning and signalling tasks on a 1+1-D lattice"};
    app.require_subcommand(1);

    std::string format = "human";
    int parallelism = 1;
    std::string file;
    std::string pattern_spec;
    std::string demo_name;
    std::string family_name = "bounded";
    std::optional<Coord> relay;
    std::optional<int> states;
    std::optional<int> alphabet;
    std::optional<long long> budget_ms;
    std::optional<std::string> window_spec;
    Coord demo_D = 8;
    Coord demo_eps = 1;

    CLI::App* validate = app.add_subcommand("validate", "parse a scenario file and print the task layout");
    validate->add_option("file", file, "scenario file")->required();

    CLI::App* run_cmd = app.add_subcommand("run", "drive the built-in protocol on one call pattern");
    run_cmd->add_option("file", file, "scenario file")->required();
    run_cmd->add_option("--pattern", pattern_spec, "call pattern: bits like 01 for the refined task, indices like 1,2 otherwise")
        ->required();
    run_cmd->add_option("--relay", relay, "relay site for the signal task (default: midpoint)");

    CLI::App* search_cmd = app.add_subcommand("search", "exhaustive bounded strategy search");
    search_cmd->add_option("file", file, "scenario file")->required();
    search_cmd->add_option("--states", states, "per-agent state cap (overrides the file)");
    search_cmd->add_option("--alphabet", alphabet, "alphabet size (overrides the file)");
    search_cmd->add_option("--budget-ms", budget_ms, "stop after this many milliseconds");
    search_cmd->add_option("--relay", relay, "relay site for the signal task (default: midpoint)");
    search_cmd->add_option("--family", family_name, "strategy family")
        ->check(CLI::IsMember({"local", "bounded"}))
        ->capture_default_str();

    CLI::App* token_cmd = app.add_subcommand("token", "unclonable-token plan search for a summoning task");
    token_cmd->add_option("file", file, "scenario file")->required();

    CLI::App* demo_cmd = app.add_subcommand("demo", "run a compiled-in claim check");
    demo_cmd->add_option("name", demo_name, "one of: finkelstein-original, finkelstein-refined-exactly-one, finkelstein-refined-at-least-one, token-monotonicity")
        ->required();
    demo_cmd->add_option("--D", demo_D, "lab/wing separation")->capture_default_str();
    demo_cmd->add_option("--eps", demo_eps, "wing width of the refined task")->capture_default_str();
    demo_cmd->add_option("--relay", relay, "check a single relay site instead of all of them");
    demo_cmd->add_option("--window", window_spec, "token sweep window as <xmin>,<xmax>,<tmax>");

    for (CLI::App* sub : {validate, run_cmd, search_cmd, token_cmd, demo_cmd}) {
        sub->add_option("--format", format, "output section to print")
            ->check(CLI::IsMember({"human", "machine"}))
            ->capture_default_str();
        sub->add_option("--parallel", parallelism, "worker count; never changes the output bytes")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(validate)) {
            return emit(format_report(document_task(parse_scenario(read_file(file)))), format);
        }
        if (app.got_subcommand(run_cmd)) {
            const Task task = document_task(parse_scenario(read_file(file)));
            const ProtocolSetup setup = document_protocol(task, relay);
            const CallPattern pattern = pattern_from_string(task, pattern_spec);
            const Transcript tr = run(setup.scenario, setup.strategy, pattern);
            return emit(format_report(setup.scenario, pattern, tr), format);
        }
        if (app.got_subcommand(search_cmd)) {
            const ScenarioDocument doc = parse_scenario(read_file(file));
            const StrategyFamily family = family_name == "local" ? StrategyFamily::LocalResponseMaps
                                                                 : StrategyFamily::BoundedTransducers;
            const LatticeScenario scenario = document_search_scenario(document_task(doc), relay, family);
            SearchBounds bounds;
            bounds.alphabet_size = scenario.alphabet.size();
            if (doc.states) bounds.max_states = *doc.states;
            if (doc.alphabet) bounds.alphabet_size = *doc.alphabet;
            if (states) bounds.max_states = *states;
            if (alphabet) bounds.alphabet_size = *alphabet;
            if (budget_ms) bounds.budget = std::chrono::milliseconds(*budget_ms);
            return emit(format_report(scenario, decide_feasible(scenario, bounds, family, parallelism)),
                        format);
        }
        if (app.got_subcommand(token_cmd)) {
            const ScenarioDocument doc = parse_scenario(read_file(file));
            const Task task = document_task(doc);
            const auto* summoning = std::get_if<SummoningTask>(&task);
            if (!summoning) throw input_error("token planning applies to summoning documents");
            const TokenWindow window = document_window(doc, *summoning);
            return emit(format_report(*summoning, window, token_feasible(*summoning, window)), format);
        }
        DemoOptions opt;
        opt.D = demo_D;
        opt.eps = demo_eps;
        opt.relay = relay;
        opt.parallelism = parallelism;
        if (window_spec) opt.window = parse_window_spec(*window_spec);
        return emit(run_demo(demo_name, opt), format);
    } catch (const input_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const resource_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
}
