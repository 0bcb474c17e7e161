#pragma once

#include <optional>
#include <string>
#include <vector>

#include "summon/scenario.hpp"

namespace summon {

struct DemoOptions {
    Coord D = 8;
    Coord eps = 1;
    std::optional<Coord> relay;         // original demo: check one relay site instead of all
    std::optional<TokenWindow> window;  // token-monotonicity demo only
    int parallelism = 1;
};

/// The four built-in demo names, in display order.
std::vector<std::string> demo_names();

/// Runs a compiled-in claim check end to end. Exit code 0 when the claim
/// holds, 1 when it does not. Unknown names throw input_error listing
/// the valid ones. The machine section is byte-stable across runs and
/// worker counts.
Report run_demo(const std::string& name, const DemoOptions& options = {});

}  // namespace summon
