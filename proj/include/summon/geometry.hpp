#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "summon/errors.hpp"

namespace summon {

using Coord = std::int64_t;

/// A spacetime point with exact integer coordinates, light speed c = 1.
/// All causal reasoning in this library bottoms out in comparisons on
/// these points; no floating point is involved anywhere.
struct Point {
    Coord t{};
    std::vector<Coord> x;

    Point() = default;
    Point(Coord time, std::vector<Coord> space) : t(time), x(std::move(space)) {}

    int dimension() const { return static_cast<int>(x.size()); }

    bool operator==(const Point&) const = default;
};

/// 1-D point helper; most scenarios live on a line.
inline Point pt(Coord t, Coord x) { return Point(t, {x}); }

enum class CausalClass { Coincident, CausalFuture, CausalPast, Spacelike };

const char* to_string(CausalClass c);

/// Causal classification of `to` relative to `from`. The light cone
/// boundary counts as causal: a lightlike pair is CausalFuture/CausalPast,
/// not Spacelike. Comparisons are done on squared quantities in exact
/// integer arithmetic.
CausalClass classify(const Point& from, const Point& to);

/// Non-strict causal precedence: classify is Coincident or CausalFuture.
bool precedes(const Point& from, const Point& to);

/// Strict causal precedence: classify is CausalFuture.
bool strictly_precedes(const Point& from, const Point& to);

/// Earliest arrival time at x_to for a lightspeed signal leaving x_from
/// at t_emit. 1-D positions only.
Coord earliest_arrival(Coord t_emit, Coord x_from, Coord x_to);

std::string to_string(const Point& p);

}  // namespace summon
