#include "summon/geometry.hpp"

#include <cstdlib>
#include <sstream>

namespace summon {

namespace {

void require_same_dimension(const Point& a, const Point& b) {
    if (a.dimension() != b.dimension()) {
        throw input_error("points have different dimensions (" +
                          std::to_string(a.dimension()) + " vs " +
                          std::to_string(b.dimension()) + ")");
    }
}

}  // namespace

const char* to_string(CausalClass c) {
    switch (c) {
        case CausalClass::Coincident: return "coincident";
        case CausalClass::CausalFuture: return "causal-future";
        case CausalClass::CausalPast: return "causal-past";
        case CausalClass::Spacelike: return "spacelike";
    }
    return "unknown";
}

CausalClass classify(const Point& from, const Point& to) {
    require_same_dimension(from, to);
    // Squared interval in 128-bit integers so the light cone test is exact.
    const __int128 dt = static_cast<__int128>(to.t) - from.t;
    __int128 q = 0;
    for (int i = 0; i < from.dimension(); ++i) {
        const __int128 dx = static_cast<__int128>(to.x[i]) - from.x[i];
        q += dx * dx;
    }
    if (dt == 0 && q == 0) return CausalClass::Coincident;
    if (dt > 0 && dt * dt >= q) return CausalClass::CausalFuture;
    if (dt < 0 && dt * dt >= q) return CausalClass::CausalPast;
    return CausalClass::Spacelike;
}

bool precedes(const Point& from, const Point& to) {
    const CausalClass c = classify(from, to);
    return c == CausalClass::Coincident || c == CausalClass::CausalFuture;
}

bool strictly_precedes(const Point& from, const Point& to) {
    return classify(from, to) == CausalClass::CausalFuture;
}

Coord earliest_arrival(Coord t_emit, Coord x_from, Coord x_to) {
    const Coord d = x_to >= x_from ? x_to - x_from : x_from - x_to;
    return t_emit + d;
}

std::string to_string(const Point& p) {
    std::ostringstream out;
    out << "(" << p.t << ",(";
    for (int i = 0; i < p.dimension(); ++i) {
        if (i) out << ",";
        out << p.x[i];
    }
    out << "))";
    return out.str();
}

}  // namespace summon
