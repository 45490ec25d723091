#pragma once

#include <cstdint>
#include <ostream>

#include "mtsc/errors.hpp"

namespace mtsc {

/// Time is measured in integer ticks; the tick unit is declared by the
/// dataset (e.g. 20 s for SocioPatterns contact data).
using Timestamp = std::int64_t;

/// Right-open interval [start, end). Right-openness makes adjacent windows
/// disjoint: [a,b) and [b,c) never intersect.
struct TimeInterval {
    Timestamp start = 0;
    Timestamp end = 0;

    TimeInterval() = default;
    TimeInterval(Timestamp s, Timestamp e) : start(s), end(e) {
        if (s >= e) throw Error("TimeInterval requires start < end");
    }

    Timestamp width() const { return end - start; }
    bool contains(Timestamp t) const { return start <= t && t < end; }
    bool intersects(const TimeInterval& other) const {
        return start < other.end && other.start < end;
    }

    /// Smallest interval covering both; callers use it to grow a period by
    /// adjacent windows, so the result stays contiguous.
    TimeInterval hull(const TimeInterval& other) const {
        return {start < other.start ? start : other.start, end > other.end ? end : other.end};
    }

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const TimeInterval& iv) {
    return os << '[' << iv.start << ',' << iv.end << ')';
}

}  // namespace mtsc
