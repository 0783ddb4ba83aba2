#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depgraph {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

enum class Cadence { Yearly, Monthly };

// Parses an RFC 3339 timestamp ("2015-03-01T12:00:00Z", fractional seconds
// truncated, numeric offsets applied). Returns nullopt on malformed input.
std::optional<Timestamp> parse_rfc3339(std::string_view text);

// Formats as UTC with seconds precision and a 'Z' suffix.
std::string format_rfc3339(Timestamp t);

Timestamp year_start(int year);
Timestamp month_start(int year, int month);

// Largest cadence boundary <= t.
Timestamp floor_boundary(Timestamp t, Cadence cadence);
// Smallest cadence boundary > t.
Timestamp next_boundary(Timestamp t, Cadence cadence);
// Smallest cadence boundary >= t.
Timestamp ceil_boundary(Timestamp t, Cadence cadence);

// All cadence boundaries b with t0 <= b <= t1, ascending.
std::vector<Timestamp> boundaries_in(Timestamp t0, Timestamp t1, Cadence cadence);

}  // namespace depgraph
