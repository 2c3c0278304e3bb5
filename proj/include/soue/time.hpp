#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace soue {

/// UTC seconds since the Unix epoch.
using EpochSeconds = std::int64_t;

/// Half-open interval [from, to).
struct TimeRange {
  EpochSeconds from = 0;
  EpochSeconds to = 0;

  bool empty() const { return to <= from; }
  bool contains(EpochSeconds t) const { return t >= from && t < to; }
  EpochSeconds length() const { return to - from; }

  friend bool operator==(const TimeRange&, const TimeRange&) = default;
};

/// Parses `YYYY-MM-DD[T ]HH:MM:SS[.fff](Z|+HH:MM|-HH:MM|+HHMM)`.
/// A timezone designator is mandatory. Fractional seconds are truncated.
/// Throws std::invalid_argument on anything else.
EpochSeconds parse_iso8601(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_iso8601(EpochSeconds t);

/// `YYYYMMDDTHHMMSSZ`, safe for file names.
std::string format_compact(EpochSeconds t);

}  // namespace soue
