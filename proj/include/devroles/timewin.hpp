#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devroles/common.hpp"
#include "devroles/mail.hpp"
#include "devroles/vcs.hpp"

namespace devroles {

inline constexpr UnixTime kDefaultWindowLength = 90 * kSecondsPerDay;
inline constexpr UnixTime kDefaultStride = 14 * kSecondsPerDay;
inline constexpr UnixTime kDefaultRangeLength = 365 * kSecondsPerDay;

struct AnalysisWindow {
  int index = 0;
  UnixTime start = 0;  // inclusive
  UnixTime end = 0;    // exclusive

  bool contains(UnixTime t) const { return start <= t && t < end; }
  bool operator==(const AnalysisWindow&) const = default;
};

struct TimeRange {
  UnixTime start = 0;
  UnixTime end = 0;
};

/// Windows starting at range_start + k*stride while start + length <= range_end.
/// Throws InputError if the range is shorter than one window.
std::vector<AnalysisWindow> generate_windows(UnixTime range_start, UnixTime range_end,
                                             UnixTime length = kDefaultWindowLength,
                                             UnixTime stride = kDefaultStride);

struct WindowActivity {
  std::span<const Commit> commits;
  std::span<const Message> messages;
};

/// Half-open [start, end) membership. Inputs must be sorted by timestamp.
WindowActivity slice(std::span<const Commit> commits, std::span<const Message> messages, const AnalysisWindow& w);

/// One year ending just after the newest timestamp, clipped to the oldest.
/// Throws InputError when there is no activity at all.
TimeRange default_range(std::span<const Commit> commits, std::span<const Message> messages);

/// "YYYY-MM-DD" at 00:00 UTC.
UnixTime parse_iso_date(std::string_view date);
std::string format_iso_date(UnixTime t);

/// "START:END" with ISO dates; END is exclusive.
TimeRange parse_range(std::string_view spec);

}  // namespace devroles
