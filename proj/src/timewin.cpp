#include "devroles/timewin.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>

namespace devroles {
namespace {

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = static_cast<int>(static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2));
}

template <class T>
std::int64_t floor_div(std::int64_t a, T b) {
  return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
}

}  // namespace

std::vector<AnalysisWindow> generate_windows(UnixTime range_start, UnixTime range_end, UnixTime length,
                                             UnixTime stride) {
  if (length <= 0 || stride <= 0) throw InputError("window length and stride must be positive");
  if (range_end - range_start < length) {
    throw InputError("analysis range (" + std::to_string(range_end - range_start) +
                     " s) is shorter than one window (" + std::to_string(length) + " s)");
  }
  std::vector<AnalysisWindow> out;
  for (UnixTime start = range_start; start + length <= range_end; start += stride) {
    out.push_back({static_cast<int>(out.size()), start, start + length});
  }
  return out;
}

WindowActivity slice(std::span<const Commit> commits, std::span<const Message> messages, const AnalysisWindow& w) {
  auto c_lo = std::lower_bound(commits.begin(), commits.end(), w.start,
                               [](const Commit& c, UnixTime t) { return c.timestamp < t; });
  auto c_hi = std::lower_bound(c_lo, commits.end(), w.end,
                               [](const Commit& c, UnixTime t) { return c.timestamp < t; });
  auto m_lo = std::lower_bound(messages.begin(), messages.end(), w.start,
                               [](const Message& m, UnixTime t) { return m.timestamp < t; });
  auto m_hi = std::lower_bound(m_lo, messages.end(), w.end,
                               [](const Message& m, UnixTime t) { return m.timestamp < t; });
  return {std::span<const Commit>(c_lo, c_hi), std::span<const Message>(m_lo, m_hi)};
}

TimeRange default_range(std::span<const Commit> commits, std::span<const Message> messages) {
  UnixTime lo = std::numeric_limits<UnixTime>::max();
  UnixTime hi = std::numeric_limits<UnixTime>::min();
  for (const auto& c : commits) {
    lo = std::min(lo, c.timestamp);
    hi = std::max(hi, c.timestamp);
  }
  for (const auto& m : messages) {
    lo = std::min(lo, m.timestamp);
    hi = std::max(hi, m.timestamp);
  }
  if (lo > hi) throw InputError("no activity to analyse");
  const UnixTime end = hi + 1;
  return {std::max(end - kDefaultRangeLength, lo), end};
}

UnixTime parse_iso_date(std::string_view date) {
  auto bad = [&] { return InputError("invalid ISO-8601 date '" + std::string(date) + "', expected YYYY-MM-DD"); };
  if (date.size() != 10 || date[4] != '-' || date[7] != '-') throw bad();
  int y = 0, m = 0, d = 0;
  auto num = [&](std::string_view s, int& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
  };
  if (!num(date.substr(0, 4), y) || !num(date.substr(5, 2), m) || !num(date.substr(8, 2), d)) throw bad();
  static constexpr int kMonthDays[12] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || d < 1 || d > kMonthDays[m - 1]) throw bad();
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (m == 2 && d == 29 && !leap) throw bad();
  return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d)) * kSecondsPerDay;
}

std::string format_iso_date(UnixTime t) {
  const std::int64_t days = floor_div(t, kSecondsPerDay);
  const std::int64_t secs = t - days * kSecondsPerDay;
  int y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", y, m, d, static_cast<int>(secs / 3600),
                static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60));
  return buf;
}

TimeRange parse_range(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw InputError("--range expects START:END");
  const TimeRange r{parse_iso_date(spec.substr(0, colon)), parse_iso_date(spec.substr(colon + 1))};
  if (r.end <= r.start) throw InputError("--range END must follow START");
  return r;
}

}  // namespace devroles
