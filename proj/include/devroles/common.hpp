#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace devroles {

using PersonId = std::uint32_t;
using UnixTime = std::int64_t;

inline constexpr UnixTime kSecondsPerDay = 86400;

enum class Role : std::uint8_t { core, peripheral };

constexpr std::string_view to_string(Role r) {
  return r == Role::core ? "core" : "peripheral";
}

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad or unreadable input data; the CLI maps it to exit code 2.
class InputError : public Error {
public:
  using Error::Error;
};

/// Structurally malformed archive. `offset` is the byte position of the
/// offending record in the stream.
class ParseError : public InputError {
public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Analysis that cannot produce a meaningful result (e.g. an empty block).
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// Named warning counters collected while ingesting and analysing.
struct Warnings {
  std::map<std::string, std::int64_t> counts;

  void add(const std::string& key, std::int64_t n = 1) { counts[key] += n; }
  std::int64_t get(const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }
  void merge(const Warnings& other) {
    for (const auto& [k, v] : other.counts) counts[k] += v;
  }
  bool empty() const { return counts.empty(); }
};

}  // namespace devroles
