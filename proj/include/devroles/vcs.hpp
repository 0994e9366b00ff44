#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devroles/common.hpp"
#include "devroles/identity.hpp"
#include "json.hpp"

namespace devroles {

enum class Granularity : std::uint8_t { function, file };

using TokenBag = std::map<std::string, std::int64_t>;

struct EntityChange {
  std::string path;
  std::string entity;
  std::int64_t added = 0;
  std::int64_t deleted = 0;
  /// Identifier tokens from changed lines; empty unless token collection is on.
  TokenBag tokens;

  bool operator==(const EntityChange&) const = default;
};

struct Commit {
  std::string hash;
  RawIdentity author_identity;
  PersonId author = 0;
  UnixTime timestamp = 0;
  std::vector<EntityChange> changes;

  bool operator==(const Commit& o) const {
    return hash == o.hash && author_identity.name == o.author_identity.name &&
           author_identity.email == o.author_identity.email && author == o.author &&
           timestamp == o.timestamp && changes == o.changes;
  }
};

struct PatchParseOptions {
  Granularity granularity = Granularity::function;
  bool collect_tokens = false;
};

struct PatchLog {
  std::vector<Commit> commits;
  Warnings warnings;
};

/// Parses the output of
///   git log <branch> --no-merges --reverse -p --date=unix
///       --pretty=format:"%x01%H%x01%an%x01%ae%x01%at"
/// Throws ParseError on a malformed record header; malformed hunk headers are
/// skipped and counted under warning "malformed_hunk_header".
PatchLog parse_patch_stream(std::string_view text, const PatchParseOptions& options = {});
PatchLog parse_patch_stream(std::istream& in, const PatchParseOptions& options = {});

/// Total added plus deleted lines.
std::int64_t count_loc(const Commit& commit);

/// "path::trimmed context" at function granularity, "path" at file granularity.
std::string entity_key(std::string_view path, std::string_view hunk_context, Granularity granularity);

/// Lowercased identifier runs of length >= 3, minus C-family keywords.
void extract_tokens(std::string_view line, TokenBag& bag);

/// Canonical JSON dump: an array of commit objects.
nlohmann::json commits_to_json(std::span<const Commit> commits);
std::vector<Commit> commits_from_json(const nlohmann::json& j);

}  // namespace devroles
