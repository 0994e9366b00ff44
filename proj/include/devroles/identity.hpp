#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devroles/common.hpp"

namespace devroles {

enum class Source : std::uint8_t { vcs, mail };

/// One (name, e-mail) occurrence as it appears in an archive.
struct RawIdentity {
  std::string name;
  std::string email;
  Source source = Source::vcs;
};

struct NormalizedIdentity {
  std::string name;
  std::string email;
  bool operator==(const NormalizedIdentity&) const = default;
};

/// Lowercases, collapses interior whitespace and strips surrounding quotes,
/// brackets and separators from the name; lowercases the email and strips
/// surrounding angle brackets.
NormalizedIdentity normalize_identity(const RawIdentity& raw);
std::string normalize_name(std::string_view name);
std::string normalize_email(std::string_view email);

/// Whether a normalized name is specific enough to merge on: at least two
/// whitespace-separated tokens and at least seven characters.
bool is_mergeable_name(std::string_view normalized_name);

struct Person {
  PersonId id = 0;
  /// Stable external key: the pinned override key, else the smallest email,
  /// else the canonical name.
  std::string key;
  std::string canonical_name;
  std::set<std::string> names;
  std::set<std::string> emails;
};

/// Pinned merges read from an alias-override file, keyed by normalized
/// email or normalized name.
struct AliasOverrides {
  std::map<std::string, std::string> by_email;
  std::map<std::string, std::string> by_name;

  bool empty() const { return by_email.empty() && by_name.empty(); }
};

/// Parses `email_or_name,person_key` CSV. An optional header row is skipped.
AliasOverrides read_alias_overrides(std::istream& in);

/// Partition of raw identity occurrences into persons. Immutable once built.
class IdentityRegistry {
public:
  /// Merges raws connected by an identical non-empty email or an identical
  /// mergeable name (transitively). Overrides pin groups and take precedence.
  static IdentityRegistry resolve(std::span<const RawIdentity> raws,
                                  const AliasOverrides& overrides = {});

  PersonId person_of(std::size_t raw_index) const { return assignment_.at(raw_index); }
  const Person& person(PersonId id) const { return persons_.at(id); }
  const std::vector<Person>& persons() const { return persons_; }
  std::size_t size() const { return persons_.size(); }
  std::size_t raw_count() const { return assignment_.size(); }

  /// Looks up a person by key, normalized email or mergeable name.
  std::optional<PersonId> find(std::string_view key_email_or_name) const;

  /// Every distinct normalized (name, email) alias, in person order.
  std::vector<RawIdentity> aliases() const;

private:
  std::vector<Person> persons_;
  struct Alias {
    NormalizedIdentity identity;
    Source source;
  };
  std::vector<PersonId> assignment_;
  std::vector<Alias> normalized_;
  std::map<std::string, PersonId, std::less<>> lookup_;
};

}  // namespace devroles
