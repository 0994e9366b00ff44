#include "devroles/identity.hpp"

#include <algorithm>
#include <istream>
#include <numeric>

#include "devroles/csv.hpp"

namespace devroles {
namespace {

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

bool is_name_wrapper(char c) {
  switch (c) {
    case '"': case '\'': case '`': case ',': case ';': case ':':
    case '(': case ')': case '[': case ']': case '<': case '>':
      return true;
    default:
      return is_space(c);
  }
}

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index becomes the root, so roots are order-canonical.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::string normalize_name(std::string_view name) {
  std::size_t begin = 0, end = name.size();
  while (begin < end && is_name_wrapper(name[begin])) ++begin;
  while (end > begin && is_name_wrapper(name[end - 1])) --end;
  std::string out;
  out.reserve(end - begin);
  bool pending_space = false;
  for (std::size_t i = begin; i < end; ++i) {
    const char c = name[i];
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(lower(c));
  }
  return out;
}

std::string normalize_email(std::string_view email) {
  std::size_t begin = 0, end = email.size();
  while (begin < end && (is_space(email[begin]) || email[begin] == '<')) ++begin;
  while (end > begin && (is_space(email[end - 1]) || email[end - 1] == '>')) --end;
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) out.push_back(lower(email[i]));
  return out;
}

NormalizedIdentity normalize_identity(const RawIdentity& raw) {
  return {normalize_name(raw.name), normalize_email(raw.email)};
}

bool is_mergeable_name(std::string_view normalized_name) {
  if (normalized_name.size() < 7) return false;
  return normalized_name.find(' ') != std::string_view::npos;
}

AliasOverrides read_alias_overrides(std::istream& in) {
  AliasOverrides out;
  const auto rows = csv::read_all(in);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() < 2) throw InputError("alias override row " + std::to_string(i + 1) + ": expected 2 fields");
    if (i == 0 && row[0] == "email_or_name" && row[1] == "person_key") continue;
    const std::string& alias = row[0];
    if (alias.find('@') != std::string::npos) {
      out.by_email[normalize_email(alias)] = row[1];
    } else {
      out.by_name[normalize_name(alias)] = row[1];
    }
  }
  return out;
}

IdentityRegistry IdentityRegistry::resolve(std::span<const RawIdentity> raws, const AliasOverrides& overrides) {
  if (raws.empty()) throw InputError("identity resolution needs at least one identity");

  const std::size_t n = raws.size();
  std::vector<NormalizedIdentity> norm(n);
  std::vector<std::optional<std::string>> pinned(n);
  for (std::size_t i = 0; i < n; ++i) {
    norm[i] = normalize_identity(raws[i]);
    if (auto it = overrides.by_email.find(norm[i].email); !norm[i].email.empty() && it != overrides.by_email.end()) {
      pinned[i] = it->second;
    } else if (auto jt = overrides.by_name.find(norm[i].name); !norm[i].name.empty() && jt != overrides.by_name.end()) {
      pinned[i] = jt->second;
    }
  }

  DisjointSets sets(n);
  std::vector<std::optional<std::string>> root_pin(n);
  auto pin_of_root = [&](std::size_t r) -> const std::optional<std::string>& { return root_pin[r]; };
  auto unite = [&](std::size_t a, std::size_t b) {
    const auto ra = sets.find(a), rb = sets.find(b);
    if (ra == rb) return;
    const auto& pa = pin_of_root(ra);
    const auto& pb = pin_of_root(rb);
    if (pa && pb && *pa != *pb) return;
    std::optional<std::string> merged = pa ? pa : pb;
    sets.unite(ra, rb);
    root_pin[sets.find(ra)] = std::move(merged);
  };

  for (std::size_t i = 0; i < n; ++i) root_pin[i] = pinned[i];

  // Pinned groups are united before any heuristic merge; a root never
  // carries two different pins.
  std::map<std::string, std::size_t> first_by_pin;
  for (std::size_t i = 0; i < n; ++i) {
    if (!pinned[i]) continue;
    auto [it, fresh] = first_by_pin.try_emplace(*pinned[i], i);
    if (!fresh) unite(it->second, i);
  }

  std::map<std::string, std::size_t> first_by_email;
  std::map<std::string, std::size_t> first_by_name;
  for (std::size_t i = 0; i < n; ++i) {
    if (!norm[i].email.empty()) {
      auto [it, fresh] = first_by_email.try_emplace(norm[i].email, i);
      if (!fresh) unite(it->second, i);
    }
    if (is_mergeable_name(norm[i].name)) {
      auto [it, fresh] = first_by_name.try_emplace(norm[i].name, i);
      if (!fresh) unite(it->second, i);
    }
  }

  IdentityRegistry reg;
  reg.assignment_.resize(n);
  reg.normalized_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) reg.normalized_.push_back({norm[i], raws[i].source});
  std::map<std::size_t, PersonId> id_of_root;
  std::vector<std::map<std::string, int>> name_freq;
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = sets.find(i);
    auto [it, fresh] = id_of_root.try_emplace(root, static_cast<PersonId>(reg.persons_.size()));
    if (fresh) {
      Person p;
      p.id = it->second;
      reg.persons_.push_back(std::move(p));
      name_freq.emplace_back();
    }
    const PersonId id = it->second;
    reg.assignment_[i] = id;
    Person& p = reg.persons_[id];
    if (!norm[i].name.empty()) {
      p.names.insert(norm[i].name);
      ++name_freq[id][norm[i].name];
    }
    if (!norm[i].email.empty()) p.emails.insert(norm[i].email);
    if (pinned[i]) p.key = *pinned[i];
  }

  for (auto& p : reg.persons_) {
    int best = 0;
    for (const auto& [name, count] : name_freq[p.id]) {
      if (count > best) {
        best = count;
        p.canonical_name = name;
      }
    }
    if (p.key.empty()) p.key = p.emails.empty() ? p.canonical_name : *p.emails.begin();
  }

  for (const auto& p : reg.persons_) {
    reg.lookup_.try_emplace(p.key, p.id);
    for (const auto& e : p.emails) reg.lookup_.try_emplace(e, p.id);
    for (const auto& nm : p.names) {
      if (is_mergeable_name(nm)) reg.lookup_.try_emplace(nm, p.id);
    }
  }
  return reg;
}

std::optional<PersonId> IdentityRegistry::find(std::string_view key_email_or_name) const {
  if (auto it = lookup_.find(key_email_or_name); it != lookup_.end()) return it->second;
  const std::string as_email = normalize_email(key_email_or_name);
  if (auto it = lookup_.find(as_email); it != lookup_.end()) return it->second;
  const std::string as_name = normalize_name(key_email_or_name);
  if (auto it = lookup_.find(as_name); it != lookup_.end()) return it->second;
  return std::nullopt;
}

std::vector<RawIdentity> IdentityRegistry::aliases() const {
  std::vector<RawIdentity> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& a : normalized_) {
    if (seen.emplace(a.identity.name, a.identity.email).second) out.push_back({a.identity.name, a.identity.email, a.source});
  }
  return out;
}

}  // namespace devroles
