#include "devroles/vcs.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <iterator>
#include <optional>

namespace devroles {
namespace {

constexpr std::array<std::string_view, 44> kStopWords = {
    "auto",     "bool",     "break",   "case",     "char",    "class",   "const",   "continue",
    "default",  "define",   "delete",  "double",   "else",    "endif",   "enum",    "extern",
    "false",    "float",    "for",     "goto",     "ifdef",   "ifndef",  "include", "inline",
    "int",      "long",     "namespace", "new",    "null",    "nullptr", "private", "protected",
    "public",   "register", "return",  "short",    "signed",  "sizeof",  "static",  "struct",
    "switch",   "true",     "void",    "while"};

bool is_stop_word(std::string_view w) {
  return std::find(kStopWords.begin(), kStopWords.end(), w) != kStopWords.end();
}

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct HunkHeader {
  std::int64_t old_lines = 1;
  std::int64_t new_lines = 1;
  std::string_view context;
};

// "@@ -a[,b] +c[,d] @@[ context]"
std::optional<HunkHeader> parse_hunk_header(std::string_view line) {
  if (!starts_with(line, "@@ -")) return std::nullopt;
  const auto close = line.find(" @@", 4);
  if (close == std::string_view::npos) return std::nullopt;
  const std::string_view ranges = line.substr(3, close - 3);
  const auto space = ranges.find(' ');
  if (space == std::string_view::npos) return std::nullopt;
  const std::string_view old_range = ranges.substr(0, space);
  const std::string_view new_range = ranges.substr(space + 1);
  if (old_range.size() < 2 || old_range[0] != '-' || new_range.size() < 2 || new_range[0] != '+') return std::nullopt;

  auto parse_range = [](std::string_view r, std::int64_t& count) {
    const auto comma = r.find(',');
    const auto start = parse_int(r.substr(0, comma));
    if (!start || *start < 0) return false;
    if (comma == std::string_view::npos) {
      count = 1;
      return true;
    }
    const auto c = parse_int(r.substr(comma + 1));
    if (!c || *c < 0) return false;
    count = *c;
    return true;
  };

  HunkHeader h;
  if (!parse_range(old_range.substr(1), h.old_lines) || !parse_range(new_range.substr(1), h.new_lines)) {
    return std::nullopt;
  }
  h.context = line.substr(close + 3);
  return h;
}

std::string unquote_path(std::string_view p) {
  p = trim(p);
  if (p.size() >= 2 && p.front() == '"' && p.back() == '"') p = p.substr(1, p.size() - 2);
  return std::string(p);
}

// Path from "diff --git a/X b/Y"; prefers the b/ side.
std::string path_from_diff_line(std::string_view rest) {
  if (rest.size() > 5 && (rest.size() - 5) % 2 == 0 && starts_with(rest, "a/")) {
    const auto len = (rest.size() - 5) / 2;
    const auto a = rest.substr(2, len);
    const auto b = rest.substr(len + 3);
    if (rest.substr(len + 2, 3) == " b/" && a == b.substr(2)) return std::string(a);
  }
  if (const auto pos = rest.rfind(" b/"); pos != std::string_view::npos) return unquote_path(rest.substr(pos + 3));
  return unquote_path(rest);
}

std::string strip_side_prefix(std::string_view p) {
  std::string s = unquote_path(p);
  if (const auto tab = s.find('\t'); tab != std::string::npos) s.resize(tab);
  if (starts_with(s, "a/") || starts_with(s, "b/")) s.erase(0, 2);
  return s;
}

bool is_hex40(std::string_view s) {
  return s.size() == 40 &&
         std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

class PatchParser {
public:
  PatchParser(std::string_view text, const PatchParseOptions& options) : text_(text), options_(options) {}

  PatchLog run() {
    std::size_t pos = 0;
    while (pos < text_.size()) {
      auto eol = text_.find('\n', pos);
      if (eol == std::string_view::npos) eol = text_.size();
      std::string_view line = text_.substr(pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      handle_line(line, pos);
      pos = eol + 1;
    }
    finish_commit();
    return std::move(log_);
  }

private:
  void handle_line(std::string_view line, std::size_t offset) {
    if (!line.empty() && line.front() == '\x01') {
      finish_commit();
      start_commit(line, offset);
      return;
    }
    if (!current_) {
      if (trim(line).empty()) return;
      throw ParseError("malformed record header: expected 0x01-delimited commit line", offset);
    }

    if (old_left_ > 0 || new_left_ > 0) {
      if (consume_body_line(line)) return;
      log_.warnings.add("truncated_hunk");
      old_left_ = new_left_ = 0;
    }

    if (skipping_hunk_ && !line.empty() && (line[0] == '+' || line[0] == '-' || line[0] == ' ')) return;
    if (starts_with(line, "diff --git ")) {
      skipping_hunk_ = false;
      path_ = path_from_diff_line(line.substr(11));
      minus_path_.clear();
      return;
    }
    if (starts_with(line, "--- ")) {
      const auto p = line.substr(4);
      minus_path_ = trim(p) == "/dev/null" ? std::string() : strip_side_prefix(p);
      return;
    }
    if (starts_with(line, "+++ ")) {
      const auto p = line.substr(4);
      if (trim(p) == "/dev/null") {
        if (!minus_path_.empty()) path_ = minus_path_;
      } else {
        path_ = strip_side_prefix(p);
      }
      return;
    }
    if (starts_with(line, "Binary files ") && line.size() > 7 && line.substr(line.size() - 7) == " differ") {
      change_for(entity_key(path_, "", options_.granularity));
      return;
    }
    if (starts_with(line, "@@")) {
      const auto header = parse_hunk_header(line);
      if (!header) {
        log_.warnings.add("malformed_hunk_header");
        skipping_hunk_ = true;
        return;
      }
      skipping_hunk_ = false;
      old_left_ = header->old_lines;
      new_left_ = header->new_lines;
      active_ = &change_for(entity_key(path_, header->context, options_.granularity));
      return;
    }
    // Remaining lines: extended headers (index, mode, rename), the
    // "\ No newline" marker, blank separators, and bodies of skipped hunks.
  }

  bool consume_body_line(std::string_view line) {
    if (line.empty()) {
      --old_left_;
      --new_left_;
      return true;
    }
    switch (line.front()) {
      case '+':
        --new_left_;
        if (!starts_with(line, "+++")) {
          ++active_->added;
          if (options_.collect_tokens) extract_tokens(line.substr(1), active_->tokens);
        }
        return true;
      case '-':
        --old_left_;
        if (!starts_with(line, "---")) {
          ++active_->deleted;
          if (options_.collect_tokens) extract_tokens(line.substr(1), active_->tokens);
        }
        return true;
      case ' ':
        --old_left_;
        --new_left_;
        return true;
      case '\\':
        return true;
      default:
        return false;
    }
  }

  void start_commit(std::string_view line, std::size_t offset) {
    std::vector<std::string_view> fields;
    std::size_t start = 1;
    while (true) {
      const auto next = line.find('\x01', start);
      fields.push_back(line.substr(start, next == std::string_view::npos ? std::string_view::npos : next - start));
      if (next == std::string_view::npos) break;
      start = next + 1;
    }
    if (fields.size() != 4) throw ParseError("malformed record header: expected 4 fields", offset);
    if (!is_hex40(fields[0])) throw ParseError("malformed record header: bad commit hash", offset);
    const auto ts = parse_int(fields[3]);
    if (!ts || *ts <= 0) throw ParseError("malformed record header: bad timestamp", offset);

    current_.emplace();
    current_->hash = std::string(fields[0]);
    current_->author_identity = {std::string(fields[1]), std::string(fields[2]), Source::vcs};
    current_->timestamp = *ts;
    path_.clear();
    minus_path_.clear();
    index_.clear();
    skipping_hunk_ = false;
    active_ = nullptr;
  }

  EntityChange& change_for(const std::string& entity) {
    auto [it, fresh] = index_.try_emplace(entity, current_->changes.size());
    if (fresh) {
      EntityChange c;
      c.path = path_;
      c.entity = entity;
      current_->changes.push_back(std::move(c));
    }
    return current_->changes[it->second];
  }

  void finish_commit() {
    if (old_left_ > 0 || new_left_ > 0) log_.warnings.add("truncated_hunk");
    old_left_ = new_left_ = 0;
    active_ = nullptr;
    if (current_) log_.commits.push_back(std::move(*current_));
    current_.reset();
  }

  std::string_view text_;
  PatchParseOptions options_;
  PatchLog log_;
  std::optional<Commit> current_;
  std::map<std::string, std::size_t> index_;
  std::string path_;
  std::string minus_path_;
  EntityChange* active_ = nullptr;
  std::int64_t old_left_ = 0;
  std::int64_t new_left_ = 0;
  bool skipping_hunk_ = false;
};

}  // namespace

PatchLog parse_patch_stream(std::string_view text, const PatchParseOptions& options) {
  return PatchParser(text, options).run();
}

PatchLog parse_patch_stream(std::istream& in, const PatchParseOptions& options) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_patch_stream(std::string_view(text), options);
}

std::int64_t count_loc(const Commit& commit) {
  std::int64_t total = 0;
  for (const auto& c : commit.changes) total += c.added + c.deleted;
  return total;
}

std::string entity_key(std::string_view path, std::string_view hunk_context, Granularity granularity) {
  std::string key(path);
  if (granularity == Granularity::file) return key;
  key += "::";
  key += trim(hunk_context);
  return key;
}

void extract_tokens(std::string_view line, TokenBag& bag) {
  std::size_t i = 0;
  while (i < line.size()) {
    if (!is_ident_char(line[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string word;
    while (j < line.size() && is_ident_char(line[j])) {
      char c = line[j];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      word.push_back(c);
      ++j;
    }
    if (word.size() >= 3 && !is_stop_word(word)) ++bag[word];
    i = j;
  }
}

nlohmann::json commits_to_json(std::span<const Commit> commits) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : commits) {
    nlohmann::json changes = nlohmann::json::array();
    for (const auto& ch : c.changes) {
      changes.push_back({{"path", ch.path},
                         {"entity", ch.entity},
                         {"added", ch.added},
                         {"deleted", ch.deleted},
                         {"tokens", ch.tokens}});
    }
    arr.push_back({{"hash", c.hash},
                   {"author", c.author},
                   {"author_name", c.author_identity.name},
                   {"author_email", c.author_identity.email},
                   {"timestamp", c.timestamp},
                   {"changes", std::move(changes)}});
  }
  return arr;
}

std::vector<Commit> commits_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("commit dump: expected a JSON array");
  std::vector<Commit> out;
  out.reserve(j.size());
  try {
    for (const auto& o : j) {
      Commit c;
      c.hash = o.at("hash").get<std::string>();
      c.author = o.value("author", PersonId{0});
      c.author_identity = {o.at("author_name").get<std::string>(), o.at("author_email").get<std::string>(), Source::vcs};
      c.timestamp = o.at("timestamp").get<UnixTime>();
      if (!is_hex40(c.hash)) throw InputError("commit dump: bad hash " + c.hash);
      if (c.timestamp <= 0) throw InputError("commit dump: non-positive timestamp");
      for (const auto& ch : o.at("changes")) {
        EntityChange e;
        e.path = ch.at("path").get<std::string>();
        e.entity = ch.at("entity").get<std::string>();
        e.added = ch.at("added").get<std::int64_t>();
        e.deleted = ch.at("deleted").get<std::int64_t>();
        if (ch.contains("tokens")) e.tokens = ch.at("tokens").get<TokenBag>();
        if (e.added < 0 || e.deleted < 0 || e.entity.empty()) throw InputError("commit dump: invalid change");
        c.changes.push_back(std::move(e));
      }
      out.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("commit dump: ") + e.what());
  }
  return out;
}

}  // namespace devroles
