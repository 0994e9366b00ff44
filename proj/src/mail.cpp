#include "devroles/mail.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <iterator>
#include <map>
#include <set>

namespace devroles {
namespace {

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  if (s.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<int> month_index(std::string_view m) {
  static constexpr std::array<std::string_view, 12> names = {"jan", "feb", "mar", "apr", "may", "jun",
                                                             "jul", "aug", "sep", "oct", "nov", "dec"};
  const std::string l = lower(m.substr(0, 3));
  for (int i = 0; i < 12; ++i) {
    if (names[static_cast<std::size_t>(i)] == l) return i + 1;
  }
  return std::nullopt;
}

std::optional<int> zone_offset_seconds(std::string_view z) {
  if ((z.front() == '+' || z.front() == '-') && z.size() == 5) {
    const auto hh = to_int(z.substr(1, 2));
    const auto mm = to_int(z.substr(3, 2));
    if (!hh || !mm) return std::nullopt;
    const int off = *hh * 3600 + *mm * 60;
    return z.front() == '-' ? -off : off;
  }
  static const std::map<std::string, int> named = {
      {"ut", 0},       {"utc", 0},      {"gmt", 0},      {"z", 0},        {"est", -5 * 3600},
      {"edt", -4 * 3600}, {"cst", -6 * 3600}, {"cdt", -5 * 3600}, {"mst", -7 * 3600}, {"mdt", -6 * 3600},
      {"pst", -8 * 3600}, {"pdt", -7 * 3600}};
  if (auto it = named.find(lower(z)); it != named.end()) return it->second;
  return std::nullopt;
}

// First "<...>" token, or the trimmed value if it has no angle brackets.
std::optional<std::string> first_msg_id(std::string_view v) {
  v = trim(v);
  if (v.empty()) return std::nullopt;
  const auto lt = v.find('<');
  if (lt != std::string_view::npos) {
    const auto gt = v.find('>', lt);
    if (gt != std::string_view::npos) return std::string(v.substr(lt, gt - lt + 1));
  }
  const auto sp = v.find_first_of(" \t");
  return std::string(v.substr(0, sp));
}

struct RawMail {
  std::string_view text;
  std::map<std::string, std::string> headers;
};

std::map<std::string, std::string> parse_headers(std::string_view block) {
  std::map<std::string, std::string> headers;
  std::string name, value;
  auto flush = [&] {
    if (!name.empty()) headers.try_emplace(lower(name), std::string(trim(value)));
    name.clear();
    value.clear();
  };
  std::size_t pos = 0;
  while (pos < block.size()) {
    auto eol = block.find('\n', pos);
    if (eol == std::string_view::npos) eol = block.size();
    std::string_view line = block.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      if (!name.empty()) {
        value.push_back(' ');
        value += trim(line);
      }
      continue;
    }
    flush();
    const auto colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0) continue;
    name = std::string(trim(line.substr(0, colon)));
    value = std::string(line.substr(colon + 1));
  }
  flush();
  return headers;
}

}  // namespace

RawIdentity parse_from_header(std::string_view value) {
  RawIdentity id;
  id.source = Source::mail;
  std::string v(trim(value));

  if (const auto lt = v.rfind('<'); lt != std::string::npos) {
    const auto gt = v.find('>', lt);
    id.email = v.substr(lt + 1, (gt == std::string::npos ? v.size() : gt) - lt - 1);
    id.name = std::string(trim(std::string_view(v).substr(0, lt)));
  } else if (const auto lp = v.find('(');
             lp != std::string::npos && (v.substr(0, lp).find('@') != std::string::npos ||
                                         v.substr(0, lp).find(" at ") != std::string::npos)) {
    const auto rp = v.rfind(')');
    id.email = std::string(trim(std::string_view(v).substr(0, lp)));
    id.name = v.substr(lp + 1, (rp == std::string::npos || rp < lp ? v.size() : rp) - lp - 1);
  } else if (v.find('@') != std::string::npos || v.find(" at ") != std::string::npos) {
    id.email = v;
  } else {
    id.name = v;
  }

  if (id.email.find('@') == std::string::npos) {
    if (const auto at = id.email.find(" at "); at != std::string::npos) {
      id.email = std::string(trim(std::string_view(id.email).substr(0, at))) + "@" +
                 std::string(trim(std::string_view(id.email).substr(at + 4)));
    }
  }
  id.email = std::string(trim(id.email));
  if (id.name.size() >= 2 && id.name.front() == '"' && id.name.back() == '"') {
    id.name = id.name.substr(1, id.name.size() - 2);
  }
  return id;
}

std::optional<UnixTime> parse_rfc2822_date(std::string_view value) {
  std::string cleaned;
  int depth = 0;
  for (char c : value) {
    if (c == '(') ++depth;
    else if (c == ')') depth = std::max(0, depth - 1);
    else if (depth == 0) cleaned.push_back(c);
  }
  auto tok = split_ws(cleaned);
  if (!tok.empty() && !to_int(tok.front()) && !month_index(tok.front())) tok.erase(tok.begin());  // weekday
  if (tok.size() < 4) return std::nullopt;

  std::optional<int> day, month, year;
  std::string_view time_tok, zone_tok, year_tok;
  if (auto d = to_int(tok[0])) {
    // 2 Nov 2015 10:00:00 +0100
    day = d;
    month = month_index(tok[1]);
    year_tok = tok[2];
    time_tok = tok[3];
    if (tok.size() > 4) zone_tok = tok[4];
  } else {
    // ctime: Nov 2 10:00:00 2015
    month = month_index(tok[0]);
    day = to_int(tok[1]);
    time_tok = tok[2];
    year_tok = tok[3];
    if (tok.size() > 4) zone_tok = tok[4];
  }
  year = to_int(year_tok);
  if (!day || !month || !year || *day < 1 || *day > 31) return std::nullopt;
  int y = *year;
  if (year_tok.size() <= 2) y += y < 50 ? 2000 : 1900;

  int hh = 0, mm = 0, ss = 0;
  {
    const auto c1 = time_tok.find(':');
    if (c1 == std::string_view::npos) return std::nullopt;
    const auto c2 = time_tok.find(':', c1 + 1);
    const auto h = to_int(time_tok.substr(0, c1));
    const auto m = to_int(time_tok.substr(c1 + 1, c2 == std::string_view::npos ? std::string_view::npos : c2 - c1 - 1));
    if (!h || !m || *h > 23 || *m > 59) return std::nullopt;
    hh = *h;
    mm = *m;
    if (c2 != std::string_view::npos) {
      const auto s = to_int(time_tok.substr(c2 + 1));
      if (!s || *s > 60) return std::nullopt;
      ss = *s;
    }
  }
  int offset = 0;
  if (!zone_tok.empty()) {
    const auto z = zone_offset_seconds(zone_tok);
    if (!z) return std::nullopt;
    offset = *z;
  }
  const std::int64_t days = days_from_civil(y, static_cast<unsigned>(*month), static_cast<unsigned>(*day));
  return days * kSecondsPerDay + hh * 3600 + mm * 60 + ss - offset;
}

MailArchive parse_mbox(std::string_view text) {
  // Split on "From " separator lines at the start of the file or after a
  // blank line.
  std::vector<std::string_view> chunks;
  std::size_t pos = 0;
  std::size_t chunk_start = std::string_view::npos;
  bool prev_blank = true;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (prev_blank && starts_with(line, "From ")) {
      if (chunk_start != std::string_view::npos) chunks.push_back(text.substr(chunk_start, pos - chunk_start));
      chunk_start = std::min(eol + 1, text.size());
    }
    prev_blank = trim(line).empty();
    pos = eol + 1;
  }
  if (chunk_start != std::string_view::npos) chunks.push_back(text.substr(chunk_start));

  MailArchive archive;
  std::set<std::string> seen;
  for (const auto chunk : chunks) {
    std::size_t header_end = std::string_view::npos;
    for (std::size_t p = 0; p < chunk.size();) {
      auto eol = chunk.find('\n', p);
      if (eol == std::string_view::npos) eol = chunk.size();
      if (trim(chunk.substr(p, eol - p)).empty()) {
        header_end = p;
        break;
      }
      p = eol + 1;
    }
    const auto headers = parse_headers(chunk.substr(0, header_end));

    Message m;
    if (auto it = headers.find("message-id"); it != headers.end() && first_msg_id(it->second)) {
      m.message_id = *first_msg_id(it->second);
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "<synthetic.%016llx@devroles.invalid>",
                    static_cast<unsigned long long>(fnv1a(chunk)));
      m.message_id = buf;
      archive.warnings.add("missing_message_id");
    }

    const auto date = headers.find("date");
    const auto ts = date == headers.end() ? std::nullopt : parse_rfc2822_date(date->second);
    if (!ts) {
      archive.warnings.add("unparseable_date");
      continue;
    }
    m.timestamp = *ts;

    if (auto it = headers.find("from"); it != headers.end()) {
      m.author_identity = parse_from_header(it->second);
    }
    if (m.author_identity.name.empty() && m.author_identity.email.empty()) {
      archive.warnings.add("missing_from");
      continue;
    }

    if (auto it = headers.find("in-reply-to"); it != headers.end()) m.in_reply_to = first_msg_id(it->second);
    if (!m.in_reply_to) {
      if (auto it = headers.find("references"); it != headers.end()) m.in_reply_to = first_msg_id(it->second);
    }

    if (!seen.insert(m.message_id).second) {
      archive.warnings.add("duplicate_message_id");
      continue;
    }
    archive.messages.push_back(std::move(m));
  }
  return archive;
}

MailArchive parse_mbox(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_mbox(std::string_view(text));
}

std::vector<Thread> thread_messages(std::vector<Message>& messages) {
  const std::size_t n = messages.size();
  std::map<std::string_view, std::size_t> by_id;
  for (std::size_t i = 0; i < n; ++i) by_id.emplace(messages[i].message_id, i);

  auto later = [&](std::size_t a, std::size_t b) {
    const auto& x = messages[a];
    const auto& y = messages[b];
    return std::tie(x.timestamp, x.message_id) > std::tie(y.timestamp, y.message_id);
  };

  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    if (!messages[i].in_reply_to) continue;
    if (auto it = by_id.find(*messages[i].in_reply_to); it != by_id.end() && it->second != i) parent[i] = it->second;
  }

  // Each node has at most one parent, so every component holds at most one
  // cycle; find it by walking and cut the latest member's parent link.
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on current walk, 2 done
  for (std::size_t s = 0; s < n; ++s) {
    if (state[s]) continue;
    std::vector<std::size_t> walk;
    std::size_t v = s;
    while (v != kNone && state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = parent[v];
    }
    if (v != kNone && state[v] == 1) {
      std::size_t latest = v;
      for (std::size_t u = parent[v]; u != v; u = parent[u]) {
        if (later(u, latest)) latest = u;
      }
      parent[latest] = kNone;
    }
    for (auto u : walk) state[u] = 2;
  }

  std::vector<std::size_t> root(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> path;
    std::size_t v = i;
    while (root[v] == kNone && parent[v] != kNone) {
      path.push_back(v);
      v = parent[v];
    }
    const std::size_t r = root[v] == kNone ? v : root[v];
    root[v] = r;
    for (auto u : path) root[u] = r;
  }

  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) members[root[i]].push_back(i);

  std::vector<Thread> threads;
  threads.reserve(members.size());
  for (auto& [r, idx] : members) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return later(b, a); });
    threads.push_back({0, std::move(idx)});
  }
  std::sort(threads.begin(), threads.end(), [&](const Thread& a, const Thread& b) {
    return later(b.messages.front(), a.messages.front());
  });
  for (std::size_t t = 0; t < threads.size(); ++t) {
    threads[t].id = static_cast<std::int64_t>(t);
    for (auto i : threads[t].messages) messages[i].thread_id = threads[t].id;
  }
  return threads;
}

}  // namespace devroles
