#include "devroles/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "devroles/rng.hpp"

namespace devroles {

StochasticMatrix qemu_stability_matrix() {
  // Column order: core, peripheral, isolated, absent.
  StochasticMatrix m{};
  const double core_sum = 0.72 + 0.22 + 0.03 + 0.04;
  m[0] = {0.72 / core_sum, 0.22 / core_sum, 0.03 / core_sum, 0.04 / core_sum};
  m[1] = {0.06, 0.74, 0.10, 0.10};
  m[2] = {0.06, 0.48, 0.39, 0.07};
  m[3] = {0.25, 0.25, 0.25, 0.25};
  return m;
}

void validate(const PlantSpec& spec) {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(name) + " must lie in [0, 1]");
  };
  if (spec.n_devs < 2) throw InputError("n_devs must be at least 2");
  if (!(spec.core_fraction > 0.0 && spec.core_fraction < 1.0)) throw InputError("core_fraction must lie in (0, 1)");
  prob(spec.p_cc, "p_cc");
  prob(spec.p_cp, "p_cp");
  prob(spec.p_pp, "p_pp");
  prob(spec.peripheral_activity, "peripheral_activity");
  if (!(spec.zipf_exponent > 0.0)) throw InputError("zipf exponent must be positive");
  if (spec.n_windows < 1) throw InputError("n_windows must be at least 1");
  if (spec.window_days < 1 || spec.stride_days < 1) throw InputError("window and stride must be at least one day");
  if (spec.top_commits_per_epoch < 1) throw InputError("top_commits_per_epoch must be at least 1");
  if (spec.start <= 0) throw InputError("start must be a positive unix time");
  for (const auto& row : spec.transitions) {
    double s = 0.0;
    for (double p : row) {
      prob(p, "transition probability");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw InputError("transition matrix rows must sum to 1");
  }
}

int planted_core_count(const PlantSpec& spec) {
  const int k = static_cast<int>(std::lround(spec.n_devs * spec.core_fraction));
  return std::clamp(k, 1, spec.n_devs - 1);
}

PlantedNetwork generate_block_network(const PlantSpec& spec) {
  validate(spec);
  const int n = spec.n_devs;
  const int k = planted_core_count(spec);
  Rng rng(spec.seed);
  PlantedNetwork out;
  out.labels.op = {Source::vcs, Metric::degree};
  for (int i = 0; i < n; ++i) {
    out.network.add_node(static_cast<PersonId>(i));
    out.labels.labels[static_cast<PersonId>(i)] = i < k ? Role::core : Role::peripheral;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = (i < k && j < k) ? spec.p_cc : (i < k || j < k) ? spec.p_cp : spec.p_pp;
      if (rng.bernoulli(p)) out.network.add_edge(static_cast<PersonId>(i), static_cast<PersonId>(j));
    }
  }
  return out;
}

std::vector<std::int64_t> generate_zipf_counts(int n, double s) {
  if (n < 1) throw InputError("zipf: n must be at least 1");
  if (!(s > 0.0)) throw InputError("zipf: exponent must be positive");
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) out.push_back(std::llround(1000.0 / std::pow(static_cast<double>(k), s)));
  return out;
}

std::vector<RoleSequence> generate_role_walks(const StochasticMatrix& transitions, int n, int steps,
                                              double core_fraction, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RoleSequence> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    RoleSequence seq;
    seq.person = static_cast<PersonId>(i);
    if (steps > 0) {
      RoleState s = rng.bernoulli(core_fraction) ? RoleState::core : RoleState::peripheral;
      seq.states.push_back(s);
      for (int t = 1; t < steps; ++t) {
        const auto& row = transitions[static_cast<std::size_t>(s)];
        const double u = rng.unit();
        double acc = 0.0;
        std::size_t next = kRoleStates - 1;
        while (next > 0 && row[next] <= 0.0) --next;
        for (std::size_t j = 0; j < kRoleStates; ++j) {
          acc += row[j];
          if (u < acc) {
            next = j;
            break;
          }
        }
        s = static_cast<RoleState>(next);
        seq.states.push_back(s);
      }
    }
    out.push_back(std::move(seq));
  }
  return out;
}

DeveloperNetwork generate_hierarchical_network(int levels) {
  constexpr int kModule = 5;
  std::vector<std::pair<PersonId, PersonId>> edges;
  for (int i = 0; i < kModule; ++i) {
    for (int j = i + 1; j < kModule; ++j) edges.emplace_back(i, j);
  }
  PersonId size = kModule;
  std::vector<PersonId> outer = {1, 2, 3, 4};
  for (int level = 0; level < levels; ++level) {
    const auto base_edges = edges;
    std::vector<PersonId> next_outer;
    for (PersonId copy = 1; copy <= 4; ++copy) {
      const PersonId shift = copy * size;
      for (const auto& [a, b] : base_edges) edges.emplace_back(a + shift, b + shift);
      for (auto o : outer) {
        edges.emplace_back(0, o + shift);
        next_outer.push_back(o + shift);
      }
    }
    outer = std::move(next_outer);
    size *= 5;
  }
  DeveloperNetwork net;
  for (PersonId i = 0; i < size; ++i) net.add_node(i);
  for (const auto& [a, b] : edges) net.add_edge(a, b);
  return net;
}

namespace {

struct DevPlan {
  std::string name;
  std::string vcs_email;
  std::string mail_email;
  std::string key;
  bool core = false;
  int commits_per_epoch = 0;
  std::size_t home_file = 0;
};

struct CommitEvent {
  int dev;
  UnixTime ts;
  std::int64_t loc;
};

struct MailEvent {
  int dev;
  UnixTime ts;
};

std::string hex_hash(std::uint64_t seed, std::uint64_t counter) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%016llx%016llx%08llx",
                static_cast<unsigned long long>(mix_seed(seed, counter * 3)),
                static_cast<unsigned long long>(mix_seed(seed, counter * 3 + 1)),
                static_cast<unsigned long long>(mix_seed(seed, counter * 3 + 2) >> 32));
  return std::string(buf, 40);
}

std::string rfc2822(UnixTime t) {
  static const char* const kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  static const char* const kDays[] = {"Thu", "Fri", "Sat", "Sun", "Mon", "Tue", "Wed"};
  std::int64_t z = t / kSecondsPerDay;
  const std::int64_t secs = t % kSecondsPerDay;
  const char* wd = kDays[z % 7];
  z += 719468;
  const std::int64_t era = z / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  const auto y = static_cast<long long>(yoe + era * 400 + (m <= 2));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s, %u %s %lld %02d:%02d:%02d +0000", wd, d, kMonths[m - 1], y,
                static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60));
  return buf;
}

double threshold_of(const std::map<std::string, std::int64_t>& counts, double q) {
  std::vector<double> v;
  for (const auto& [k, c] : counts) v.push_back(static_cast<double>(c));
  return percentile_threshold(std::move(v), q);
}

nlohmann::json core_keys(const std::map<std::string, std::int64_t>& counts, double q) {
  nlohmann::json out = nlohmann::json::array();
  if (counts.empty()) return out;
  const double th = threshold_of(counts, q);
  for (const auto& [k, c] : counts) {
    if (static_cast<double>(c) > th) out.push_back(k);
  }
  return out;
}

}  // namespace

Fixture emit_fixture(const PlantSpec& spec) {
  validate(spec);
  const int n = spec.n_devs;
  const int k = planted_core_count(spec);
  const UnixTime stride = static_cast<UnixTime>(spec.stride_days) * kSecondsPerDay;
  const UnixTime length = static_cast<UnixTime>(spec.window_days) * kSecondsPerDay;
  const UnixTime span = length + static_cast<UnixTime>(spec.n_windows - 1) * stride;
  const UnixTime t0 = spec.start;
  const int epochs = static_cast<int>((span + stride - 1) / stride);

  Rng rng(spec.seed);
  const auto zipf = generate_zipf_counts(n, spec.zipf_exponent);
  const std::size_t n_files = static_cast<std::size_t>(std::max(4, n / 2));
  constexpr int kFunctionsPerFile = 4;

  std::vector<DevPlan> devs(static_cast<std::size_t>(n));
  int peripheral_max = 0;
  for (int i = 0; i < n; ++i) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "%03d", i);
    auto& d = devs[static_cast<std::size_t>(i)];
    d.name = std::string("Synth Dev") + idx;
    d.vcs_email = std::string("dev") + idx + "@vcs.example.org";
    d.mail_email = std::string("dev") + idx + "@lists.example.org";
    d.core = i < k;
    d.commits_per_epoch = std::max<int>(
        1, static_cast<int>(std::lround(static_cast<double>(zipf[static_cast<std::size_t>(i)]) *
                                        spec.top_commits_per_epoch / 1000.0)));
    d.home_file = static_cast<std::size_t>(i) % n_files;
    if (!d.core) peripheral_max = std::max(peripheral_max, d.commits_per_epoch);
  }
  // Invariant: in every epoch each core commits more than any peripheral.
  for (auto& d : devs) {
    if (d.core) d.commits_per_epoch = std::max(d.commits_per_epoch, peripheral_max + 1);
  }

  std::vector<CommitEvent> commit_events;
  std::vector<MailEvent> mail_events;
  std::ostringstream patches;
  std::ostringstream mbox;
  std::uint64_t commit_counter = 0;

  struct PendingCommit {
    UnixTime ts;
    int dev;
    std::uint64_t ordinal;
    std::string body;
  };
  std::vector<PendingCommit> pending;

  auto make_commit = [&](int dev, UnixTime ts) {
    const auto& d = devs[static_cast<std::size_t>(dev)];
    std::size_t file = d.home_file;
    if (d.core || rng.bernoulli(0.2)) file = static_cast<std::size_t>(rng.below(n_files));
    const auto fn = rng.below(kFunctionsPerFile);
    const auto added = static_cast<std::int64_t>(1 + rng.below(12));
    const auto deleted = static_cast<std::int64_t>(rng.below(8));
    const auto line = 10 + 20 * static_cast<std::int64_t>(fn);
    char path[64], ctx[96];
    std::snprintf(path, sizeof path, "src/mod%02zu.c", file);
    std::snprintf(ctx, sizeof ctx, "int mod%02zu_fn%llu(struct state *st)", file, static_cast<unsigned long long>(fn));

    std::ostringstream body;
    const std::string hash = hex_hash(spec.seed, commit_counter);
    const std::uint64_t ordinal = commit_counter++;
    body << '\x01' << hash << '\x01' << d.name << '\x01' << d.vcs_email << '\x01' << ts << '\n';
    body << "diff --git a/" << path << " b/" << path << '\n';
    body << "index 1111111..2222222 100644\n";
    body << "--- a/" << path << '\n' << "+++ b/" << path << '\n';
    body << "@@ -" << line << ',' << deleted + 1 << " +" << line << ',' << added + 1 << " @@ " << ctx << '\n';
    body << " \tst->calls++;\n";
    for (std::int64_t j = 0; j < deleted; ++j) body << "-\told_step_" << j << "(st, counter_" << fn << ");\n";
    for (std::int64_t j = 0; j < added; ++j) body << "+\tnew_step_" << j << "(st, buffer_" << file << ");\n";
    body << '\n';
    pending.push_back({ts, dev, ordinal, body.str()});
    commit_events.push_back({dev, ts, added + deleted});
  };

  struct PendingMail {
    UnixTime ts;
    std::string id;
    std::string text;
  };
  std::vector<PendingMail> mails;
  auto make_mail = [&](int dev, UnixTime ts, const std::string& id, const std::string& parent, const std::string& subject) {
    const auto& d = devs[static_cast<std::size_t>(dev)];
    std::ostringstream m;
    m << "From " << d.mail_email << ' ' << "Thu Jan  1 00:00:00 2015\n";
    m << "From: " << d.name << " <" << d.mail_email << ">\n";
    m << "Date: " << rfc2822(ts) << '\n';
    m << "Message-ID: " << id << '\n';
    if (!parent.empty()) m << "In-Reply-To: " << parent << '\n' << "References: " << parent << '\n';
    m << "Subject: " << (parent.empty() ? "" : "Re: ") << subject << "\n\n";
    m << "Synthetic message body.\n\n";
    mails.push_back({ts, id, m.str()});
    mail_events.push_back({dev, ts});
  };

  for (int e = 0; e < epochs; ++e) {
    const UnixTime es = t0 + static_cast<UnixTime>(e) * stride;
    const UnixTime el = std::min(stride, t0 + span - es);

    std::vector<bool> vcs_active(static_cast<std::size_t>(n)), mail_active(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const bool core = devs[static_cast<std::size_t>(i)].core;
      vcs_active[static_cast<std::size_t>(i)] = core || rng.bernoulli(spec.peripheral_activity);
      mail_active[static_cast<std::size_t>(i)] = core || rng.bernoulli(spec.peripheral_activity);
    }

    for (int i = 0; i < n; ++i) {
      if (!vcs_active[static_cast<std::size_t>(i)]) continue;
      const int c = devs[static_cast<std::size_t>(i)].commits_per_epoch;
      // Spread evenly; a per-dev phase keeps commit times distinct.
      for (int j = 0; j < c; ++j) {
        const UnixTime ts = es + (static_cast<UnixTime>(j) * el) / c + (i == 0 ? 0 : 1 + i);
        make_commit(i, std::min(ts, es + el - 1));
      }
    }
    if (e == epochs - 1) make_commit(0, t0 + span - 1);

    // One thread per core developer; responders drawn per block probability.
    for (int c = 0; c < k; ++c) {
      const UnixTime root_ts = es + 60 + (static_cast<UnixTime>(c) * (el / 2 - 3600)) / k;
      char root_id[96];
      std::snprintf(root_id, sizeof root_id, "<e%03d.c%03d.m000@synth.example.org>", e, c);
      char subject[64];
      std::snprintf(subject, sizeof subject, "[PATCH] epoch %d topic %d", e, c);
      make_mail(c, root_ts, root_id, "", subject);
      std::string prev = root_id;
      int reply = 0;
      for (int r = 0; r < n; ++r) {
        if (r == c || !mail_active[static_cast<std::size_t>(r)]) continue;
        const bool r_core = devs[static_cast<std::size_t>(r)].core;
        if (!rng.bernoulli(r_core ? spec.p_cc : spec.p_cp)) continue;
        ++reply;
        char id[96];
        std::snprintf(id, sizeof id, "<e%03d.c%03d.m%03d@synth.example.org>", e, c, reply);
        make_mail(r, root_ts + reply, id, prev, subject);
        prev = id;
      }
    }

    int pp_thread = 0;
    std::vector<std::pair<int, int>> pp_pairs;
    for (int a = k; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (!mail_active[static_cast<std::size_t>(a)] || !mail_active[static_cast<std::size_t>(b)]) continue;
        if (rng.bernoulli(spec.p_pp)) pp_pairs.emplace_back(a, b);
      }
    }
    for (const auto& [a, b] : pp_pairs) {
      const UnixTime ts = es + el / 2 + (static_cast<UnixTime>(pp_thread) * (el / 2 - 3600)) /
                                            static_cast<UnixTime>(pp_pairs.size());
      char root_id[96], reply_id[96], subject[64];
      std::snprintf(root_id, sizeof root_id, "<e%03d.p%03d.m000@synth.example.org>", e, pp_thread);
      std::snprintf(reply_id, sizeof reply_id, "<e%03d.p%03d.m001@synth.example.org>", e, pp_thread);
      std::snprintf(subject, sizeof subject, "question %d.%d", e, pp_thread);
      make_mail(a, ts, root_id, "", subject);
      make_mail(b, ts + 1, reply_id, root_id, subject);
      ++pp_thread;
    }
  }

  std::stable_sort(pending.begin(), pending.end(),
                   [](const PendingCommit& x, const PendingCommit& y) { return x.ts < y.ts; });
  for (const auto& p : pending) patches << p.body;
  std::stable_sort(mails.begin(), mails.end(), [](const PendingMail& x, const PendingMail& y) {
    return std::tie(x.ts, x.id) < std::tie(y.ts, y.id);
  });
  for (const auto& m : mails) mbox << m.text;

  // Person keys follow the registry rule: the smallest email actually used.
  {
    std::vector<bool> in_vcs(static_cast<std::size_t>(n)), in_mail(static_cast<std::size_t>(n));
    for (const auto& c : commit_events) in_vcs[static_cast<std::size_t>(c.dev)] = true;
    for (const auto& m : mail_events) in_mail[static_cast<std::size_t>(m.dev)] = true;
    for (std::size_t i = 0; i < devs.size(); ++i) {
      auto& d = devs[i];
      if (in_vcs[i] && in_mail[i]) d.key = std::min(d.vcs_email, d.mail_email);
      else d.key = in_vcs[i] ? d.vcs_email : d.mail_email;
    }
  }

  // Activity as analyze must observe it, computed from the plant's own events.
  constexpr double kQuantile = kDefaultQuantile;
  nlohmann::json activity;
  std::set<std::string> persons;
  for (const auto& c : commit_events) persons.insert(devs[static_cast<std::size_t>(c.dev)].key);
  for (const auto& m : mail_events) persons.insert(devs[static_cast<std::size_t>(m.dev)].key);
  activity["n_commits"] = commit_events.size();
  activity["n_messages"] = mail_events.size();
  activity["persons"] = persons;
  activity["range"] = {{"start", t0}, {"end", t0 + span}};
  nlohmann::json windows = nlohmann::json::array();
  for (int w = 0; w < spec.n_windows; ++w) {
    const UnixTime ws = t0 + static_cast<UnixTime>(w) * stride;
    const UnixTime we = ws + length;
    std::map<std::string, std::int64_t> commits, loc, mail;
    for (const auto& c : commit_events) {
      if (c.ts >= ws && c.ts < we) {
        commits[devs[static_cast<std::size_t>(c.dev)].key] += 1;
        loc[devs[static_cast<std::size_t>(c.dev)].key] += c.loc;
      }
    }
    for (const auto& m : mail_events) {
      if (m.ts >= ws && m.ts < we) mail[devs[static_cast<std::size_t>(m.dev)].key] += 1;
    }
    windows.push_back({{"index", w},
                       {"start", ws},
                       {"end", we},
                       {"commits", commits},
                       {"loc", loc},
                       {"mails", mail},
                       {"core",
                        {{"vcs.commit_count", core_keys(commits, kQuantile)},
                         {"vcs.loc_count", core_keys(loc, kQuantile)},
                         {"mail.mail_count", core_keys(mail, kQuantile)}}}});
  }
  activity["windows"] = std::move(windows);

  nlohmann::json core_list = nlohmann::json::array();
  for (int i = 0; i < k; ++i) core_list.push_back(devs[static_cast<std::size_t>(i)].key);
  nlohmann::json plant = {{"seed", spec.seed},
                          {"n_devs", spec.n_devs},
                          {"core_fraction", spec.core_fraction},
                          {"core_keys", core_list},
                          {"block_probabilities", {{"p_cc", spec.p_cc}, {"p_cp", spec.p_cp}, {"p_pp", spec.p_pp}}},
                          {"zipf_exponent", spec.zipf_exponent},
                          {"n_windows", spec.n_windows},
                          {"window_days", spec.window_days},
                          {"stride_days", spec.stride_days},
                          {"start", spec.start},
                          {"quantile", kQuantile},
                          {"peripheral_activity", spec.peripheral_activity}};

  Fixture fx;
  fx.patch_stream = patches.str();
  fx.mbox = mbox.str();
  fx.expected = {{"activity", std::move(activity)}, {"plant", std::move(plant)}};
  return fx;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    out << text;
  };
  write("patches.log", fixture.patch_stream);
  write("list.mbox", fixture.mbox);
  write("expected.json", fixture.expected.dump(2) + "\n");
}

}  // namespace devroles
