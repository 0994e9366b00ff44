#include "devroles/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "devroles/csv.hpp"
#include "devroles/rng.hpp"

namespace devroles {
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const fs::path& p, const std::string& text) {
  if (p.extension() == ".json") return true;
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '[';
}

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string opt_csv(const std::optional<double>& v) { return v ? csv::format_real(*v) : "NA"; }

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

std::string window_stem(int index, NetworkKind kind) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "window_%03d_%s", index, std::string(to_string(kind)).c_str());
  return buf;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.window_days < 1 || c.window_days > 3650) throw InputError("--window-days must lie in [1, 3650]");
  if (c.stride_days < 1 || c.stride_days > c.window_days) throw InputError("--stride-days must lie in [1, window-days]");
  if (!(c.quantile >= 0.5 && c.quantile < 1.0)) throw InputError("--quantile must lie in [0.5, 1)");
  if (!(c.theta > 0.0 && c.theta <= 1.0)) throw InputError("--theta must lie in (0, 1]");
  if (c.permutations < 0 || c.permutations > 1000000) throw InputError("--permutations must lie in [0, 1000000]");
  if (c.range && c.range->end <= c.range->start) throw InputError("--range END must follow START");
}

bool Analysis::any_meaningful_kappa() const {
  for (const auto& p : agreements) {
    for (const auto& k : p.per_window) {
      if (k && !k->degenerate) return true;
    }
  }
  return false;
}

nlohmann::json Analysis::activity_summary() const {
  auto key = [&](PersonId p) { return registry.person(p).key; };
  nlohmann::json out;
  std::set<std::string> persons;
  for (const auto& c : commits) persons.insert(key(c.author));
  for (const auto& m : messages) persons.insert(key(m.author));
  out["n_commits"] = commits.size();
  out["n_messages"] = messages.size();
  out["persons"] = persons;
  out["range"] = {{"start", range.start}, {"end", range.end}};

  const auto& ops = all_operationalizations();
  auto core_of = [&](const WindowAnalysis& w, Operationalization op) {
    nlohmann::json keys = nlohmann::json::array();
    const auto it = std::find(ops.begin(), ops.end(), op);
    std::set<std::string> sorted;
    for (const auto& [p, r] : w.classifications[static_cast<std::size_t>(it - ops.begin())].labels) {
      if (r == Role::core) sorted.insert(key(p));
    }
    for (const auto& k : sorted) keys.push_back(k);
    return keys;
  };

  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : this->windows) {
    const auto act = slice(commits, messages, w.window);
    std::map<std::string, std::int64_t> nc, loc, nm;
    for (const auto& c : act.commits) {
      nc[key(c.author)] += 1;
      loc[key(c.author)] += count_loc(c);
    }
    for (const auto& m : act.messages) nm[key(m.author)] += 1;
    windows.push_back({{"index", w.window.index},
                       {"start", w.window.start},
                       {"end", w.window.end},
                       {"commits", nc},
                       {"loc", loc},
                       {"mails", nm},
                       {"core",
                        {{"vcs.commit_count", core_of(w, {Source::vcs, Metric::commit_count})},
                         {"vcs.loc_count", core_of(w, {Source::vcs, Metric::loc_count})},
                         {"mail.mail_count", core_of(w, {Source::mail, Metric::mail_count})}}}});
  }
  out["windows"] = std::move(windows);
  return out;
}

Analysis analyze(const RunConfig& config) {
  validate(config);
  Analysis a;
  a.config = config;

  PatchParseOptions popts;
  popts.granularity = config.granularity;
  popts.collect_tokens = config.semantic;

  if (config.vcs_path && fs::exists(*config.vcs_path)) {
    const std::string text = read_file(*config.vcs_path);
    if (looks_like_json(*config.vcs_path, text)) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("commit dump: ") + e.what());
      }
      a.commits = commits_from_json(j);
    } else {
      auto log = parse_patch_stream(std::string_view(text), popts);
      a.commits = std::move(log.commits);
      for (const auto& [k, v] : log.warnings.counts) a.warnings.add("vcs." + k, v);
    }
    a.have_vcs = true;
  } else if (config.vcs_path) {
    a.warnings.add("vcs.missing_input");
  }

  if (config.mbox_path && fs::exists(*config.mbox_path)) {
    auto archive = parse_mbox(std::string_view(read_file(*config.mbox_path)));
    a.messages = std::move(archive.messages);
    for (const auto& [k, v] : archive.warnings.counts) a.warnings.add("mail." + k, v);
    a.have_mail = true;
  } else if (config.mbox_path) {
    a.warnings.add("mail.missing_input");
  }
  if (!a.have_vcs && !a.have_mail) throw InputError("no readable input archive (need --vcs and/or --mbox)");
  if (a.commits.empty() && a.messages.empty()) throw InputError("input archives contain no activity");

  AliasOverrides overrides;
  if (config.aliases_path) {
    std::ifstream in(*config.aliases_path);
    if (!in) throw InputError("cannot read " + config.aliases_path->string());
    overrides = read_alias_overrides(in);
  }

  std::stable_sort(a.commits.begin(), a.commits.end(),
                   [](const Commit& x, const Commit& y) { return x.timestamp < y.timestamp; });
  std::sort(a.messages.begin(), a.messages.end(), [](const Message& x, const Message& y) {
    return std::tie(x.timestamp, x.message_id) < std::tie(y.timestamp, y.message_id);
  });

  std::vector<RawIdentity> raws;
  raws.reserve(a.commits.size() + a.messages.size());
  for (const auto& c : a.commits) raws.push_back(c.author_identity);
  for (const auto& m : a.messages) raws.push_back(m.author_identity);
  a.registry = IdentityRegistry::resolve(raws, overrides);
  for (std::size_t i = 0; i < a.commits.size(); ++i) a.commits[i].author = a.registry.person_of(i);
  for (std::size_t i = 0; i < a.messages.size(); ++i) {
    a.messages[i].author = a.registry.person_of(a.commits.size() + i);
  }
  a.threads = thread_messages(a.messages);

  a.range = config.range ? *config.range : default_range(a.commits, a.messages);
  const auto windows = generate_windows(a.range.start, a.range.end,
                                        static_cast<UnixTime>(config.window_days) * kSecondsPerDay,
                                        static_cast<UnixTime>(config.stride_days) * kSecondsPerDay);

  TechnicalNetworkOptions topts;
  topts.granularity = config.granularity;
  topts.semantic = config.semantic;
  topts.theta = config.theta;

  const auto& ops = all_operationalizations();
  for (const auto& w : windows) {
    WindowAnalysis wa;
    wa.window = w;
    const auto act = slice(a.commits, a.messages, w);
    wa.n_commits = act.commits.size();
    wa.n_messages = act.messages.size();
    wa.technical = build_technical_network(act.commits, w, topts);
    wa.communication = build_communication_network(a.messages, a.threads, w);

    for (const auto& op : ops) {
      std::map<PersonId, double> values;
      const DeveloperNetwork& net = op.source == Source::vcs ? wa.technical : wa.communication;
      switch (op.metric) {
        case Metric::commit_count: values = commit_counts(act.commits); break;
        case Metric::loc_count: values = loc_counts(act.commits); break;
        case Metric::mail_count: values = mail_counts(act.messages); break;
        default: values = network_metric_values(net, op.metric);
      }
      auto cls = classify_by_value(values, config.quantile);
      cls.window = w.index;
      cls.op = op;
      wa.classifications.push_back(std::move(cls));
    }

    const auto& vcs_degree = wa.classifications[3];
    const auto& mail_degree = wa.classifications[6];
    wa.block_technical = block_probabilities(wa.technical, vcs_degree);
    wa.block_communication = block_probabilities(wa.communication, mail_degree);
    wa.hierarchy_technical = hierarchy_correlation(wa.technical);
    wa.hierarchy_communication = hierarchy_correlation(wa.communication);
    a.windows.push_back(std::move(wa));
  }

  // Agreement for every unordered pair, pairs ordered by operationalization name.
  std::vector<std::size_t> order(ops.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ops[x].name() < ops[y].name(); });
  std::uint64_t pair_index = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j, ++pair_index) {
      PairAgreement pa;
      pa.a = ops[order[i]];
      pa.b = ops[order[j]];
      std::vector<RoleClassification> sa, sb;
      for (const auto& w : a.windows) {
        sa.push_back(w.classifications[order[i]]);
        sb.push_back(w.classifications[order[j]]);
      }
      const std::uint64_t pair_seed = mix_seed(config.seed, 1000 + pair_index);
      if (sa.size() >= 4) {
        auto series = kappa_time_series(sa, sb, config.permutations, pair_seed);
        pa.per_window = series.per_window;
        if (series.used_windows > 0) pa.mean_kappa = series.mean_kappa;
        pa.series = std::move(series);
      } else {
        std::vector<double> used;
        for (std::size_t w = 0; w < sa.size(); ++w) {
          try {
            auto k = cohens_kappa(sa[w].labels, sb[w].labels);
            k.p_value = kappa_pvalue(sa[w].labels, sb[w].labels, config.permutations,
                                     mix_seed(pair_seed, static_cast<std::uint64_t>(sa[w].window)));
            used.push_back(k.kappa);
            pa.per_window.push_back(k);
          } catch (const InputError&) {
            pa.per_window.emplace_back();
          }
        }
        if (!used.empty()) pa.mean_kappa = std::accumulate(used.begin(), used.end(), 0.0) / static_cast<double>(used.size());
      }
      a.agreements.push_back(std::move(pa));
    }
  }

  // Role stability on the configured network's degree classification.
  {
    const std::size_t degree_index = config.dynamics_network == Source::vcs ? 3 : 6;
    std::vector<RoleClassification> degree;
    for (const auto& w : a.windows) degree.push_back(w.classifications[degree_index]);
    const auto seqs = role_sequences(degree);
    a.n_sequences = seqs.size();
    try {
      a.transitions = estimate_transition_matrix(seqs);
    } catch (const InputError&) {
      a.flags.push_back("transitions: no role sequence spans two windows");
    }
  }

  for (const auto& w : a.windows) {
    for (int net = 0; net < 2; ++net) {
      const auto& bp = net == 0 ? w.block_technical : w.block_communication;
      const auto& h = net == 0 ? w.hierarchy_technical : w.hierarchy_communication;
      const std::string name = net == 0 ? "technical" : "communication";
      if (!bp.p_cc() || !bp.p_cp() || !bp.p_pp()) {
        a.flags.push_back("blockmodel: window " + std::to_string(w.window.index) + " " + name + " has an empty block");
      }
      if (h.undefined) {
        a.flags.push_back("hierarchy: window " + std::to_string(w.window.index) + " " + name + " undefined");
      }
    }
  }
  for (const auto& p : a.agreements) {
    std::size_t skipped = 0, degenerate = 0;
    for (const auto& k : p.per_window) {
      if (!k) ++skipped;
      else if (k->degenerate) ++degenerate;
    }
    const std::string name = p.a.name() + " vs " + p.b.name();
    if (skipped) a.flags.push_back("agreement: " + name + " skipped in " + std::to_string(skipped) + " window(s)");
    if (degenerate) a.flags.push_back("agreement: " + name + " degenerate in " + std::to_string(degenerate) + " window(s)");
    if (p.series && p.series->drift) a.flags.push_back("agreement: " + name + " half means differ (drift)");
  }

  if (config.ground_truth_path) {
    std::ifstream in(*config.ground_truth_path);
    if (!in) throw InputError("cannot read " + config.ground_truth_path->string());
    a.ground_truth = read_ground_truth(in, a.registry);
    if (!a.ground_truth->unknown.empty()) {
      a.warnings.add("ground_truth.unknown_person", static_cast<std::int64_t>(a.ground_truth->unknown.size()));
    }
  }
  return a;
}

void write_graphs(const Analysis& a, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& w : a.windows) {
    for (const DeveloperNetwork* net : {&w.technical, &w.communication}) {
      const std::string stem = window_stem(w.window.index, net->kind);
      auto g = open_out(dir / (stem + ".graphml"));
      write_graphml(g, *net, a.registry);
      auto e = open_out(dir / (stem + "_edges.csv"));
      write_edge_list(e, *net, a.registry);
    }
  }
}

void write_reports(const Analysis& a, int exit_code) {
  const fs::path dir = a.config.output_dir;
  fs::create_directories(dir);
  auto key = [&](PersonId p) { return a.registry.person(p).key; };
  const auto& ops = all_operationalizations();

  {
    auto out = open_out(dir / "windows.csv");
    csv::write_row(out, {"window", "start", "end", "start_iso", "end_iso", "commits", "messages"});
    for (const auto& w : a.windows) {
      csv::write_row(out, {std::to_string(w.window.index), std::to_string(w.window.start),
                           std::to_string(w.window.end), format_iso_date(w.window.start),
                           format_iso_date(w.window.end), std::to_string(w.n_commits),
                           std::to_string(w.n_messages)});
    }
  }

  {
    auto out = open_out(dir / "classifications.csv");
    csv::write_row(out, {"window", "metric", "person", "value", "label", "threshold"});
    std::vector<std::size_t> order(ops.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ops[x].name() < ops[y].name(); });
    for (const auto& w : a.windows) {
      for (auto oi : order) {
        const auto& cls = w.classifications[oi];
        std::vector<std::pair<std::string, PersonId>> persons;
        for (const auto& [p, r] : cls.labels) persons.emplace_back(key(p), p);
        std::sort(persons.begin(), persons.end());
        for (const auto& [k, p] : persons) {
          csv::write_row(out, {std::to_string(w.window.index), ops[oi].name(), k, csv::format_real(cls.values.at(p)),
                               std::string(to_string(cls.labels.at(p))), csv::format_real(cls.threshold)});
        }
      }
    }
  }

  {
    auto out = open_out(dir / "agreement.csv");
    csv::write_row(out, {"window", "metric_a", "metric_b", "n", "p_o", "p_e", "kappa", "p_value", "status"});
    for (std::size_t wi = 0; wi < a.windows.size(); ++wi) {
      for (const auto& p : a.agreements) {
        const auto& k = p.per_window[wi];
        const std::string w = std::to_string(a.windows[wi].window.index);
        if (!k) {
          csv::write_row(out, {w, p.a.name(), p.b.name(), "0", "NA", "NA", "NA", "NA", "skipped"});
          continue;
        }
        csv::write_row(out, {w, p.a.name(), p.b.name(), std::to_string(k->n), csv::format_real(k->p_o),
                             csv::format_real(k->p_e), csv::format_real(k->kappa), csv::format_real(k->p_value),
                             k->degenerate ? "degenerate" : "ok"});
      }
    }
  }

  {
    nlohmann::json metrics = nlohmann::json::array();
    std::vector<std::string> names;
    for (const auto& op : ops) names.push_back(op.name());
    std::sort(names.begin(), names.end());
    for (const auto& n : names) metrics.push_back(n);
    nlohmann::json matrix = nlohmann::json::object();
    for (const auto& n : names) matrix[n][n] = 1.0;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : a.agreements) {
      const auto mk = p.mean_kappa;
      matrix[p.a.name()][p.b.name()] = opt_json(mk);
      matrix[p.b.name()][p.a.name()] = opt_json(mk);
      nlohmann::json entry = {{"a", p.a.name()},
                              {"b", p.b.name()},
                              {"mean_kappa", opt_json(mk)},
                              {"band", mk ? nlohmann::json(std::string(interpret_kappa(*mk))) : nlohmann::json(nullptr)}};
      std::int64_t used = 0;
      nlohmann::json skipped = nlohmann::json::array();
      for (std::size_t wi = 0; wi < p.per_window.size(); ++wi) {
        if (p.per_window[wi]) ++used;
        else skipped.push_back(a.windows[wi].window.index);
      }
      entry["windows_used"] = used;
      entry["skipped_windows"] = skipped;
      if (p.series) {
        auto half = [](const HalfStats& h) {
          return nlohmann::json{{"count", h.count}, {"mean", h.mean}, {"variance", h.variance}};
        };
        entry["stationarity"] = {{"first_half", half(p.series->first_half)},
                                 {"second_half", half(p.series->second_half)},
                                 {"drift", p.series->drift}};
      } else {
        entry["stationarity"] = nullptr;
      }
      pairs.push_back(std::move(entry));
    }
    auto out = open_out(dir / "kappa_matrix.json");
    out << nlohmann::json{{"metrics", metrics}, {"matrix", matrix}, {"pairs", pairs}}.dump(2) << '\n';
  }

  {
    nlohmann::json t = a.transitions ? a.transitions->to_json() : nlohmann::json(nullptr);
    nlohmann::json doc = {{"network", std::string(to_string(a.config.dynamics_network))},
                          {"sequences", a.n_sequences},
                          {"transitions", t}};
    auto out = open_out(dir / "transitions.json");
    out << doc.dump(2) << '\n';
  }

  {
    auto out = open_out(dir / "blockmodel.csv");
    csv::write_row(out, {"window", "network", "p_cc", "p_cp", "p_pp", "present_cc", "possible_cc", "present_cp",
                         "possible_cp", "present_pp", "possible_pp", "ordering_ok"});
    for (const auto& w : a.windows) {
      for (int net = 0; net < 2; ++net) {
        const auto& bp = net == 0 ? w.block_technical : w.block_communication;
        std::string ok = "NA";
        if (bp.p_cc() && bp.p_cp() && bp.p_pp()) ok = check_ordering(bp) ? "true" : "false";
        csv::write_row(out, {std::to_string(w.window.index), net == 0 ? "technical" : "communication",
                             opt_csv(bp.p_cc()), opt_csv(bp.p_cp()), opt_csv(bp.p_pp()),
                             std::to_string(bp.core_core.present), std::to_string(bp.core_core.possible),
                             std::to_string(bp.core_periph.present), std::to_string(bp.core_periph.possible),
                             std::to_string(bp.periph_periph.present), std::to_string(bp.periph_periph.possible), ok});
      }
    }
  }

  {
    auto out = open_out(dir / "hierarchy.csv");
    csv::write_row(out, {"window", "network", "rho", "p_value", "n"});
    for (const auto& w : a.windows) {
      for (int net = 0; net < 2; ++net) {
        const auto& h = net == 0 ? w.hierarchy_technical : w.hierarchy_communication;
        csv::write_row(out, {std::to_string(w.window.index), net == 0 ? "technical" : "communication",
                             h.undefined ? "NA" : csv::format_real(h.rho), h.undefined ? "NA" : csv::format_real(h.p_value),
                             std::to_string(h.n)});
      }
    }
  }

  nlohmann::json ground = nullptr;
  if (a.ground_truth) {
    auto out = open_out(dir / "ground_truth.csv");
    csv::write_row(out, {"window", "metric", "n", "p_o", "p_e", "kappa", "p_value", "band"});
    ground = nlohmann::json::object();
    for (std::size_t oi = 0; oi < ops.size(); ++oi) {
      std::vector<double> ks;
      for (const auto& w : a.windows) {
        try {
          const auto k = compare_to_ground_truth(w.classifications[oi], *a.ground_truth, a.config.permutations,
                                                 mix_seed(a.config.seed, 50000 + oi * 10000 + static_cast<std::uint64_t>(w.window.index)));
          ks.push_back(k.kappa);
          csv::write_row(out, {std::to_string(w.window.index), ops[oi].name(), std::to_string(k.n),
                               csv::format_real(k.p_o), csv::format_real(k.p_e), csv::format_real(k.kappa),
                               csv::format_real(k.p_value), std::string(interpret_kappa(k.kappa))});
        } catch (const InputError&) {
        }
      }
      if (!ks.empty()) {
        const double mean = std::accumulate(ks.begin(), ks.end(), 0.0) / static_cast<double>(ks.size());
        ground[ops[oi].name()] = {{"mean_kappa", mean}, {"band", std::string(interpret_kappa(mean))},
                                  {"windows", ks.size()}};
      }
    }
  }

  if (a.config.write_graphs) write_graphs(a, dir / "graphs");

  nlohmann::json warnings = a.warnings.counts;
  nlohmann::json config = {{"window_days", a.config.window_days},
                           {"stride_days", a.config.stride_days},
                           {"quantile", a.config.quantile},
                           {"granularity", a.config.granularity == Granularity::function ? "function" : "file"},
                           {"semantic", a.config.semantic},
                           {"theta", a.config.theta},
                           {"network", std::string(to_string(a.config.dynamics_network))},
                           {"seed", a.config.seed},
                           {"permutations", a.config.permutations}};
  nlohmann::json mean_kappa = nlohmann::json::object();
  for (const auto& p : a.agreements) mean_kappa[p.a.name() + "|" + p.b.name()] = opt_json(p.mean_kappa);
  std::int64_t ordering_ok = 0, ordering_defined = 0;
  for (const auto& w : a.windows) {
    for (const auto* bp : {&w.block_technical, &w.block_communication}) {
      if (bp->p_cc() && bp->p_cp() && bp->p_pp()) {
        ++ordering_defined;
        ordering_ok += check_ordering(*bp);
      }
    }
  }
  nlohmann::json summary = {
      {"activity", a.activity_summary()},
      {"analysis",
       {{"n_persons", a.registry.size()},
        {"n_threads", a.threads.size()},
        {"n_windows", a.windows.size()},
        {"inputs", {{"vcs", a.have_vcs}, {"mail", a.have_mail}}},
        {"mean_kappa", mean_kappa},
        {"blockmodel_ordering", {{"ok", ordering_ok}, {"defined", ordering_defined}}},
        {"transitions", a.transitions ? a.transitions->to_json() : nlohmann::json(nullptr)},
        {"ground_truth", ground}}},
      {"config", config},
      {"exit_code", exit_code},
      {"flags", a.flags},
      {"warnings", warnings}};
  auto out = open_out(dir / "summary.json");
  out << summary.dump(2) << '\n';
}

int run_analyze(const RunConfig& config, std::ostream& err) {
  try {
    const Analysis a = analyze(config);
    const int code = a.any_meaningful_kappa() ? kExitOk : kExitDegenerate;
    write_reports(a, code);
    for (const auto& [k, v] : a.warnings.counts) err << "warning: " << k << " x" << v << '\n';
    if (code == kExitDegenerate) err << "error: every agreement comparison is degenerate or empty\n";
    return code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int run_export_graphs(const RunConfig& config, std::ostream& err) {
  try {
    RunConfig c = config;
    c.permutations = 0;
    const Analysis a = analyze(c);
    write_graphs(a, config.output_dir);
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace devroles
