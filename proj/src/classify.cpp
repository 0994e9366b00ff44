#include "devroles/classify.hpp"

#include <algorithm>
#include <cmath>

namespace devroles {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::commit_count: return "commit_count";
    case Metric::loc_count: return "loc_count";
    case Metric::mail_count: return "mail_count";
    case Metric::degree: return "degree";
    case Metric::eigenvector: return "eigenvector";
    case Metric::hierarchy: return "hierarchy";
  }
  return "unknown";
}

std::string_view to_string(Source s) { return s == Source::vcs ? "vcs" : "mail"; }

std::string Operationalization::name() const {
  std::string out(to_string(source));
  out += '.';
  out += to_string(metric);
  return out;
}

const std::vector<Operationalization>& all_operationalizations() {
  static const std::vector<Operationalization> ops = {
      {Source::vcs, Metric::commit_count},  {Source::vcs, Metric::loc_count},   {Source::mail, Metric::mail_count},
      {Source::vcs, Metric::degree},        {Source::vcs, Metric::eigenvector}, {Source::vcs, Metric::hierarchy},
      {Source::mail, Metric::degree},       {Source::mail, Metric::eigenvector}, {Source::mail, Metric::hierarchy},
  };
  return ops;
}

std::size_t RoleClassification::core_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](const auto& kv) { return kv.second == Role::core; }));
}

double percentile_threshold(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("percentile of an empty set");
  if (!(q > 0.0 && q < 1.0)) throw InputError("quantile must lie in (0, 1)");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  // The epsilon absorbs representation error in q*n (0.8*10 must give 8).
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

RoleClassification classify_by_value(const std::map<PersonId, double>& values, double q) {
  RoleClassification out;
  out.values = values;
  if (values.empty()) return out;
  std::vector<double> v;
  v.reserve(values.size());
  for (const auto& [p, x] : values) v.push_back(x);
  out.threshold = percentile_threshold(std::move(v), q);
  for (const auto& [p, x] : values) out.labels[p] = x > out.threshold ? Role::core : Role::peripheral;
  return out;
}

std::map<PersonId, double> commit_counts(std::span<const Commit> commits) {
  std::map<PersonId, double> out;
  for (const auto& c : commits) out[c.author] += 1.0;
  return out;
}

std::map<PersonId, double> loc_counts(std::span<const Commit> commits) {
  std::map<PersonId, double> out;
  for (const auto& c : commits) out[c.author] += static_cast<double>(count_loc(c));
  return out;
}

std::map<PersonId, double> mail_counts(std::span<const Message> messages) {
  std::map<PersonId, double> out;
  for (const auto& m : messages) out[m.author] += 1.0;
  return out;
}

std::map<PersonId, std::int64_t> degree_centrality(const DeveloperNetwork& net) {
  const Adjacency adj(net);
  std::map<PersonId, std::int64_t> out;
  for (std::size_t i = 0; i < adj.size(); ++i) out[adj.ids[i]] = static_cast<std::int64_t>(adj.neighbours[i].size());
  return out;
}

std::map<PersonId, double> eigenvector_centrality(const DeveloperNetwork& net, const PowerIterationOptions& options) {
  const Adjacency adj(net);
  const std::size_t n = adj.size();
  std::vector<double> x(n, 1.0), next(n);
  bool any_edge = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (adj.neighbours[i].empty()) x[i] = 0.0;
    else any_edge = true;
  }

  if (any_edge) {
    for (int iter = 0; iter < options.max_iterations; ++iter) {
      double peak = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (auto j : adj.neighbours[i]) s += x[j];
        next[i] = adj.neighbours[i].empty() ? 0.0 : s;
        peak = std::max(peak, next[i]);
      }
      double delta = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        next[i] /= peak;
        delta = std::max(delta, std::abs(next[i] - x[i]));
      }
      x.swap(next);
      if (delta < options.tolerance) break;
    }
  }

  std::map<PersonId, double> out;
  for (std::size_t i = 0; i < n; ++i) out[adj.ids[i]] = x[i];
  return out;
}

std::map<PersonId, std::optional<double>> clustering_coefficient(const DeveloperNetwork& net) {
  const Adjacency adj(net);
  std::map<PersonId, std::optional<double>> out;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    const auto& nb = adj.neighbours[i];
    const std::size_t d = nb.size();
    if (d < 2) {
      out[adj.ids[i]] = std::nullopt;
      continue;
    }
    std::size_t links = 0;
    for (std::size_t a = 0; a < d; ++a) {
      const auto& na = adj.neighbours[nb[a]];
      for (std::size_t b = a + 1; b < d; ++b) {
        if (std::binary_search(na.begin(), na.end(), nb[b])) ++links;
      }
    }
    out[adj.ids[i]] = static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1) / 2.0);
  }
  return out;
}

std::map<PersonId, double> hierarchy_score(const DeveloperNetwork& net) {
  const auto degree = degree_centrality(net);
  const auto cc = clustering_coefficient(net);
  std::map<PersonId, double> out;
  for (const auto& [p, d] : degree) {
    const double c = cc.at(p).value_or(0.0);
    out[p] = static_cast<double>(d) * (1.0 - c);
  }
  return out;
}

std::map<PersonId, double> network_metric_values(const DeveloperNetwork& net, Metric metric) {
  switch (metric) {
    case Metric::degree: {
      std::map<PersonId, double> out;
      for (const auto& [p, d] : degree_centrality(net)) out[p] = static_cast<double>(d);
      return out;
    }
    case Metric::eigenvector: return eigenvector_centrality(net);
    case Metric::hierarchy: return hierarchy_score(net);
    default: throw Error("not a network metric: " + std::string(to_string(metric)));
  }
}

}  // namespace devroles
