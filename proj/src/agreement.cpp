#include "devroles/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "devroles/csv.hpp"
#include "devroles/rng.hpp"

namespace devroles {
namespace {

ConfusionTable tabulate(std::span<const Role> a, std::span<const Role> b) {
  ConfusionTable t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool ca = a[i] == Role::core;
    const bool cb = b[i] == Role::core;
    if (ca && cb) ++t.both_core;
    else if (ca) ++t.a_core_only;
    else if (cb) ++t.b_core_only;
    else ++t.both_periph;
  }
  return t;
}

void intersect(const std::map<PersonId, Role>& a, const std::map<PersonId, Role>& b, std::vector<Role>& va,
               std::vector<Role>& vb) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      va.push_back(ia->second);
      vb.push_back(ib->second);
      ++ia;
      ++ib;
    }
  }
}

std::int64_t agreements(std::span<const Role> a, std::span<const Role> b) {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] == b[i];
  return n;
}

}  // namespace

KappaResult cohens_kappa(const ConfusionTable& t) {
  const std::int64_t n = t.total();
  if (n <= 0) throw InputError("kappa: no developers to compare");
  const double dn = static_cast<double>(n);
  KappaResult r;
  r.n = n;
  r.p_o = static_cast<double>(t.both_core + t.both_periph) / dn;
  const double a_core = static_cast<double>(t.both_core + t.a_core_only) / dn;
  const double b_core = static_cast<double>(t.both_core + t.b_core_only) / dn;
  r.p_e = a_core * b_core + (1.0 - a_core) * (1.0 - b_core);
  const std::int64_t a_core_n = t.both_core + t.a_core_only;
  const std::int64_t b_core_n = t.both_core + t.b_core_only;
  // p_e == 1 exactly when both labelings are constant and equal; decide it on
  // the counts to avoid rounding.
  const bool constant_equal = (a_core_n == 0 && b_core_n == 0) || (a_core_n == n && b_core_n == n);
  if (constant_equal) {
    r.p_e = 1.0;
    r.degenerate = true;
    r.kappa = r.p_o == 1.0 ? 1.0 : 0.0;
    return r;
  }
  r.kappa = (r.p_o - r.p_e) / (1.0 - r.p_e);
  return r;
}

KappaResult cohens_kappa(std::span<const Role> a, std::span<const Role> b) {
  if (a.size() != b.size()) throw InputError("kappa: label vectors differ in length");
  return cohens_kappa(tabulate(a, b));
}

KappaResult cohens_kappa(const std::map<PersonId, Role>& a, const std::map<PersonId, Role>& b) {
  std::vector<Role> va, vb;
  intersect(a, b, va, vb);
  if (va.empty()) throw InputError("kappa: the two classifications share no developers");
  return cohens_kappa(va, vb);
}

double kappa_pvalue(std::span<const Role> a, std::span<const Role> b, int permutations, std::uint64_t seed) {
  const auto observed = cohens_kappa(a, b);
  if (observed.degenerate || permutations <= 0) return 1.0;
  // Permutation preserves both marginals; kappa is monotone in the integer
  // agreement count.
  const std::int64_t observed_agree = agreements(a, b);
  std::vector<Role> shuffled(b.begin(), b.end());
  std::int64_t at_least = 0;
  for (int r = 0; r < permutations; ++r) {
    std::copy(b.begin(), b.end(), shuffled.begin());
    StreamRng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    rng.shuffle(shuffled.begin(), shuffled.end());
    if (agreements(a, shuffled) >= observed_agree) ++at_least;
  }
  return static_cast<double>(1 + at_least) / static_cast<double>(permutations + 1);
}

double kappa_pvalue(const std::map<PersonId, Role>& a, const std::map<PersonId, Role>& b, int permutations,
                    std::uint64_t seed) {
  std::vector<Role> va, vb;
  intersect(a, b, va, vb);
  if (va.empty()) throw InputError("kappa: the two classifications share no developers");
  return kappa_pvalue(va, vb, permutations, seed);
}

std::string_view interpret_kappa(double kappa) {
  if (kappa < 0.0) return "poor";
  if (kappa <= 0.20) return "slight";
  if (kappa <= 0.40) return "fair";
  if (kappa <= 0.60) return "moderate";
  if (kappa <= 0.80) return "substantial";
  return "almost perfect";
}

void split_half_stats(std::span<const double> series, HalfStats& first, HalfStats& second) {
  auto stats = [](std::span<const double> xs) {
    HalfStats h;
    h.count = xs.size();
    if (xs.empty()) return h;
    h.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - h.mean) * (x - h.mean);
    h.variance = ss / static_cast<double>(xs.size());
    return h;
  };
  const std::size_t half = series.size() / 2;
  first = stats(series.first(half));
  second = stats(series.subspan(half));
}

KappaSeries kappa_time_series(std::span<const RoleClassification> a, std::span<const RoleClassification> b,
                              int permutations, std::uint64_t seed, double drift_tolerance) {
  if (a.size() != b.size()) throw InputError("kappa series: classification series differ in length");
  if (a.size() < 4) throw InputError("kappa series: needs at least 4 windows");
  KappaSeries out;
  std::vector<double> used;
  for (std::size_t w = 0; w < a.size(); ++w) {
    std::vector<Role> va, vb;
    intersect(a[w].labels, b[w].labels, va, vb);
    if (a[w].labels.empty() || b[w].labels.empty() || va.empty()) {
      out.per_window.emplace_back();
      out.skipped_windows.push_back(a[w].window);
      continue;
    }
    auto k = cohens_kappa(va, vb);
    k.p_value = kappa_pvalue(va, vb, permutations, mix_seed(seed, static_cast<std::uint64_t>(a[w].window)));
    used.push_back(k.kappa);
    out.per_window.push_back(k);
  }
  out.used_windows = used.size();
  if (!used.empty()) out.mean_kappa = std::accumulate(used.begin(), used.end(), 0.0) / static_cast<double>(used.size());
  split_half_stats(used, out.first_half, out.second_half);
  out.drift = out.first_half.count > 0 && out.second_half.count > 0 &&
              std::abs(out.first_half.mean - out.second_half.mean) > drift_tolerance;
  return out;
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("spearman: paired samples differ in length");
  if (xs.size() < 3) throw InputError("spearman: needs at least 3 pairs");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  CorrelationResult r;
  r.n = static_cast<std::int64_t>(xs.size());
  if (sxx == 0.0 || syy == 0.0) {
    r.undefined = true;
    r.rho = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = n - 2.0;
  if (std::abs(r.rho) >= 1.0) {
    r.p_value = 0.0;
  } else {
    const double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
    const boost::math::students_t dist(df);
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  return r;
}

CorrelationResult hierarchy_correlation(const DeveloperNetwork& net) {
  const auto degree = degree_centrality(net);
  const auto cc = clustering_coefficient(net);
  std::vector<double> xs, ys;
  for (const auto& [p, c] : cc) {
    if (!c) continue;
    xs.push_back(static_cast<double>(degree.at(p)));
    ys.push_back(*c);
  }
  if (xs.size() < 3) {
    CorrelationResult r;
    r.n = static_cast<std::int64_t>(xs.size());
    r.undefined = true;
    return r;
  }
  return spearman(xs, ys);
}

GroundTruth read_ground_truth(std::istream& in, const IdentityRegistry& registry) {
  GroundTruth gt;
  const auto rows = csv::read_all(in);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() < 2) throw InputError("ground truth row " + std::to_string(i + 1) + ": expected person_key,role");
    if (i == 0 && row[0] == "person_key") continue;
    std::string role = normalize_name(row[1]);
    Role r;
    if (role == "core") r = Role::core;
    else if (role == "peripheral" || role == "periphery") r = Role::peripheral;
    else throw InputError("ground truth row " + std::to_string(i + 1) + ": unknown role '" + row[1] + "'");
    if (auto id = registry.find(row[0])) gt.labels[*id] = r;
    else gt.unknown.push_back(row[0]);
  }
  return gt;
}

KappaResult compare_to_ground_truth(const RoleClassification& classification, const GroundTruth& truth,
                                    int permutations, std::uint64_t seed) {
  auto k = cohens_kappa(classification.labels, truth.labels);
  k.p_value = kappa_pvalue(classification.labels, truth.labels, permutations, seed);
  return k;
}

}  // namespace devroles
