#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devroles/classify.hpp"
#include "devroles/common.hpp"
#include "devroles/identity.hpp"

namespace devroles {

inline constexpr int kDefaultPermutations = 10000;

struct ConfusionTable {
  std::int64_t both_core = 0;
  std::int64_t a_core_only = 0;
  std::int64_t b_core_only = 0;
  std::int64_t both_periph = 0;

  std::int64_t total() const { return both_core + a_core_only + b_core_only + both_periph; }
};

struct KappaResult {
  std::int64_t n = 0;
  double p_o = 0.0;
  double p_e = 0.0;
  double kappa = 0.0;
  double p_value = 1.0;
  /// Chance agreement is 1 (both labelings constant and equal).
  bool degenerate = false;
};

/// Cohen's kappa from a 2x2 table. With p_e == 1, kappa is 1 if p_o == 1
/// else 0, and the result is flagged degenerate. Throws InputError when the
/// table is empty.
KappaResult cohens_kappa(const ConfusionTable& table);
/// Aligned label vectors of equal length.
KappaResult cohens_kappa(std::span<const Role> a, std::span<const Role> b);
/// Compares on the intersection of the key sets (InputError if empty).
KappaResult cohens_kappa(const std::map<PersonId, Role>& a, const std::map<PersonId, Role>& b);

/// Permutation p-value: (1 + #{kappa(a, perm(b)) >= kappa(a, b)}) / (R + 1).
/// Replicate r shuffles with a stream seeded by mix_seed(seed, r). A
/// degenerate comparison returns 1.
double kappa_pvalue(std::span<const Role> a, std::span<const Role> b, int permutations, std::uint64_t seed);
double kappa_pvalue(const std::map<PersonId, Role>& a, const std::map<PersonId, Role>& b, int permutations,
                    std::uint64_t seed);

/// Strength-of-agreement band: poor, slight, fair, moderate, substantial or
/// almost perfect.
std::string_view interpret_kappa(double kappa);

struct HalfStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
};

struct KappaSeries {
  /// One entry per input window; nullopt where the window was skipped.
  std::vector<std::optional<KappaResult>> per_window;
  std::vector<int> skipped_windows;
  HalfStats first_half;
  HalfStats second_half;
  /// Set when the half means differ by more than the drift tolerance.
  bool drift = false;
  double mean_kappa = 0.0;
  std::size_t used_windows = 0;
};

inline constexpr double kDriftTolerance = 0.1;

/// Per-window kappa between two classifications plus split-half mean and
/// variance of the series. Windows with an empty classification or an empty
/// intersection are skipped and listed. Throws InputError for fewer than 4
/// windows. A permutation count of 0 leaves p-values at 1.
KappaSeries kappa_time_series(std::span<const RoleClassification> a, std::span<const RoleClassification> b,
                              int permutations = 0, std::uint64_t seed = 0, double drift_tolerance = kDriftTolerance);

/// Split-half descriptives for a raw series; used by kappa_time_series.
void split_half_stats(std::span<const double> series, HalfStats& first, HalfStats& second);

struct CorrelationResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::int64_t n = 0;
  /// Zero variance in a ranking: rho is meaningless.
  bool undefined = false;
};

/// Ranks with ties averaged (1-based).
std::vector<double> average_ranks(std::span<const double> xs);

/// Spearman rho (Pearson on average ranks) with a two-sided Student-t
/// p-value. Throws InputError for fewer than 3 pairs or mismatched lengths.
CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys);

/// Degree vs clustering coefficient over nodes with a defined coefficient.
CorrelationResult hierarchy_correlation(const DeveloperNetwork& net);

struct GroundTruth {
  std::map<PersonId, Role> labels;
  std::vector<std::string> unknown;
};

/// Reads `person_key,role` CSV (header optional) and resolves keys through
/// the registry. Unresolvable keys are collected, not fatal.
GroundTruth read_ground_truth(std::istream& in, const IdentityRegistry& registry);

/// Kappa of a classification against external labels (InputError when the
/// intersection is empty).
KappaResult compare_to_ground_truth(const RoleClassification& classification, const GroundTruth& truth,
                                    int permutations = 0, std::uint64_t seed = 0);

}  // namespace devroles
