#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "devroles/common.hpp"
#include "devroles/identity.hpp"
#include "devroles/mail.hpp"
#include "devroles/network.hpp"
#include "devroles/vcs.hpp"

namespace devroles {

inline constexpr double kDefaultQuantile = 0.8;

enum class Metric : std::uint8_t { commit_count, loc_count, mail_count, degree, eigenvector, hierarchy };

std::string_view to_string(Metric m);
std::string_view to_string(Source s);

/// A metric evaluated on one data source, e.g. degree on the mail network.
struct Operationalization {
  Source source;
  Metric metric;

  std::string name() const;
  auto operator<=>(const Operationalization&) const = default;
};

/// The nine operationalizations, in report order.
const std::vector<Operationalization>& all_operationalizations();

struct RoleClassification {
  int window = 0;
  Operationalization op{Source::vcs, Metric::commit_count};
  std::map<PersonId, Role> labels;
  std::map<PersonId, double> values;
  double threshold = 0.0;

  std::size_t core_count() const;
};

/// Nearest-rank quantile: the ceil(q*n)-th smallest value. Throws InputError
/// on empty input or q outside (0, 1).
double percentile_threshold(std::vector<double> values, double q = kDefaultQuantile);

/// Core iff value > threshold (strict). An empty value map yields an empty
/// classification with threshold 0.
RoleClassification classify_by_value(const std::map<PersonId, double>& values, double q = kDefaultQuantile);

std::map<PersonId, double> commit_counts(std::span<const Commit> commits);
std::map<PersonId, double> loc_counts(std::span<const Commit> commits);
std::map<PersonId, double> mail_counts(std::span<const Message> messages);

/// Distinct neighbours, ignoring weights.
std::map<PersonId, std::int64_t> degree_centrality(const DeveloperNetwork& net);

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 1000;
};

/// Dominant eigenvector of the unweighted adjacency, scaled so the largest
/// entry is 1. Iterates on A + I (same eigenvectors, no oscillation on
/// bipartite graphs) from a uniform start, normalising by the maximum, until
/// the L-infinity change drops below the tolerance. Isolated nodes get 0.
std::map<PersonId, double> eigenvector_centrality(const DeveloperNetwork& net, const PowerIterationOptions& options = {});

/// Local clustering coefficient; nullopt for nodes of degree < 2.
std::map<PersonId, std::optional<double>> clustering_coefficient(const DeveloperNetwork& net);

/// degree * (1 - cc), with an undefined cc treated as 0.
std::map<PersonId, double> hierarchy_score(const DeveloperNetwork& net);

/// The value map a network operationalization thresholds on.
std::map<PersonId, double> network_metric_values(const DeveloperNetwork& net, Metric metric);

}  // namespace devroles
