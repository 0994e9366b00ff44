#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "devroles/common.hpp"
#include "devroles/identity.hpp"
#include "devroles/mail.hpp"
#include "devroles/timewin.hpp"
#include "devroles/vcs.hpp"

namespace devroles {

enum class NetworkKind : std::uint8_t { technical, communication };

constexpr std::string_view to_string(NetworkKind k) {
  return k == NetworkKind::technical ? "technical" : "communication";
}

using PersonPair = std::pair<PersonId, PersonId>;

/// Undirected weighted developer graph for one analysis window. Pairs are
/// stored with first < second; self-loops are never stored.
struct DeveloperNetwork {
  int window = 0;
  NetworkKind kind = NetworkKind::technical;
  std::set<PersonId> nodes;
  std::map<PersonPair, std::int64_t> edges;

  void add_node(PersonId p) { nodes.insert(p); }
  /// Adds `w` to the {a, b} weight and inserts both endpoints. Ignores a == b.
  void add_edge(PersonId a, PersonId b, std::int64_t w = 1);
  std::int64_t weight(PersonId a, PersonId b) const;
  bool has_edge(PersonId a, PersonId b) const { return weight(a, b) > 0; }
};

/// Compact adjacency view used by the centrality and block computations.
/// Node i corresponds to ids[i]; neighbour lists are sorted.
struct Adjacency {
  std::vector<PersonId> ids;
  std::vector<std::vector<std::size_t>> neighbours;

  explicit Adjacency(const DeveloperNetwork& net);
  std::size_t size() const { return ids.size(); }
};

/// Thread co-participation: each (earlier, later) message pair with distinct
/// authors inside a thread adds 1 to that author pair. Only messages inside
/// the window count.
DeveloperNetwork build_communication_network(std::span<const Message> messages, std::span<const Thread> threads,
                                             const AnalysisWindow& w);

struct TechnicalNetworkOptions {
  Granularity granularity = Granularity::function;
  bool semantic = false;
  double theta = 0.7;
  std::size_t max_bag_tokens = 10000;
};

/// Co-editing: every entity touched by two or more authors in the window adds
/// 1 per shared entity to each author pair. With semantic coupling enabled,
/// each coupled entity pair connects the two author sets (+1 per pair).
DeveloperNetwork build_technical_network(std::span<const Commit> commits, const AnalysisWindow& w,
                                         const TechnicalNetworkOptions& options = {});

double cosine_similarity(const TokenBag& a, const TokenBag& b);

/// Keeps the `limit` most frequent tokens, ties broken lexicographically.
TokenBag truncate_bag(const TokenBag& bag, std::size_t limit);

/// Entity pairs (first < second) whose term-frequency cosine is >= theta.
/// Candidates come from a token inverted index, so pairs sharing no token are
/// never scored.
std::vector<std::pair<std::string, std::string>> semantic_coupling(const std::map<std::string, TokenBag>& bags,
                                                                   double theta);

void write_graphml(std::ostream& out, const DeveloperNetwork& net, const IdentityRegistry& registry);
/// `source,target,weight` with person keys, sorted by key pair.
void write_edge_list(std::ostream& out, const DeveloperNetwork& net, const IdentityRegistry& registry);

}  // namespace devroles
