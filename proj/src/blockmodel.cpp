#include "devroles/blockmodel.hpp"

namespace devroles {

BlockProbabilities block_probabilities(const DeveloperNetwork& net, const RoleClassification& labels) {
  std::int64_t k = 0, m = 0;
  for (auto p : net.nodes) {
    auto it = labels.labels.find(p);
    if (it == labels.labels.end()) throw InputError("block model: node " + std::to_string(p) + " has no role label");
    (it->second == Role::core ? k : m) += 1;
  }
  BlockProbabilities bp;
  bp.core_core.possible = k * (k - 1) / 2;
  bp.core_periph.possible = k * m;
  bp.periph_periph.possible = m * (m - 1) / 2;
  for (const auto& [pair, w] : net.edges) {
    if (w <= 0) continue;
    const bool a = labels.labels.at(pair.first) == Role::core;
    const bool b = labels.labels.at(pair.second) == Role::core;
    if (a && b) ++bp.core_core.present;
    else if (a || b) ++bp.core_periph.present;
    else ++bp.periph_periph.present;
  }
  return bp;
}

bool check_ordering(double p_cc, double p_cp, double p_pp) { return p_cc > p_cp && p_cp > p_pp; }

bool check_ordering(const BlockProbabilities& bp) {
  const auto cc = bp.p_cc(), cp = bp.p_cp(), pp = bp.p_pp();
  if (!cc || !cp || !pp) throw DegenerateError("block model: partition leaves an empty block");
  return check_ordering(*cc, *cp, *pp);
}

}  // namespace devroles
