#pragma once

#include <optional>

#include "devroles/classify.hpp"
#include "devroles/network.hpp"

namespace devroles {

struct BlockCount {
  std::int64_t present = 0;
  std::int64_t possible = 0;

  /// present / possible, or nullopt for an empty block.
  std::optional<double> probability() const {
    if (possible == 0) return std::nullopt;
    return static_cast<double>(present) / static_cast<double>(possible);
  }
};

struct BlockProbabilities {
  BlockCount core_core;
  BlockCount core_periph;
  BlockCount periph_periph;

  std::optional<double> p_cc() const { return core_core.probability(); }
  std::optional<double> p_cp() const { return core_periph.probability(); }
  std::optional<double> p_pp() const { return periph_periph.probability(); }
};

/// Binary edge-presence density of each core/periphery block. Every node of
/// the network must carry a label (InputError otherwise).
BlockProbabilities block_probabilities(const DeveloperNetwork& net, const RoleClassification& labels);

/// p_cc > p_cp > p_pp. Throws DegenerateError when a block is empty.
bool check_ordering(const BlockProbabilities& bp);
bool check_ordering(double p_cc, double p_cp, double p_pp);

}  // namespace devroles
