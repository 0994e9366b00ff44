#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "devroles/classify.hpp"
#include "devroles/common.hpp"
#include "json.hpp"

namespace devroles {

enum class RoleState : std::uint8_t { core = 0, peripheral = 1, isolated = 2, absent = 3 };
inline constexpr std::size_t kRoleStates = 4;

std::string_view to_string(RoleState s);

struct RoleSequence {
  PersonId person = 0;
  std::vector<RoleState> states;
};

/// Derives per-person state sequences from one degree classification per
/// window (in window order). A person's sequence starts at the first window
/// where they are active and runs to the last window: absent when not in the
/// classification, isolated when degree is 0, otherwise the degree label.
std::vector<RoleSequence> role_sequences(std::span<const RoleClassification> degree_by_window);

struct TransitionMatrix {
  std::array<std::array<std::int64_t, kRoleStates>, kRoleStates> counts{};
  /// Row i is nullopt when no transition out of state i was observed.
  std::array<std::optional<std::array<double, kRoleStates>>, kRoleStates> probs{};

  nlohmann::json to_json() const;
};

/// Maximum-likelihood estimate: transition counts normalised per row.
/// Throws InputError if no sequence has at least two states.
TransitionMatrix estimate_transition_matrix(std::span<const RoleSequence> sequences);

}  // namespace devroles
