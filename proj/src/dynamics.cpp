#include "devroles/dynamics.hpp"

#include <map>

namespace devroles {

std::string_view to_string(RoleState s) {
  switch (s) {
    case RoleState::core: return "core";
    case RoleState::peripheral: return "peripheral";
    case RoleState::isolated: return "isolated";
    case RoleState::absent: return "absent";
  }
  return "unknown";
}

std::vector<RoleSequence> role_sequences(std::span<const RoleClassification> degree_by_window) {
  std::map<PersonId, RoleSequence> seqs;
  for (std::size_t w = 0; w < degree_by_window.size(); ++w) {
    const auto& cls = degree_by_window[w];
    for (auto& [person, seq] : seqs) {
      if (!cls.labels.contains(person)) seq.states.push_back(RoleState::absent);
    }
    for (const auto& [person, label] : cls.labels) {
      auto& seq = seqs[person];
      seq.person = person;
      const auto deg = cls.values.find(person);
      if (deg != cls.values.end() && deg->second == 0.0) {
        seq.states.push_back(RoleState::isolated);
      } else {
        seq.states.push_back(label == Role::core ? RoleState::core : RoleState::peripheral);
      }
    }
  }
  std::vector<RoleSequence> out;
  out.reserve(seqs.size());
  for (auto& [p, s] : seqs) out.push_back(std::move(s));
  return out;
}

TransitionMatrix estimate_transition_matrix(std::span<const RoleSequence> sequences) {
  TransitionMatrix tm;
  bool any = false;
  for (const auto& seq : sequences) {
    if (seq.states.size() < 2) continue;
    any = true;
    for (std::size_t t = 1; t < seq.states.size(); ++t) {
      ++tm.counts[static_cast<std::size_t>(seq.states[t - 1])][static_cast<std::size_t>(seq.states[t])];
    }
  }
  if (!any) throw InputError("transition estimate needs a role sequence spanning at least two windows");
  for (std::size_t i = 0; i < kRoleStates; ++i) {
    std::int64_t total = 0;
    for (auto c : tm.counts[i]) total += c;
    if (total == 0) continue;
    std::array<double, kRoleStates> row{};
    for (std::size_t j = 0; j < kRoleStates; ++j) {
      row[j] = static_cast<double>(tm.counts[i][j]) / static_cast<double>(total);
    }
    tm.probs[i] = row;
  }
  return tm;
}

nlohmann::json TransitionMatrix::to_json() const {
  nlohmann::json states = nlohmann::json::array();
  for (std::size_t i = 0; i < kRoleStates; ++i) states.push_back(to_string(static_cast<RoleState>(i)));
  nlohmann::json c = nlohmann::json::array();
  nlohmann::json p = nlohmann::json::array();
  for (std::size_t i = 0; i < kRoleStates; ++i) {
    c.push_back(counts[i]);
    if (probs[i]) p.push_back(*probs[i]);
    else p.push_back(nullptr);
  }
  return {{"states", states}, {"counts", c}, {"probs", p}};
}

}  // namespace devroles
