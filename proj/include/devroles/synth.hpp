#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "devroles/classify.hpp"
#include "devroles/dynamics.hpp"
#include "devroles/network.hpp"
#include "json.hpp"

namespace devroles {

using StochasticMatrix = std::array<std::array<double, kRoleStates>, kRoleStates>;

/// Reference role-transition chain observed for QEMU, rows and columns in
/// RoleState order. Rows sum to 1: the core row is renormalised from 1.01,
/// peripheral->isolated is 0.10, isolated->peripheral is 0.48 and the absent
/// row is uniform.
StochasticMatrix qemu_stability_matrix();

struct PlantSpec {
  int n_devs = 20;
  double core_fraction = 0.2;
  double p_cc = 0.402;
  double p_cp = 0.033;
  double p_pp = 0.0128;
  double zipf_exponent = 1.0;
  StochasticMatrix transitions = qemu_stability_matrix();
  int n_windows = 8;
  std::uint64_t seed = 20160101;

  // Fixture layout.
  int window_days = 90;
  int stride_days = 14;
  UnixTime start = 1420070400;  // 2015-01-01T00:00:00Z
  double peripheral_activity = 0.6;
  int top_commits_per_epoch = 12;
};

/// Throws InputError when a field is out of bounds.
void validate(const PlantSpec& spec);

/// Number of planted core developers: round(n * core_fraction), clamped to [1, n-1].
int planted_core_count(const PlantSpec& spec);

struct PlantedNetwork {
  DeveloperNetwork network;
  /// Ids 0..k-1 are core.
  RoleClassification labels;
};

/// Independent edge draws per block probability; deterministic per seed.
PlantedNetwork generate_block_network(const PlantSpec& spec);

/// count(rank k) = round(1000 / k^s) for k = 1..n (rank-based, not sampled).
std::vector<std::int64_t> generate_zipf_counts(int n, double s);

/// n chains of `steps` states, starting core with probability core_fraction
/// and peripheral otherwise.
std::vector<RoleSequence> generate_role_walks(const StochasticMatrix& transitions, int n, int steps,
                                              double core_fraction, std::uint64_t seed);

/// Two-level hierarchical graph that repeats a 5-clique module: each level
/// makes four copies and wires their outer nodes to the original hub.
DeveloperNetwork generate_hierarchical_network(int levels = 2);

struct Fixture {
  std::string patch_stream;
  std::string mbox;
  nlohmann::json expected;
};

/// Synthetic archives in the git patch-stream and mbox formats plus the
/// planted parameters and the activity summary analyze must reproduce.
Fixture emit_fixture(const PlantSpec& spec);

/// Writes patches.log, list.mbox and expected.json into `dir`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace devroles
