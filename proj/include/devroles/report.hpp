#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "devroles/agreement.hpp"
#include "devroles/blockmodel.hpp"
#include "devroles/classify.hpp"
#include "devroles/dynamics.hpp"
#include "devroles/identity.hpp"
#include "devroles/mail.hpp"
#include "devroles/network.hpp"
#include "devroles/timewin.hpp"
#include "devroles/vcs.hpp"
#include "json.hpp"

namespace devroles {

inline constexpr std::uint64_t kDefaultSeed = 20160101;

enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitDegenerate = 3 };

struct RunConfig {
  std::optional<std::filesystem::path> vcs_path;     // patch stream, or a .json commit dump
  std::optional<std::filesystem::path> mbox_path;
  std::optional<std::filesystem::path> aliases_path;
  std::optional<std::filesystem::path> ground_truth_path;
  std::filesystem::path output_dir = "out";

  int window_days = 90;
  int stride_days = 14;
  double quantile = kDefaultQuantile;
  Granularity granularity = Granularity::function;
  bool semantic = false;
  double theta = 0.7;
  Source dynamics_network = Source::vcs;
  std::optional<TimeRange> range;
  std::uint64_t seed = kDefaultSeed;
  int permutations = kDefaultPermutations;
  bool write_graphs = true;
};

/// Throws InputError for out-of-bounds parameters: window and stride in
/// [1, 3650] days with stride <= window, quantile in [0.5, 1), theta in
/// (0, 1], permutations in [0, 1000000].
void validate(const RunConfig& config);

struct WindowAnalysis {
  AnalysisWindow window;
  std::size_t n_commits = 0;
  std::size_t n_messages = 0;
  DeveloperNetwork technical;
  DeveloperNetwork communication;
  /// Indexed like all_operationalizations().
  std::vector<RoleClassification> classifications;
  BlockProbabilities block_technical;
  BlockProbabilities block_communication;
  CorrelationResult hierarchy_technical;
  CorrelationResult hierarchy_communication;
};

struct PairAgreement {
  Operationalization a;
  Operationalization b;
  /// One entry per window; nullopt where skipped.
  std::vector<std::optional<KappaResult>> per_window;
  std::optional<KappaSeries> series;  // present with >= 4 windows
  std::optional<double> mean_kappa;
};

struct Analysis {
  RunConfig config;
  Warnings warnings;
  std::vector<std::string> flags;
  bool have_vcs = false;
  bool have_mail = false;
  std::vector<Commit> commits;
  std::vector<Message> messages;
  std::vector<Thread> threads;
  IdentityRegistry registry;
  TimeRange range;
  std::vector<WindowAnalysis> windows;
  std::vector<PairAgreement> agreements;
  std::optional<TransitionMatrix> transitions;
  std::size_t n_sequences = 0;
  std::optional<GroundTruth> ground_truth;

  bool any_meaningful_kappa() const;
  /// Persons, per-window activity counts and count-based core sets, keyed by
  /// person key. Compared against a fixture's expected.json "activity".
  nlohmann::json activity_summary() const;
};

/// Loads inputs, resolves identities and runs every per-window analysis.
/// Throws InputError (and ParseError) for unusable inputs.
Analysis analyze(const RunConfig& config);

/// Writes the report bundle into config.output_dir.
void write_reports(const Analysis& analysis, int exit_code);
void write_graphs(const Analysis& analysis, const std::filesystem::path& dir);

/// CLI entry points. Return the process exit code; diagnostics go to `err`.
int run_analyze(const RunConfig& config, std::ostream& err);
int run_export_graphs(const RunConfig& config, std::ostream& err);

}  // namespace devroles
