// Command-line front end: analyze, synth and export-graphs.
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "devroles/report.hpp"
#include "devroles/synth.hpp"

using namespace devroles;

namespace {

struct RawArgs {
  std::string vcs, mbox, aliases, ground_truth, out = "out";
  std::string granularity = "function", network = "vcs", range;
};

void add_analysis_options(CLI::App* cmd, RunConfig& cfg, RawArgs& raw) {
  cmd->add_option("--vcs", raw.vcs, "git patch stream (git log -p export) or JSON commit dump");
  cmd->add_option("--mbox", raw.mbox, "mailing-list archive in mbox format");
  cmd->add_option("--aliases", raw.aliases, "CSV of email_or_name,person_key identity overrides");
  cmd->add_option("--ground-truth", raw.ground_truth, "CSV of person_key,role reference labels");
  cmd->add_option("--out", raw.out, "output directory");
  cmd->add_option("--window-days", cfg.window_days, "window length in days");
  cmd->add_option("--stride-days", cfg.stride_days, "window stride in days");
  cmd->add_option("--quantile", cfg.quantile, "core threshold quantile");
  cmd->add_option("--granularity", raw.granularity, "function or file")->check(CLI::IsMember({"function", "file"}));
  cmd->add_flag("--semantic", cfg.semantic, "add semantic coupling edges to the technical network");
  cmd->add_option("--theta", cfg.theta, "cosine threshold for semantic coupling");
  cmd->add_option("--network", raw.network, "network whose degree roles feed the transition model")
      ->check(CLI::IsMember({"vcs", "mail"}));
  cmd->add_option("--range", raw.range, "analysis range START:END as YYYY-MM-DD");
  cmd->add_option("--seed", cfg.seed, "permutation seed");
  cmd->add_option("--permutations", cfg.permutations, "permutation replicates per kappa p-value");
}

void finish_config(RunConfig& cfg, const RawArgs& raw) {
  if (!raw.vcs.empty()) cfg.vcs_path = raw.vcs;
  if (!raw.mbox.empty()) cfg.mbox_path = raw.mbox;
  if (!raw.aliases.empty()) cfg.aliases_path = raw.aliases;
  if (!raw.ground_truth.empty()) cfg.ground_truth_path = raw.ground_truth;
  cfg.output_dir = raw.out;
  cfg.granularity = raw.granularity == "file" ? Granularity::file : Granularity::function;
  cfg.dynamics_network = raw.network == "mail" ? Source::mail : Source::vcs;
  if (!raw.range.empty()) cfg.range = parse_range(raw.range);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Developer role classification over version-control and mailing-list archives"};
  app.require_subcommand(1);

  RunConfig analyze_cfg;
  RawArgs analyze_raw;
  auto* analyze_cmd = app.add_subcommand("analyze", "classify developers and write the report bundle");
  add_analysis_options(analyze_cmd, analyze_cfg, analyze_raw);

  RunConfig export_cfg;
  RawArgs export_raw;
  export_raw.out = "graphs";
  auto* export_cmd = app.add_subcommand("export-graphs", "write per-window GraphML and edge lists");
  add_analysis_options(export_cmd, export_cfg, export_raw);

  PlantSpec spec;
  std::string synth_out = "fixture";
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic fixture with planted structure");
  synth_cmd->add_option("--out", synth_out, "output directory");
  synth_cmd->add_option("--n-devs", spec.n_devs, "number of developers");
  synth_cmd->add_option("--core-fraction", spec.core_fraction, "planted core fraction");
  synth_cmd->add_option("--p-cc", spec.p_cc, "core-core edge probability");
  synth_cmd->add_option("--p-cp", spec.p_cp, "core-peripheral edge probability");
  synth_cmd->add_option("--p-pp", spec.p_pp, "peripheral-peripheral edge probability");
  synth_cmd->add_option("--zipf", spec.zipf_exponent, "Zipf exponent of commit counts");
  synth_cmd->add_option("--windows", spec.n_windows, "number of analysis windows covered");
  synth_cmd->add_option("--seed", spec.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  try {
    if (*analyze_cmd) {
      finish_config(analyze_cfg, analyze_raw);
      return run_analyze(analyze_cfg, std::cerr);
    }
    if (*export_cmd) {
      finish_config(export_cfg, export_raw);
      return run_export_graphs(export_cfg, std::cerr);
    }
    if (*synth_cmd) {
      validate(spec);
      write_fixture(emit_fixture(spec), synth_out);
      return kExitOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
