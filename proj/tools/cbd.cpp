// cbd: contextuality analysis of systems of dichotomous random variables.

#include "commands.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"Contextuality-by-Default analysis with exact linear programming"};
  app.require_subcommand(1);

  std::string path;
  std::string out_path;

  auto* validate = app.add_subcommand("validate", "Check a system file against every invariant");
  validate->add_option("file", path, "System file")->required();

  cbd::cli::AnalyzeOptions opts;
  std::vector<std::string> paths;
  auto* analyze = app.add_subcommand("analyze", "Compute delta_max, delta0, the measure and the verdict");
  analyze->add_option("files", paths, "System files")->required();
  analyze->add_flag("--witness", opts.witness, "Print an optimal coupling");
  analyze->add_flag("--json", opts.json, "Emit one canonical JSON document");
  analyze->add_option("--max-slots", opts.max_slots, "Cap on the number of slots K")
      ->check(CLI::Range(1, 30));
  analyze->add_option("--jobs", opts.jobs, "Analyze this many files concurrently")
      ->check(CLI::PositiveNumber);

  std::size_t max_slots = cbd::kDefaultMaxSlots;
  auto* criterion = app.add_subcommand("criterion", "Closed-form test for rank-3 cyclic systems");
  criterion->add_option("file", path, "System file")->required();
  criterion->add_option("--max-slots", max_slots, "Cap on the number of slots K")
      ->check(CLI::Range(1, 30));

  auto* extract = app.add_subcommand("extract-hv", "Write a hidden-variable model for a noncontextual system");
  extract->add_option("file", path, "System file")->required();
  extract->add_option("-o,--out", out_path, "Output file (default: stdout)");
  extract->add_option("--max-slots", max_slots, "Cap on the number of slots K")
      ->check(CLI::Range(1, 30));

  std::string layout;
  auto* simulate = app.add_subcommand("simulate", "Push a hidden-variable model forward into a system file");
  simulate->add_option("model", path, "Hidden-variable model file")->required();
  simulate->add_option("--layout", layout, "Contexts as c1=q1,q2;c2=q2,q3 (default: the file's layout)");
  simulate->add_option("-o,--out", out_path, "Output file (default: stdout)");

  auto* canonical = app.add_subcommand("canonicalize", "Rewrite a system file in canonical form");
  canonical->add_option("file", path, "System file")->required();
  canonical->add_option("-o,--out", out_path, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  using namespace cbd::cli;
  if (*validate) return cmd_validate(path, std::cout, std::cerr);
  if (*analyze) return cmd_analyze(paths, opts, std::cout, std::cerr);
  if (*criterion) return cmd_criterion(path, max_slots, std::cout, std::cerr);
  if (*extract) return cmd_extract_hv(path, out_path, max_slots, std::cout, std::cerr);
  if (*simulate) return cmd_simulate(path, layout, out_path, std::cout, std::cerr);
  if (*canonical) return cmd_canonicalize(path, out_path, std::cout, std::cerr);
  return 0;
}
