// souq: uncertainty measures for second-order distributions.
//
//   souq measure --inline '{"type":"dirichlet","alpha":[1,1,1]}' --seed 7 --normalize
//   souq compare --input batch.json --measures distance,entropy,cross_entropy --seed 7
//   souq axioms --measures distance --trials 1000 --seed 42
//   souq figure --seed 1 --out fig/

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "souq/app.hpp"

namespace {

void add_input_flags(CLI::App* cmd, souq::RunConfig& cfg) {
  cmd->add_option("--input", cfg.input_path, "JSON file with one or more distributions");
  cmd->add_option("--inline", cfg.inline_spec, "Distribution JSON given on the command line");
}

void add_common_flags(CLI::App* cmd, souq::RunConfig& cfg) {
  cmd->add_option("--measures", cfg.measures, "Families: distance, entropy, cross_entropy")
      ->delimiter(',');
  cmd->add_option("--samples", cfg.samples, "Monte-Carlo sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Seed for all Monte-Carlo estimates");
  cmd->add_option("--tol", cfg.tol, "Solver tolerance (axioms: exact-path tolerance)")
      ->check(CLI::PositiveNumber);
  const std::map<std::string, souq::OutputFormat> formats{{"json", souq::OutputFormat::json},
                                                          {"csv", souq::OutputFormat::csv}};
  cmd->add_option("--format", cfg.format, "Output format: json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  cmd->add_option("--out", cfg.out_path, "Output file (figure: output directory)");
}

}  // namespace

int main(int argc, char** argv) {
  souq::RunConfig cfg;
  CLI::App app{"Wasserstein-based uncertainty measures for second-order distributions"};
  app.require_subcommand(1);

  auto* measure = app.add_subcommand("measure", "Compute TU, AU and EU for each input");
  add_input_flags(measure, cfg);
  add_common_flags(measure, cfg);
  measure->add_flag("--normalize", cfg.normalize, "Scale distance measures by K/(K-1)");

  auto* compare = app.add_subcommand("compare", "Tabulate several measure families side by side");
  add_input_flags(compare, cfg);
  add_common_flags(compare, cfg);
  compare->add_flag("--normalize", cfg.normalize, "Scale distance measures by K/(K-1)");

  auto* axioms = app.add_subcommand("axioms", "Run the axiom suite for each family");
  add_common_flags(axioms, cfg);
  axioms->add_option("--trials", cfg.trials, "Trials per axiom");

  auto* figure = app.add_subcommand("figure", "Write Dirichlet density grids and normalized measures");
  add_common_flags(figure, cfg);
  figure->add_option("--panels", cfg.panels, "JSON array of alpha vectors, inline or as a file path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? souq::kExitOk : souq::kExitConfigError;
  }

  if (*measure) cfg.command = souq::Command::measure;
  if (*compare) cfg.command = souq::Command::compare;
  if (*axioms) cfg.command = souq::Command::axioms;
  if (*figure) cfg.command = souq::Command::figure;
  return souq::run(cfg, std::cout, std::cerr);
}
