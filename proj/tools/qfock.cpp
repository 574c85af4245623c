#include "qfock/commands.hpp"
#include "qfock/report.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"q-deformed Fock space calculus: verification suites and sweeps"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", expression, spec_path, corrupt;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "configuration file");
    if (needs_config) opt->required();
    sub->add_option("--out", out_dir, "output directory for reports");
    sub->add_option("--seed", seed_value, "seed override")
        ->each([&](const std::string&) { seed_given = true; });
  };

  CLI::App* relations = app.add_subcommand("relations", "commutation relation suite");
  add_common(relations, true);
  relations->add_option("--corrupt", corrupt,
                        "negative control: corrupt one relation by name");

  CLI::App* normal_order = app.add_subcommand("normal-order", "rewrite a word to normal form");
  add_common(normal_order, true);
  normal_order->add_option("expression", expression, "word in the grammar")
      ->required();

  CLI::App* norm_sweep = app.add_subcommand("norm-sweep", "norm bounds over a parameter grid");
  add_common(norm_sweep, true);

  CLI::App* ito = app.add_subcommand("ito", "product-formula refinement study");
  add_common(ito, false);
  ito->add_option("spec", spec_path, "ito spec file")->required();

  CLI::App* moments = app.add_subcommand("moments", "vacuum moments against the pairing oracle");
  add_common(moments, true);

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<std::uint64_t> seed;
    if (seed_given) seed = seed_value;

    qfock::CommandResult result;
    if (relations->parsed())
      result = qfock::run_relations(qfock::parse_config_file(config_path), seed, corrupt);
    else if (normal_order->parsed())
      result = qfock::run_normal_order(qfock::parse_config_file(config_path),
                                       expression, seed);
    else if (norm_sweep->parsed())
      result = qfock::run_norm_sweep(qfock::parse_config_file(config_path), seed);
    else if (ito->parsed())
      result = qfock::run_ito(qfock::parse_config_file(spec_path), seed);
    else if (moments->parsed())
      result = qfock::run_moments(qfock::parse_config_file(config_path), seed);

    qfock::write_outputs(result, out_dir);
    std::cout << result.human;
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
