#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using flatband::cli::Command;
  CLI::App app{"Flat-band analysis of periodic tight-binding graphs"};
  app.require_subcommand(1);

  Command cmd;
  auto& o = cmd.options;
  std::size_t base = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cmd.input, "graph-spec JSON file")->required();
    sub->add_option("-o,--output", cmd.output, "write the report here instead of stdout");
  };

  for (const auto& verb : flatband::cli::kVerbs) {
    auto* sub = app.add_subcommand(verb);
    add_common(sub);
    if (verb == "bands" || verb == "flatband") sub->add_option("--epsilon", o.epsilon, "hopping scale");
    if (verb == "bands") sub->add_option("--grid", o.grid, "grid points per axis");
    if (verb == "flatband") {
      auto* exact = sub->add_flag("--exact", "exact gcd detector (default)");
      auto* sampled = sub->add_flag("--sampled", o.sampled, "numeric z-sampling detector");
      exact->excludes(sampled);
      sub->add_option("--seed", o.seed, "sampling seed");
      sub->add_option("--samples", o.samples, "sample points per candidate");
    }
    if (verb == "loops" || verb == "series-check" || verb == "extremal" || verb == "certify") {
      sub->add_option("--base", base, "base vertex (1-based)");
    }
    if (verb == "loops" || verb == "series-check") sub->add_option("--order", o.order, "series order");
    if (verb == "probe") {
      sub->add_option("--trials", o.trials, "number of sampled potentials");
      sub->add_option("--seed", o.seed, "sampler seed");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (auto* sub : app.get_subcommands()) cmd.verb = sub->get_name();
  auto* sub = app.get_subcommand(cmd.verb);
  if (sub->get_option_no_throw("--base") && sub->count("--base")) o.base = base;

  if (cmd.output.empty()) return flatband::cli::run(cmd, std::cout, std::cerr);
  std::ostringstream report;
  const int code = flatband::cli::run(cmd, report, std::cerr);
  if (code == 0) {
    std::ofstream file(cmd.output);
    if (!file) {
      std::cerr << "error: ParseError: cannot write '" << cmd.output << "'\n";
      return 2;
    }
    file << report.str();
  }
  return code;
}
