#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtjrng/config.hpp"
#include "mtjrng/error.hpp"
#include "mtjrng/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;
  std::string out;
  std::string input;
  std::string report;
  bool dry_run = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "flat key = value configuration file");
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--bits", "bits"},          {"--epsilon", "epsilon"},     {"--block-length", "block_length"},
      {"--alpha", "alpha"},        {"--seed-file", "seed_file"}, {"--rng-seed", "rng_seed"},
      {"--format", "format"},      {"--shuffles", "shuffles"},   {"--chunk-bits", "chunk_bits"},
  };
  for (const auto& [flag, key] : flags) {
    cmd->add_option_function<std::string>(
        flag, [&o, key = key](const std::string& v) { o.values[key] = v; }, "sets '" + key + "'");
  }
  cmd->add_option("--set", o.sets, "any configuration key, as key=value");
}

mtjrng::PipelineConfig build_config(const Overrides& o) {
  auto config = o.config.empty() ? mtjrng::PipelineConfig{} : mtjrng::PipelineConfig::load(o.config);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw mtjrng::ConfigError("--set expects key=value, got '" + s + "'");
    config.apply(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [k, v] : o.values) config.apply(k, v);
  config.validate();
  return config;
}

std::string or_default(const std::string& v, const std::string& fallback) {
  return v.empty() ? fallback : v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MTJ random bit generation: simulate, estimate, extract, test"};
  app.require_subcommand(1);

  Overrides o;
  auto* simulate = app.add_subcommand("simulate", "generate raw bits from the MTJ model");
  auto* estimate = app.add_subcommand("estimate", "min-entropy assessment of a bit file");
  auto* extract = app.add_subcommand("extract", "Toeplitz hashing of raw bits");
  auto* test = app.add_subcommand("test", "statistical test suite on a bit file");
  auto* pipeline = app.add_subcommand("pipeline", "all stages end to end");
  for (auto* cmd : {simulate, estimate, extract, test, pipeline}) {
    add_common(cmd, o);
    cmd->add_option("--out", o.out, "output file (directory for pipeline)");
  }
  for (auto* cmd : {estimate, extract, test}) {
    cmd->add_option("input", o.input, "input bit file")->required();
  }
  extract->add_option("--report", o.report, "entropy report from 'estimate'")->required();
  pipeline->add_flag("--dry-run", o.dry_run, "print the resolved configuration and stop");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto config = build_config(o);
    auto& log = std::cout;
    if (simulate->parsed()) {
      mtjrng::cli::cmd_simulate(config, or_default(o.out, "raw.bin"), log);
    } else if (estimate->parsed()) {
      mtjrng::cli::cmd_estimate(config, o.input, or_default(o.out, o.input + ".entropy"), log);
    } else if (extract->parsed()) {
      mtjrng::cli::cmd_extract(config, o.input, o.report, or_default(o.out, "extracted.bin"), log);
    } else if (test->parsed()) {
      mtjrng::cli::cmd_test(config, o.input, or_default(o.out, o.input + ".suite"), log);
    } else if (pipeline->parsed()) {
      mtjrng::cli::cmd_pipeline(config, or_default(o.out, "mtjrng_out"), o.dry_run, log);
    }
  } catch (const mtjrng::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
