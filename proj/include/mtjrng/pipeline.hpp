#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mtjrng/config.hpp"
#include "mtjrng/entropy.hpp"
#include "mtjrng/extractor.hpp"
#include "mtjrng/stattests.hpp"

// The four stages behind the command line tool. Each reads its inputs from
// files, writes its artifacts and reports progress on `log`. Errors surface as
// ConfigError (exit 2) or StageError (exit 1).
namespace mtjrng::cli {

struct SimulateResult {
  std::uint64_t bits = 0;
  std::uint64_t rng_seed = 0;
  double v_critical = 0.0;  // after calibration
  double ones_fraction = 0.0;
};

// Calibrates the device to config.switching_target, generates config.bits
// raw bits and writes them with a sidecar. Unset seeds are resolved first.
SimulateResult cmd_simulate(PipelineConfig config, const std::filesystem::path& out,
                            std::ostream& log);

// Writes the entropy report to `out`. Throws InsufficientEntropy (after the
// report is written) when k is zero.
entropy::EntropyReport cmd_estimate(PipelineConfig config, const std::filesystem::path& raw,
                                    const std::filesystem::path& out, std::ostream& log);

struct ExtractSummary {
  extract::ExtractorParams params;  // per chunk when chunked
  std::uint64_t output_bits = 0;
  std::size_t chunks = 1;
  std::size_t discarded_bits = 0;
  double seconds = 0.0;
  double throughput = 0.0;  // output bits per second
  bool seed_from_os = false;
  std::filesystem::path seed_path;
};

// Hashes the raw bits with a Toeplitz matrix sized from the report. The seed
// comes from config.seed_file, or from the OS entropy source with a warning;
// either way it is saved next to `out` as "<out>.seed".
ExtractSummary cmd_extract(PipelineConfig config, const std::filesystem::path& raw,
                           const std::filesystem::path& report, const std::filesystem::path& out,
                           std::ostream& log);

// Writes the aligned table to `out` and key=value results to "<out>.kv".
nist::SuiteReport cmd_test(PipelineConfig config, const std::filesystem::path& bits,
                           const std::filesystem::path& out, std::ostream& log);

struct PipelineSummary {
  PipelineConfig config;  // resolved
  std::optional<SimulateResult> simulate;
  std::optional<entropy::EntropyReport> estimate;
  std::optional<ExtractSummary> extract;
  std::optional<nist::SuiteReport> raw_suite;
  std::optional<nist::SuiteReport> extracted_suite;

  std::string render() const;
};

// Runs every stage into `out_dir`, stopping at the first stage error. With
// `dry_run` only the resolved configuration is printed.
PipelineSummary cmd_pipeline(PipelineConfig config, const std::filesystem::path& out_dir,
                             bool dry_run, std::ostream& log);

}  // namespace mtjrng::cli
