#include "mtjrng/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "mtjrng/bit_io.hpp"
#include "mtjrng/digest.hpp"
#include "mtjrng/error.hpp"

namespace mtjrng::cli {
namespace fs = std::filesystem;

namespace {

std::string num(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  return fs::path(p.string() + suffix);
}

void ensure_parent(const fs::path& p) {
  const auto parent = p.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw StageError("cannot create directory " + parent.string() + ": " + ec.message());
}

BitString os_random_bits(std::size_t n) {
  std::random_device rd;
  BitString out(n, false);
  for (std::size_t i = 0; i < n; i += 32) {
    const std::uint32_t w = rd();
    for (std::size_t b = 0; b < 32 && i + b < n; ++b) out.set(i + b, (w >> b) & 1u);
  }
  return out;
}

entropy::AssessOptions assess_options(const PipelineConfig& c) {
  entropy::AssessOptions opt;
  opt.permutation.n_shuffles = c.shuffles;
  opt.permutation.seed = c.permutation_seed.value_or(0);
  opt.permutation.max_bits = c.permutation_max_bits;
  return opt;
}

}  // namespace

SimulateResult cmd_simulate(PipelineConfig config, const fs::path& out, std::ostream& log) {
  config.validate();
  config.resolve_seeds();
  const auto device = mtj::calibrate(config.device, config.cycle, config.switching_target);
  log << "simulate: v_critical calibrated to " << num(device.v_critical, "%.6f")
      << " mV for P_sw = " << config.switching_target << '\n';

  const BitString bits =
      mtj::generate_raw(config.bits, config.cycle, device, config.noise, *config.rng_seed);

  SimulateResult result;
  result.bits = bits.size();
  result.rng_seed = *config.rng_seed;
  result.v_critical = device.v_critical;
  result.ones_fraction = static_cast<double>(bits.count_ones()) / static_cast<double>(bits.size());

  ensure_parent(out);
  io::write_bit_file(out, bits, config.format,
                     {{"config_digest", config.digest()},
                      {"rng_seed", std::to_string(result.rng_seed)},
                      {"v_critical", num(device.v_critical)},
                      {"stage", "simulate"}});
  log << "simulate: wrote " << result.bits << " bits to " << out.string()
      << " (rng_seed = " << result.rng_seed << ", ones fraction "
      << num(result.ones_fraction, "%.6f") << ")\n";
  return result;
}

entropy::EntropyReport cmd_estimate(PipelineConfig config, const fs::path& raw, const fs::path& out,
                                    std::ostream& log) {
  config.validate();
  config.resolve_seeds();
  const BitString bits = io::load_bits(raw);
  if (bits.size() < 2) throw StageError("estimate needs at least 2 bits, got " + std::to_string(bits.size()));

  log << "estimate: " << bits.size() << " bits, permutation test with " << config.shuffles
      << " shuffles (permutation_seed = " << *config.permutation_seed << ")\n";
  auto report = entropy::assess(bits, assess_options(config));

  ensure_parent(out);
  io::write_text(out, entropy::render_report(report));
  log << "estimate: h_min = " << num(report.h_min_per_bit, "%.6f") << " bits/bit, k = "
      << report.k_extractable << ", verdict "
      << (report.iid_verdict == entropy::Verdict::iid ? "IID" : "non-IID") << '\n';
  for (const auto& w : report.warnings) log << "warning: " << w << '\n';
  if (report.k_extractable == 0) {
    throw InsufficientEntropy("insufficient entropy: k = 0 for " + std::to_string(bits.size()) +
                              " bits; nothing can be extracted");
  }
  return report;
}

ExtractSummary cmd_extract(PipelineConfig config, const fs::path& raw, const fs::path& report_path,
                           const fs::path& out, std::ostream& log) {
  config.validate();
  const BitString x = io::load_bits(raw);
  const auto report = entropy::parse_report(io::read_text(report_path));
  if (report.n_bits != x.size()) {
    throw StageError("entropy report covers " + std::to_string(report.n_bits) +
                     " bits but the raw file holds " + std::to_string(x.size()));
  }
  if (report.k_extractable == 0) {
    throw InsufficientEntropy("insufficient entropy: the report gives k = 0");
  }

  ExtractSummary summary;
  const bool chunked = config.chunk_bits != 0 && config.chunk_bits < x.size();
  try {
    summary.params = chunked
                         ? extract::chunk_params(config.chunk_bits, report.h_min_per_bit, config.epsilon)
                         : extract::ExtractorParams::derive(x.size(), report.k_extractable,
                                                            config.epsilon);
  } catch (const InsufficientEntropy& e) {
    throw InsufficientEntropy(std::string(e.what()) + "; raise epsilon, supply more raw bits" +
                              (chunked ? " or use larger chunks" : ""));
  }
  const auto& p = summary.params;

  BitString seed_bits;
  if (config.seed_file) {
    seed_bits = io::load_seed_file(*config.seed_file);
    if (seed_bits.size() < p.r) {
      throw ConfigError("seed file " + config.seed_file->string() + " holds " +
                        std::to_string(seed_bits.size()) + " bits; n + m - 1 = " +
                        std::to_string(p.r) + " are needed");
    }
    if (seed_bits.size() > p.r) {
      log << "extract: using the first " << p.r << " of " << seed_bits.size() << " seed bits\n";
      seed_bits = seed_bits.slice(0, p.r);
    }
  } else {
    log << "warning: no seed_file given; drawing the Toeplitz seed from the OS entropy source. "
           "The security of the output then rests on that source.\n";
    seed_bits = os_random_bits(p.r);
    summary.seed_from_os = true;
  }

  const auto t0 = std::chrono::steady_clock::now();
  BitString output;
  std::string input_digest, seed_digest;
  if (chunked) {
    auto r = extract::extract_chunked(x, seed_bits, config.chunk_bits, report.h_min_per_bit,
                                      config.epsilon);
    output = std::move(r.output);
    summary.chunks = r.chunks;
    summary.discarded_bits = r.discarded_bits;
    input_digest = r.input_digest;
    seed_digest = r.seed_digest;
  } else {
    auto r = extract::extract(x, extract::ToeplitzSeed(seed_bits, p.n, p.m), p);
    output = std::move(r.output);
    input_digest = r.input_digest;
    seed_digest = r.seed_digest;
  }
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  summary.output_bits = output.size();
  summary.throughput = summary.seconds > 0 ? static_cast<double>(output.size()) / summary.seconds : 0.0;

  ensure_parent(out);
  summary.seed_path = with_suffix(out, ".seed");
  io::write_bit_file(summary.seed_path, seed_bits, io::Format::packed,
                     {{"stage", "extract-seed"}, {"source", summary.seed_from_os ? "os" : "file"}});

  io::ExtractionHeader header;
  header.fields = {
      {"n", std::to_string(p.n)},
      {"k", std::to_string(p.k)},
      {"m", std::to_string(p.m)},
      {"r", std::to_string(p.r)},
      {"epsilon", config.epsilon.text()},
      {"h_min_per_bit", num(report.h_min_per_bit)},
      {"chunk_bits", std::to_string(chunked ? config.chunk_bits : 0)},
      {"chunks", std::to_string(summary.chunks)},
      {"discarded_bits", std::to_string(summary.discarded_bits)},
      {"input_digest", input_digest},
      {"seed_digest", seed_digest},
      {"output_digest", digest(output)},
      {"seed_source", summary.seed_from_os ? "os" : config.seed_file->string()},
      {"config_digest", config.digest()},
  };
  io::write_extraction_file(out, header, output);

  log << "extract: n = " << p.n << ", k = " << p.k << ", m = " << p.m << ", epsilon = "
      << config.epsilon.text();
  if (chunked) log << " (per chunk; " << summary.chunks << " chunks, " << summary.discarded_bits << " bits discarded)";
  log << '\n'
      << "extract: " << summary.output_bits << " bits in " << num(summary.seconds, "%.3f")
      << " s, throughput " << num(summary.throughput / 1e6, "%.4f") << " Mbit/s\n"
      << "extract: wrote " << out.string() << ", seed saved to " << summary.seed_path.string()
      << '\n';
  return summary;
}

nist::SuiteReport cmd_test(PipelineConfig config, const fs::path& bits_path, const fs::path& out,
                           std::ostream& log) {
  config.validate();
  const BitString bits = io::load_bits(bits_path);
  auto report = nist::run_suite(bits, config.block_length, config.alpha);
  ensure_parent(out);
  const std::string table = nist::render_table(report);
  io::write_text(out, table);
  io::write_text(with_suffix(out, ".kv"), nist::render_machine(report));
  log << table;
  return report;
}

std::string PipelineSummary::render() const {
  std::ostringstream s;
  s << "pipeline summary\n";
  if (simulate) {
    s << "  raw bits:        " << simulate->bits << " (ones fraction "
      << num(simulate->ones_fraction, "%.6f") << ")\n";
  }
  if (estimate) {
    s << "  min-entropy:     " << num(estimate->h_min_per_bit, "%.6f") << " bits/bit ("
      << (estimate->iid_verdict == entropy::Verdict::iid ? "IID" : "non-IID") << ")\n"
      << "  k:               " << estimate->k_extractable << '\n';
  }
  if (extract) {
    s << "  n, m, epsilon:   " << extract->params.n << ", " << extract->params.m << ", "
      << extract->params.epsilon.text() << '\n'
      << "  extracted bits:  " << extract->output_bits << '\n'
      << "  throughput:      " << num(extract->throughput / 1e6, "%.4f") << " Mbit/s\n";
  }
  if (raw_suite || extracted_suite) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-26s %-8s %-8s\n", "test", "raw", "extracted");
    s << line;
    auto verdict = [](const std::optional<nist::SuiteReport>& r, nist::TestId id) -> std::string {
      if (!r) return "-";
      const auto& t = r->result(id);
      if (t.skipped) return "SKIPPED";
      return t.pass ? "PASS" : "FAIL";
    };
    for (auto id : nist::all_tests()) {
      std::snprintf(line, sizeof line, "  %-26s %-8s %-8s\n", std::string(nist::test_name(id)).c_str(),
                    verdict(raw_suite, id).c_str(), verdict(extracted_suite, id).c_str());
      s << line;
    }
    std::snprintf(line, sizeof line, "  %-26s %-8s %-8s\n", "overall",
                  raw_suite ? (raw_suite->overall_pass ? "PASS" : "FAIL") : "-",
                  extracted_suite ? (extracted_suite->overall_pass ? "PASS" : "FAIL") : "-");
    s << line;
  }
  return s.str();
}

PipelineSummary cmd_pipeline(PipelineConfig config, const fs::path& out_dir, bool dry_run,
                             std::ostream& log) {
  config.validate();
  config.resolve_seeds();
  PipelineSummary summary;
  summary.config = config;
  if (dry_run) {
    log << config.render();
    return summary;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw StageError("cannot create " + out_dir.string() + ": " + ec.message());
  io::write_text(out_dir / "config.resolved", config.render());

  const auto raw = out_dir / "raw.bin";
  const auto report = out_dir / "raw.entropy";
  const auto extracted = out_dir / "extracted.bin";

  summary.simulate = cmd_simulate(config, raw, log);
  summary.estimate = cmd_estimate(config, raw, report, log);
  summary.extract = cmd_extract(config, raw, report, extracted, log);
  summary.raw_suite = cmd_test(config, raw, out_dir / "raw.suite", log);
  summary.extracted_suite = cmd_test(config, extracted, out_dir / "extracted.suite", log);

  const std::string text = summary.render();
  io::write_text(out_dir / "summary.txt", text);
  log << text;
  return summary;
}

}  // namespace mtjrng::cli
