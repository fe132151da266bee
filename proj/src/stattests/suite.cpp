#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>

#include "mtjrng/error.hpp"
#include "mtjrng/stattests.hpp"

namespace mtjrng::nist {
namespace {

const char* variant_label(TestId id, std::size_t index) {
  if (id == TestId::cumulative_sums) return index == 0 ? "forward" : "backward";
  if (id == TestId::serial) return index == 0 ? "del1" : "del2";
  return "";
}

void finalize(TestResult& result, double alpha, double threshold) {
  result.pass = !result.variants.empty();
  result.proportion = 1.0;
  result.pvalue_t = 1.0;
  for (auto& v : result.variants) {
    const auto passed = std::count_if(v.pvalues.begin(), v.pvalues.end(),
                                      [alpha](double p) { return p >= alpha; });
    v.proportion = static_cast<double>(passed) / static_cast<double>(v.pvalues.size());
    v.pvalue_t = pvalue_uniformity(v.pvalues);
    v.pass = v.pvalue_t >= kUniformityThreshold && v.proportion >= threshold;
    result.proportion = std::min(result.proportion, v.proportion);
    result.pvalue_t = std::min(result.pvalue_t, v.pvalue_t);
    result.pass = result.pass && v.pass;
  }
}

TestResult skipped(TestId id) {
  TestResult r{id, {}, 0.0, 0.0, true, false};
  return r;
}

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

const TestResult& SuiteReport::result(TestId id) const {
  for (const auto& r : results) {
    if (r.id == id) return r;
  }
  throw ConfigError("suite report has no result for " + std::string(test_name(id)));
}

SuiteReport run_suite(const BitString& bits, std::size_t block_length, double alpha,
                      const TestParams& params) {
  if (block_length == 0) throw ConfigError("block length must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  SuiteReport report;
  report.block_length = block_length;
  report.alpha = alpha;
  report.n_blocks = bits.size() / block_length;
  report.discarded_bits = bits.size() - report.n_blocks * block_length;
  if (report.n_blocks < 2) {
    throw StageError("statistical suite needs at least 2 blocks of " +
                     std::to_string(block_length) + " bits; input has " +
                     std::to_string(bits.size()) + " bits");
  }
  if (report.n_blocks < 55) {
    report.warnings.push_back("only " + std::to_string(report.n_blocks) +
                              " blocks; the P-value uniformity check wants at least 55");
  }
  report.threshold = proportion_threshold(alpha, report.n_blocks);
  for (const auto id : all_tests()) {
    const auto need = minimum_length(id, params);
    if (block_length < need) {
      throw ConfigError(std::string(test_name(id)) + " test needs blocks of at least " +
                        std::to_string(need) + " bits");
    }
  }

  std::vector<TestResult> results;
  for (const auto id : all_tests()) {
    results.push_back(TestResult{id, {}, 0.0, 0.0, false, false});
  }
  auto& runs = results[static_cast<std::size_t>(TestId::runs)];
  auto& apen = results[static_cast<std::size_t>(TestId::approximate_entropy)];

  for (std::size_t b = 0; b < report.n_blocks; ++b) {
    const BitString block = bits.slice(b * block_length, block_length);
    bool frequency_failed = false;
    for (auto& r : results) {
      std::vector<double> pvalues;
      if (r.id == TestId::runs && frequency_failed) {
        pvalues = {0.0};  // prerequisite failed on this block
      } else {
        pvalues = run_test(r.id, block, params);
      }
      if (r.id == TestId::frequency) frequency_failed = pvalues[0] < alpha;
      if (r.variants.empty()) {
        for (std::size_t v = 0; v < pvalues.size(); ++v) {
          r.variants.push_back({variant_label(r.id, v), {}, 0.0, 0.0, false});
        }
      }
      for (std::size_t v = 0; v < pvalues.size(); ++v) r.variants[v].pvalues.push_back(pvalues[v]);
    }
  }
  for (auto& r : results) finalize(r, alpha, report.threshold);

  // A failed prerequisite test turns its dependant into a skipped failure.
  if (!results[static_cast<std::size_t>(TestId::frequency)].pass) runs = skipped(TestId::runs);
  if (!results[static_cast<std::size_t>(TestId::serial)].pass) {
    apen = skipped(TestId::approximate_entropy);
  }

  report.results = std::move(results);
  report.overall_pass = std::all_of(report.results.begin(), report.results.end(),
                                    [](const TestResult& r) { return r.pass; });
  return report;
}

std::string render_table(const SuiteReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-22s %-9s %-11s %s\n", "Statistical test", "P-value",
                "Proportion", "Result");
  out << line;
  for (const auto& r : report.results) {
    const std::string name(test_name(r.id));
    if (r.skipped) {
      std::snprintf(line, sizeof line, "%-22s %-9s %-11s %s\n", name.c_str(), "-", "-",
                    "Skipped (prerequisite failed)");
    } else {
      std::snprintf(line, sizeof line, "%-22s %-9s %-11s %s\n", name.c_str(),
                    fmt(floor4(r.pvalue_t)).c_str(), fmt(floor4(r.proportion)).c_str(),
                    r.pass ? "Success" : "Failure");
    }
    out << line;
  }
  out << "blocks: " << report.n_blocks << " x " << report.block_length
      << " bits, alpha = " << report.alpha << ", proportion threshold = "
      << fmt(floor4(report.threshold)) << '\n'
      << "overall: " << (report.overall_pass ? "PASS" : "FAIL") << '\n';
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string render_machine(const SuiteReport& report) {
  std::ostringstream out;
  out << "block_length=" << report.block_length << '\n'
      << "n_blocks=" << report.n_blocks << '\n'
      << "discarded_bits=" << report.discarded_bits << '\n'
      << "alpha=" << fmt(report.alpha, "%.17g") << '\n'
      << "proportion_threshold=" << fmt(report.threshold, "%.17g") << '\n';
  for (const auto& r : report.results) {
    const std::string key = "test." + std::string(test_name(r.id));
    out << key << ".skipped=" << (r.skipped ? "true" : "false") << '\n'
        << key << ".pvalue_t=" << fmt(r.pvalue_t, "%.17g") << '\n'
        << key << ".proportion=" << fmt(r.proportion, "%.17g") << '\n'
        << key << ".pass=" << (r.pass ? "true" : "false") << '\n';
    for (const auto& v : r.variants) {
      if (v.label.empty()) continue;
      out << key << '.' << v.label << ".pvalue_t=" << fmt(v.pvalue_t, "%.17g") << '\n'
          << key << '.' << v.label << ".proportion=" << fmt(v.proportion, "%.17g") << '\n';
    }
  }
  out << "overall_pass=" << (report.overall_pass ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace mtjrng::nist
