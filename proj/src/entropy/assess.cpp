#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>

#include "mtjrng/entropy.hpp"
#include "mtjrng/error.hpp"

namespace mtjrng::entropy {

EntropyReport assess(const BitString& bits, const AssessOptions& options) {
  EntropyReport report;
  report.n_bits = bits.size();
  if (bits.size() < options.recommended_bits) {
    report.warnings.push_back("only " + std::to_string(bits.size()) + " bits; at least " +
                              std::to_string(options.recommended_bits) + " are recommended");
  }
  if (bits.size() >= kChiSquareMinBits) {
    report.chi_square = chi_square_independence(bits, kChiSquareMinBits);
  } else {
    report.warnings.push_back("too few bits for the chi-square test; source treated as non-IID");
  }
  if (bits.size() >= 16) {
    report.permutation = permutation_test(bits, options.permutation);
  } else {
    report.warnings.push_back("too few bits for the permutation test; source treated as non-IID");
  }
  report.iid_verdict =
      report.chi_square.pass && report.permutation.pass ? Verdict::iid : Verdict::non_iid;

  const double mcv = mcv_estimate(bits);
  report.estimator_details.emplace_back("mcv", mcv);
  report.h_min_per_bit = mcv;
  if (report.iid_verdict == Verdict::non_iid) {
    const double markov = markov_estimate(bits);
    report.estimator_details.emplace_back("markov", markov);
    report.h_min_per_bit = std::min(mcv, markov);
  }
  report.k_extractable = extractable_bits(report.n_bits, report.h_min_per_bit);
  return report;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_report(const EntropyReport& report) {
  std::ostringstream out;
  out << "n_bits: " << report.n_bits << '\n'
      << "h_min_per_bit: " << fmt_double(report.h_min_per_bit) << '\n'
      << "k_extractable: " << report.k_extractable << '\n'
      << "iid_verdict: " << (report.iid_verdict == Verdict::iid ? "iid" : "non_iid") << '\n';
  for (const auto& [name, value] : report.estimator_details) {
    out << "estimator." << name << ": " << fmt_double(value) << '\n';
  }
  const auto& chi = report.chi_square;
  out << "chi_square.tuple_length: " << chi.tuple_length << '\n'
      << "chi_square.statistic: " << fmt_double(chi.statistic) << '\n'
      << "chi_square.degrees_of_freedom: " << chi.degrees_of_freedom << '\n'
      << "chi_square.critical_value: " << fmt_double(chi.critical_value) << '\n'
      << "chi_square.pass: " << (chi.pass ? "true" : "false") << '\n';
  const auto& perm = report.permutation;
  out << "permutation.shuffles: " << perm.n_shuffles << '\n'
      << "permutation.bits_used: " << perm.bits_used << '\n'
      << "permutation.degenerate: " << (perm.degenerate ? "true" : "false") << '\n'
      << "permutation.pass: " << (perm.pass ? "true" : "false") << '\n';
  for (const auto& rank : perm.ranks) {
    out << "permutation." << rank.statistic.name() << ": value=" << fmt_double(rank.original)
        << " greater=" << rank.greater << " equal=" << rank.equal
        << " pass=" << (rank.pass ? "true" : "false") << '\n';
  }
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

EntropyReport parse_report(std::string_view text) {
  EntropyReport report;
  bool have_n = false, have_h = false, have_k = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    try {
      if (key == "n_bits") {
        report.n_bits = std::stoull(value);
        have_n = true;
      } else if (key == "h_min_per_bit") {
        report.h_min_per_bit = std::stod(value);
        have_h = true;
      } else if (key == "k_extractable") {
        report.k_extractable = std::stoull(value);
        have_k = true;
      } else if (key == "iid_verdict") {
        report.iid_verdict = value == "iid" ? Verdict::iid : Verdict::non_iid;
      }
    } catch (const std::exception&) {
      throw ConfigError("malformed entropy report line: " + line);
    }
  }
  if (!have_n || !have_h || !have_k) {
    throw ConfigError("entropy report lacks n_bits, h_min_per_bit or k_extractable");
  }
  if (report.k_extractable != extractable_bits(report.n_bits, report.h_min_per_bit)) {
    throw ConfigError("entropy report is inconsistent: k_extractable != floor(n_bits * h)");
  }
  return report;
}

}  // namespace mtjrng::entropy
