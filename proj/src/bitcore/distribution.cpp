#include "mtjrng/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mtjrng/error.hpp"

namespace mtjrng {

Distribution::Distribution(std::vector<std::pair<Symbol, double>> masses) {
  std::sort(masses.begin(), masses.end());
  double total = 0.0;
  for (const auto& [symbol, mass] : masses) {
    if (!(mass >= 0.0)) {
      throw ConfigError("negative or NaN probability mass for symbol " + std::to_string(symbol));
    }
    total += mass;
    if (!masses_.empty() && masses_.back().first == symbol) {
      masses_.back().second += mass;
    } else {
      masses_.emplace_back(symbol, mass);
    }
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw ConfigError("probability masses sum to " + std::to_string(total) + ", not 1");
  }
}

Distribution Distribution::uniform(std::uint64_t support_size) {
  if (support_size == 0) throw ConfigError("uniform distribution over an empty support");
  std::vector<std::pair<Symbol, double>> masses;
  masses.reserve(support_size);
  const double p = 1.0 / static_cast<double>(support_size);
  for (Symbol s = 0; s < support_size; ++s) masses.emplace_back(s, p);
  return Distribution(std::move(masses));
}

Distribution Distribution::point(Symbol s) { return Distribution({{s, 1.0}}); }

Distribution Distribution::bernoulli(double p_one) {
  return Distribution({{0, 1.0 - p_one}, {1, p_one}});
}

double Distribution::mass(Symbol s) const noexcept {
  const auto it = std::lower_bound(masses_.begin(), masses_.end(), s,
                                   [](const auto& entry, Symbol key) { return entry.first < key; });
  return (it != masses_.end() && it->first == s) ? it->second : 0.0;
}

double statistical_distance(const Distribution& p, const Distribution& q) {
  // Merge walk over the two sorted supports.
  const auto& a = p.entries();
  const auto& b = q.entries();
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      sum += a[i++].second;
    } else if (i == a.size() || b[j].first < a[i].first) {
      sum += b[j++].second;
    } else {
      sum += std::abs(a[i++].second - b[j++].second);
    }
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double min_entropy(const Distribution& p) {
  if (p.support_size() == 0) throw ConfigError("min-entropy of an empty distribution");
  double max_mass = 0.0;
  for (const auto& entry : p.entries()) max_mass = std::max(max_mass, entry.second);
  return std::max(0.0, -std::log2(max_mass));
}

double shannon_entropy(const Distribution& p) {
  double h = 0.0;
  for (const auto& entry : p.entries()) {
    if (entry.second > 0.0) h -= entry.second * std::log2(entry.second);
  }
  return h;
}

}  // namespace mtjrng
