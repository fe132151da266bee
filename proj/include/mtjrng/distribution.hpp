#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mtjrng {

// Finite probability mass function over integer-labelled symbols.
class Distribution {
 public:
  using Symbol = std::uint64_t;
  static constexpr double kTolerance = 1e-12;

  // Duplicated symbols are merged. Throws ConfigError when a mass is negative
  // or the masses do not sum to 1 within kTolerance.
  explicit Distribution(std::vector<std::pair<Symbol, double>> masses);

  static Distribution uniform(std::uint64_t support_size);
  static Distribution point(Symbol s);
  static Distribution bernoulli(double p_one);

  // Mass of `s`, 0 when `s` is outside the support.
  double mass(Symbol s) const noexcept;
  const std::vector<std::pair<Symbol, double>>& entries() const noexcept { return masses_; }
  std::size_t support_size() const noexcept { return masses_.size(); }

 private:
  std::vector<std::pair<Symbol, double>> masses_;  // sorted by symbol
};

// Half the L1 distance between the two mass functions over the union of
// their supports.
double statistical_distance(const Distribution& p, const Distribution& q);

// -log2 of the largest mass.
double min_entropy(const Distribution& p);

double shannon_entropy(const Distribution& p);

}  // namespace mtjrng
