#pragma once

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

namespace mtjrng::nist::detail {

// Upper regularised incomplete gamma Q(a, x).
inline double igamc(double a, double x) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(a, x);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace mtjrng::nist::detail
