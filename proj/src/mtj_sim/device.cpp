#include <cmath>
#include <string>

#include "mtjrng/error.hpp"
#include "mtjrng/mtj_sim.hpp"

namespace mtjrng::mtj {

void DeviceParams::validate() const {
  if (!(r_parallel > 0.0) || !(r_antiparallel > r_parallel)) {
    throw ConfigError("device resistances must satisfy r_antiparallel > r_parallel > 0");
  }
  if (!(v_critical > 0.0)) throw ConfigError("v_critical must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(tau0 > 0.0)) throw ConfigError("tau0 must be positive");
}

namespace {

bool is_integral(double x) { return std::abs(x - std::round(x)) < 1e-9 * std::max(1.0, x); }

std::size_t sample_count(double width_us, double rate, const char* what) {
  const double n = width_us * 1e-6 * rate;
  if (!is_integral(n) || n < 0.0) {
    throw ConfigError(std::string(what) + " does not span a whole number of samples");
  }
  return static_cast<std::size_t>(std::llround(n));
}

}  // namespace

void CycleConfig::validate() const {
  if (!(v_reset < 0.0)) throw ConfigError("v_reset must be negative");
  if (!(v_perturb > 0.0)) throw ConfigError("v_perturb must be positive");
  if (!(w_reset > 0.0) || !(w_perturb > 0.0)) throw ConfigError("pulse widths must be positive");
  if (!(w_reset + w_perturb < cycle_period)) {
    throw ConfigError("reset and perturb pulses must fit inside the cycle period");
  }
  if (!(sample_rate > 0.0)) throw ConfigError("sample_rate must be positive");
  if (!(v_offset > 0.0)) throw ConfigError("v_offset must be positive");
  if (!(r_series > 0.0) || !(r_threshold > 0.0)) {
    throw ConfigError("r_series and r_threshold must be positive");
  }
  const std::size_t total = sample_count(cycle_period, sample_rate, "cycle_period");
  if (read_begin() >= total) throw ConfigError("cycle leaves no samples for the read sequence");
}

std::size_t CycleConfig::samples_per_cycle() const {
  return sample_count(cycle_period, sample_rate, "cycle_period");
}
std::size_t CycleConfig::reset_samples() const {
  return sample_count(w_reset, sample_rate, "w_reset");
}
std::size_t CycleConfig::perturb_samples() const {
  return sample_count(w_perturb, sample_rate, "w_perturb");
}

void NoiseModel::validate() const {
  if (!(read_noise_sd >= 0.0) || !(drift_amplitude >= 0.0) || !(drift_period > 0.0)) {
    throw ConfigError("noise fields must be non-negative (drift_period positive)");
  }
  if (!(markov_flip >= 0.0 && markov_flip < 1.0)) {
    throw ConfigError("markov_flip must lie in [0, 1)");
  }
}

double switching_probability(double v, double t, const DeviceParams& params) {
  if (!(t > 0.0)) throw ConfigError("pulse width must be positive");
  const double attempts = t * 1000.0 / params.tau0;  // us over ns
  const double rate = std::exp(-params.delta * (1.0 - v / params.v_critical));
  return -std::expm1(-attempts * rate);
}

DeviceParams calibrate(const DeviceParams& params, const CycleConfig& config, double target) {
  params.validate();
  if (!(target > 0.0 && target < 1.0)) throw ConfigError("calibration target must lie in (0, 1)");
  const double v = config.v_perturb;
  const double t = config.w_perturb;
  DeviceParams out = params;
  auto excess = [&](double log_vc) {
    out.v_critical = std::exp(log_vc);
    return switching_probability(v, t, out) - target;
  };
  // P_sw falls as v_critical grows; bisect on log(v_critical).
  double lo = std::log(1e-3);
  double hi = std::log(1e7);
  if (!(v > 0.0) || excess(lo) < 0.0 || excess(hi) > 0.0) {
    throw ConfigError("calibration bracket v_critical in [1e-3, 1e7] mV holds no root for v=" +
                      std::to_string(v) + " mV, t=" + std::to_string(t) + " us");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.v_critical = std::exp(0.5 * (lo + hi));
  if (std::abs(switching_probability(v, t, out) - target) > 1e-9) {
    throw ConfigError("calibration did not converge to the target switching probability");
  }
  return out;
}

double read_resistance(double v_mtj, double v_offset, double r_series) {
  if (!(v_mtj > 0.0) || !(v_mtj < v_offset)) {
    throw ConfigError("read voltage must lie strictly between 0 and v_offset");
  }
  return v_mtj / (v_offset - v_mtj) * r_series;
}

double mtj_voltage(double r_mtj, double v_source, double r_series) {
  if (!(r_mtj > 0.0)) throw ConfigError("MTJ resistance must be positive");
  if (std::isinf(r_mtj)) return v_source;
  return v_source * r_mtj / (r_mtj + r_series);
}

}  // namespace mtjrng::mtj
