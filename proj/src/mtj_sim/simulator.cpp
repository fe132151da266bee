#include <algorithm>
#include <cmath>
#include <numbers>

#include "mtjrng/error.hpp"
#include "mtjrng/mtj_sim.hpp"

namespace mtjrng::mtj {

double read_sequence_resistance(std::span<const double> samples, const CycleConfig& config) {
  const std::size_t begin = config.read_begin();
  if (samples.size() <= begin) throw ConfigError("cycle has no read-sequence samples");
  // A noisy sample can leave the divider's range; pin it just inside.
  const double lo = config.v_offset * 1e-9;
  const double hi = config.v_offset * (1.0 - 1e-9);
  double sum = 0.0;
  for (std::size_t i = begin; i < samples.size(); ++i) {
    sum += read_resistance(std::clamp(samples[i], lo, hi), config.v_offset, config.r_series);
  }
  return sum / static_cast<double>(samples.size() - begin);
}

bool decide_bit(std::span<const double> samples, const CycleConfig& config) {
  return read_sequence_resistance(samples, config) > config.r_threshold;
}

Simulator::Simulator(const DeviceParams& params, const CycleConfig& config,
                     const NoiseModel& noise, std::uint64_t seed)
    : params_(params),
      config_(config),
      noise_(noise),
      rng_(seed),
      read_noise_(0.0, noise.read_noise_sd > 0.0 ? noise.read_noise_sd : 1.0) {
  params_.validate();
  config_.validate();
  noise_.validate();
  samples_.resize(config_.samples_per_cycle());
  v_read_parallel_ = mtj_voltage(params_.r_parallel, config_.v_offset, config_.r_series);
  v_read_antiparallel_ = mtj_voltage(params_.r_antiparallel, config_.v_offset, config_.r_series);
}

double Simulator::effective_perturb(std::uint64_t cycle_index) const {
  if (noise_.drift_amplitude == 0.0) return config_.v_perturb;
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(cycle_index) /
                       noise_.drift_period;
  return config_.v_perturb + noise_.drift_amplitude * std::sin(phase);
}

Cycle Simulator::next_cycle() {
  const std::size_t n_reset = config_.reset_samples();
  const std::size_t n_perturb = config_.perturb_samples();

  // I: reset pulse drives the junction into the parallel state.
  const double v_reset =
      mtj_voltage(params_.r_parallel, config_.v_offset + config_.v_reset, config_.r_series);
  std::fill_n(samples_.begin(), n_reset, v_reset);

  // II: perturb pulse; the junction is still parallel while it is applied.
  const double v_eff = effective_perturb(cycle_index_);
  const double v_perturb =
      mtj_voltage(params_.r_parallel, config_.v_offset + v_eff, config_.r_series);
  std::fill_n(samples_.begin() + static_cast<std::ptrdiff_t>(n_reset), n_perturb, v_perturb);
  const double p_switch =
      v_eff > 0.0 ? switching_probability(v_eff, config_.w_perturb, params_) : 0.0;
  const bool switched = uniform_(rng_) < p_switch;

  // III: read at the offset voltage.
  const double v_read = switched ? v_read_antiparallel_ : v_read_parallel_;
  for (std::size_t i = n_reset + n_perturb; i < samples_.size(); ++i) {
    samples_[i] = v_read;
    if (noise_.read_noise_sd > 0.0) samples_[i] += read_noise_(rng_);
  }

  Cycle cycle;
  cycle.samples = samples_;
  cycle.switched = switched;
  cycle.threshold_bit = decide_bit(samples_, config_);
  cycle.bit = cycle.threshold_bit;
  if (noise_.markov_flip > 0.0) {
    const bool repeat = uniform_(rng_) < noise_.markov_flip;
    if (repeat && have_previous_) cycle.bit = previous_bit_;
  }
  have_previous_ = true;
  previous_bit_ = cycle.bit;
  ++cycle_index_;
  return cycle;
}

BitString Simulator::generate(std::size_t n_bits) {
  BitString out(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) out.set(i, next_cycle().bit);
  return out;
}

BitString generate_raw(std::size_t n_bits, const CycleConfig& config, const DeviceParams& params,
                       const NoiseModel& noise, std::uint64_t rng_seed) {
  if (n_bits == 0) throw ConfigError("n_bits must be at least 1");
  Simulator sim(params, config, noise, rng_seed);
  return sim.generate(n_bits);
}

}  // namespace mtjrng::mtj
