#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mtjrng/bit_string.hpp"

// Stochastic model of an STT-MTJ random bit cell: each cycle resets the
// junction to the parallel state, applies a perturb pulse that switches it to
// the anti-parallel state with some probability, then reads the resistance
// through a series divider and thresholds it.
namespace mtjrng::mtj {

struct DeviceParams {
  double r_parallel = 2500.0;      // ohm
  double r_antiparallel = 7500.0;  // ohm
  double v_critical = 700.0;       // mV, set by calibrate()
  double delta = 40.0;             // thermal stability factor
  double tau0 = 1.0;               // ns

  double tmr() const { return (r_antiparallel - r_parallel) / r_parallel; }
  void validate() const;
};

struct CycleConfig {
  double v_reset = -900.0;     // mV
  double w_reset = 1.0;        // us
  double v_perturb = 652.0;    // mV
  double w_perturb = 1.0;      // us
  double cycle_period = 8.0;   // us
  double sample_rate = 2.0e6;  // samples/s
  double v_offset = 50.0;      // mV
  double r_series = 3000.0;    // ohm
  double r_threshold = 4000.0; // ohm

  void validate() const;
  std::size_t samples_per_cycle() const;
  std::size_t reset_samples() const;
  std::size_t perturb_samples() const;
  // First sample index of the read sequence; the samples before it belong to
  // the reset and perturb pulses.
  std::size_t read_begin() const { return reset_samples() + perturb_samples(); }
};

struct NoiseModel {
  double read_noise_sd = 0.0;    // mV, additive on each read sample
  double drift_amplitude = 0.0;  // mV, sinusoidal modulation of v_perturb
  double drift_period = 1000.0;  // cycles
  double markov_flip = 0.0;      // probability the bit repeats the previous output

  void validate() const;
};

// Thermal-activation switching probability for a pulse of amplitude `v` (mV)
// and width `t` (us).
double switching_probability(double v, double t, const DeviceParams& params);

// Returns `params` with v_critical adjusted by bisection so that a perturb
// pulse from `config` switches with probability `target` (0.5 by default).
DeviceParams calibrate(const DeviceParams& params, const CycleConfig& config,
                       double target = 0.5);

// Inverts the read divider: R_mtj = v_mtj / (v_offset - v_mtj) * r_series.
double read_resistance(double v_mtj, double v_offset, double r_series);
// Forward divider: voltage across the junction for source `v_source`.
double mtj_voltage(double r_mtj, double v_source, double r_series);

// Mean resistance of the read-sequence samples.
double read_sequence_resistance(std::span<const double> samples, const CycleConfig& config);
// Output bit for one cycle's samples: 1 iff the read-sequence mean resistance
// exceeds the threshold. Reset and perturb samples are not consulted.
bool decide_bit(std::span<const double> samples, const CycleConfig& config);

struct Cycle {
  std::span<const double> samples;  // voltages across the MTJ, mV
  bool switched = false;            // junction ended in the AP state
  bool threshold_bit = false;       // decision from the read samples
  bool bit = false;                 // emitted bit, after previous-bit replacement
};

// One generator instance; not thread-safe. Distinct instances with distinct
// seeds are independent.
class Simulator {
 public:
  Simulator(const DeviceParams& params, const CycleConfig& config, const NoiseModel& noise,
            std::uint64_t seed);

  Cycle next_cycle();
  BitString generate(std::size_t n_bits);

  // Perturb amplitude in effect for the given cycle, including drift.
  double effective_perturb(std::uint64_t cycle_index) const;

 private:
  DeviceParams params_;
  CycleConfig config_;
  NoiseModel noise_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> read_noise_;
  std::vector<double> samples_;
  std::uint64_t cycle_index_ = 0;
  bool have_previous_ = false;
  bool previous_bit_ = false;
  double v_read_parallel_ = 0.0;
  double v_read_antiparallel_ = 0.0;
};

// Batch generation; n_bits must be at least 1.
BitString generate_raw(std::size_t n_bits, const CycleConfig& config, const DeviceParams& params,
                       const NoiseModel& noise, std::uint64_t rng_seed);

}  // namespace mtjrng::mtj
