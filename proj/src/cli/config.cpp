#include "mtjrng/config.hpp"

#include <cstdio>
#include <functional>
#include <random>

#include "mtjrng/digest.hpp"
#include "mtjrng/error.hpp"

namespace mtjrng {
namespace {

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
    out = std::stoull(value, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t os_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace

void PipelineConfig::apply(const std::string& key, const std::string& value) {
  using Setter = std::function<void(PipelineConfig&, const std::string&)>;
  static const std::map<std::string, Setter> setters = [] {
    std::map<std::string, Setter> s;
    auto real = [&s](const std::string& k, auto getter) {
      s[k] = [k, getter](PipelineConfig& c, const std::string& v) { getter(c) = to_double(k, v); };
    };
    real("r_parallel", [](PipelineConfig& c) -> double& { return c.device.r_parallel; });
    real("r_antiparallel", [](PipelineConfig& c) -> double& { return c.device.r_antiparallel; });
    real("delta", [](PipelineConfig& c) -> double& { return c.device.delta; });
    real("tau0", [](PipelineConfig& c) -> double& { return c.device.tau0; });
    real("v_reset", [](PipelineConfig& c) -> double& { return c.cycle.v_reset; });
    real("w_reset", [](PipelineConfig& c) -> double& { return c.cycle.w_reset; });
    real("v_perturb", [](PipelineConfig& c) -> double& { return c.cycle.v_perturb; });
    real("w_perturb", [](PipelineConfig& c) -> double& { return c.cycle.w_perturb; });
    real("cycle_period", [](PipelineConfig& c) -> double& { return c.cycle.cycle_period; });
    real("sample_rate", [](PipelineConfig& c) -> double& { return c.cycle.sample_rate; });
    real("v_offset", [](PipelineConfig& c) -> double& { return c.cycle.v_offset; });
    real("r_series", [](PipelineConfig& c) -> double& { return c.cycle.r_series; });
    real("r_threshold", [](PipelineConfig& c) -> double& { return c.cycle.r_threshold; });
    real("read_noise_sd", [](PipelineConfig& c) -> double& { return c.noise.read_noise_sd; });
    real("drift_amplitude", [](PipelineConfig& c) -> double& { return c.noise.drift_amplitude; });
    real("drift_period", [](PipelineConfig& c) -> double& { return c.noise.drift_period; });
    real("markov_flip", [](PipelineConfig& c) -> double& { return c.noise.markov_flip; });
    real("switching_target", [](PipelineConfig& c) -> double& { return c.switching_target; });
    real("alpha", [](PipelineConfig& c) -> double& { return c.alpha; });

    auto count = [&s](const std::string& k, auto getter) {
      s[k] = [k, getter](PipelineConfig& c, const std::string& v) {
        getter(c) = static_cast<std::size_t>(to_u64(k, v));
      };
    };
    count("bits", [](PipelineConfig& c) -> std::size_t& { return c.bits; });
    count("shuffles", [](PipelineConfig& c) -> std::size_t& { return c.shuffles; });
    count("permutation_max_bits",
          [](PipelineConfig& c) -> std::size_t& { return c.permutation_max_bits; });
    count("chunk_bits", [](PipelineConfig& c) -> std::size_t& { return c.chunk_bits; });
    count("block_length", [](PipelineConfig& c) -> std::size_t& { return c.block_length; });

    s["rng_seed"] = [](PipelineConfig& c, const std::string& v) { c.rng_seed = to_u64("rng_seed", v); };
    s["permutation_seed"] = [](PipelineConfig& c, const std::string& v) {
      c.permutation_seed = to_u64("permutation_seed", v);
    };
    s["epsilon"] = [](PipelineConfig& c, const std::string& v) { c.epsilon = extract::Epsilon::parse(v); };
    s["seed_file"] = [](PipelineConfig& c, const std::string& v) {
      if (v.empty()) {
        c.seed_file.reset();
      } else {
        c.seed_file = v;
      }
    };
    s["format"] = [](PipelineConfig& c, const std::string& v) { c.format = io::parse_format(v); };
    return s;
  }();
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(*this, value);
}

PipelineConfig PipelineConfig::from_key_values(const std::map<std::string, std::string>& kv) {
  PipelineConfig c;
  for (const auto& [k, v] : kv) c.apply(k, v);
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  try {
    return from_key_values(io::read_key_values(path));
  } catch (const StageError& e) {
    throw ConfigError(std::string("cannot read configuration: ") + e.what());
  }
}

void PipelineConfig::validate() const {
  device.validate();
  cycle.validate();
  noise.validate();
  if (!(switching_target > 0.0 && switching_target < 1.0)) {
    throw ConfigError("switching_target must lie in (0, 1)");
  }
  if (bits == 0) throw ConfigError("bits must be at least 1");
  if (shuffles < 100) throw ConfigError("shuffles must be at least 100");
  if (permutation_max_bits < 16) throw ConfigError("permutation_max_bits must be at least 16");
  if (block_length == 0) throw ConfigError("block_length must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

void PipelineConfig::resolve_seeds() {
  if (!rng_seed) rng_seed = os_seed();
  if (!permutation_seed) permutation_seed = os_seed();
}

std::map<std::string, std::string> PipelineConfig::to_key_values() const {
  std::map<std::string, std::string> kv{
      {"r_parallel", num(device.r_parallel)},
      {"r_antiparallel", num(device.r_antiparallel)},
      {"delta", num(device.delta)},
      {"tau0", num(device.tau0)},
      {"v_reset", num(cycle.v_reset)},
      {"w_reset", num(cycle.w_reset)},
      {"v_perturb", num(cycle.v_perturb)},
      {"w_perturb", num(cycle.w_perturb)},
      {"cycle_period", num(cycle.cycle_period)},
      {"sample_rate", num(cycle.sample_rate)},
      {"v_offset", num(cycle.v_offset)},
      {"r_series", num(cycle.r_series)},
      {"r_threshold", num(cycle.r_threshold)},
      {"read_noise_sd", num(noise.read_noise_sd)},
      {"drift_amplitude", num(noise.drift_amplitude)},
      {"drift_period", num(noise.drift_period)},
      {"markov_flip", num(noise.markov_flip)},
      {"switching_target", num(switching_target)},
      {"bits", std::to_string(bits)},
      {"shuffles", std::to_string(shuffles)},
      {"permutation_max_bits", std::to_string(permutation_max_bits)},
      {"epsilon", epsilon.text()},
      {"chunk_bits", std::to_string(chunk_bits)},
      {"block_length", std::to_string(block_length)},
      {"alpha", num(alpha)},
      {"format", std::string(io::format_name(format))},
  };
  if (rng_seed) kv["rng_seed"] = std::to_string(*rng_seed);
  if (permutation_seed) kv["permutation_seed"] = std::to_string(*permutation_seed);
  if (seed_file) kv["seed_file"] = seed_file->string();
  return kv;
}

std::string PipelineConfig::render() const { return io::render_key_values(to_key_values()); }

std::string PipelineConfig::digest() const {
  const std::string text = render();
  return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace mtjrng
