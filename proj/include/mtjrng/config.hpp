#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "mtjrng/bit_io.hpp"
#include "mtjrng/extractor.hpp"
#include "mtjrng/mtj_sim.hpp"

namespace mtjrng {

// Every setting of the simulate -> estimate -> extract -> test chain.
// Physical units follow mtj::DeviceParams / CycleConfig / NoiseModel.
struct PipelineConfig {
  mtj::DeviceParams device;
  mtj::CycleConfig cycle;
  mtj::NoiseModel noise;
  double switching_target = 0.5;  // calibration target for P_sw
  std::size_t bits = 1'000'000;
  std::optional<std::uint64_t> rng_seed;

  std::size_t shuffles = 10'000;
  std::optional<std::uint64_t> permutation_seed;
  std::size_t permutation_max_bits = 1'000'000;

  extract::Epsilon epsilon = extract::Epsilon::parse("1e-10");
  std::optional<std::filesystem::path> seed_file;
  std::size_t chunk_bits = 0;  // 0: single pass over the whole input

  std::size_t block_length = 1'000'000;
  double alpha = 0.01;

  io::Format format = io::Format::packed;

  // Unknown keys and malformed values throw ConfigError.
  static PipelineConfig from_key_values(const std::map<std::string, std::string>& kv);
  static PipelineConfig load(const std::filesystem::path& path);

  void apply(const std::string& key, const std::string& value);
  void validate() const;

  // Fills every unset RNG seed from the OS entropy source.
  void resolve_seeds();

  std::map<std::string, std::string> to_key_values() const;
  std::string render() const;
  // SHA-256 of render().
  std::string digest() const;
};

}  // namespace mtjrng
