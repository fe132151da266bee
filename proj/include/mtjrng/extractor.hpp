#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "mtjrng/bit_string.hpp"
#include "mtjrng/kernels/kernels.hpp"

namespace mtjrng::extract {

// Security parameter held as an exact rational so that the output length
// can be computed with a provably correct floor.
class Epsilon {
 public:
  // Decimal literal such as "1e-10" or "0.0001".
  static Epsilon parse(std::string_view text);
  // Exact value of the double.
  static Epsilon from_double(double value);

  double value() const;
  const std::string& text() const noexcept { return text_; }
  // True when 1/epsilon is an exact power of two.
  bool is_power_of_two() const;
  // log2(1/epsilon) rounded to double, for display.
  double log2_inverse() const;

  const boost::multiprecision::cpp_int& numerator() const noexcept { return num_; }
  const boost::multiprecision::cpp_int& denominator() const noexcept { return den_; }

 private:
  Epsilon(boost::multiprecision::cpp_int num, boost::multiprecision::cpp_int den,
          std::string text);

  boost::multiprecision::cpp_int num_;
  boost::multiprecision::cpp_int den_;
  std::string text_;
};

// Leftover-hash output length floor(k - 2*log2(1/eps) + 2), capped at k.
// Throws InsufficientEntropy when the result is below 1.
std::uint64_t output_length(std::uint64_t k, const Epsilon& eps);

struct ExtractorParams {
  std::uint64_t n = 0;  // input bits
  std::uint64_t k = 0;  // min-entropy lower bound, bits
  Epsilon epsilon = Epsilon::parse("1e-10");
  std::uint64_t m = 0;  // output bits
  std::uint64_t r = 0;  // seed bits, n + m - 1

  static ExtractorParams derive(std::uint64_t n, std::uint64_t k, const Epsilon& eps);
  // Throws ConfigError unless m == output_length(k, eps), m <= k <= n and
  // r == n + m - 1.
  void validate() const;
};

// Uniform seed of n + m - 1 bits defining an m x n Toeplitz matrix. Bit t of
// the seed is s_{t+1}: the first row reads s_n ... s_1 and the first column
// s_n ... s_{n+m-1}.
class ToeplitzSeed {
 public:
  ToeplitzSeed(BitString bits, std::size_t n, std::size_t m);

  const BitString& bits() const noexcept { return bits_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  // Matrix entry in row i, column j (0-based).
  bool entry(std::size_t i, std::size_t j) const { return bits_[n_ - 1 + i - j]; }

 private:
  BitString bits_;
  std::size_t n_;
  std::size_t m_;
};

// Row-by-row GF(2) matrix-vector product. O(n*m/64); the reference path.
BitString toeplitz_direct(const ToeplitzSeed& seed, const BitString& x,
                          const kernels::KernelTable& k = kernels::kernels());

// Same product through an exact integer convolution of seed and input
// (number-theoretic transform), reduced mod 2. Bit-identical to
// toeplitz_direct. Rejects shapes whose transform would exceed 2^30 points.
BitString toeplitz_fft(const ToeplitzSeed& seed, const BitString& x,
                       const kernels::KernelTable& k = kernels::kernels());

struct ExtractionResult {
  BitString output;
  ExtractorParams params;
  std::string input_digest;
  std::string seed_digest;
};

ExtractionResult extract(const BitString& x, const ToeplitzSeed& seed,
                         const ExtractorParams& params);

// Memory-bounded variant: the input is cut into chunks of `chunk_bits`, each
// hashed with the same seed under per-chunk parameters derived from
// `h_per_bit`. Reusing one seed is only sound when the chunks are independent
// sources, each holding floor(chunk_bits * h_per_bit) bits of min-entropy.
// The trailing partial chunk is discarded.
struct ChunkedExtraction {
  BitString output;
  ExtractorParams chunk_params;
  std::size_t chunks = 0;
  std::size_t discarded_bits = 0;
  std::string input_digest;
  std::string seed_digest;
};

// Parameters for one chunk; the seed must have chunk_params.r bits.
ExtractorParams chunk_params(std::size_t chunk_bits, double h_per_bit, const Epsilon& eps);

ChunkedExtraction extract_chunked(const BitString& x, const BitString& seed,
                                  std::size_t chunk_bits, double h_per_bit, const Epsilon& eps);

}  // namespace mtjrng::extract
