#include <algorithm>
#include <string>
#include <vector>

#include "mtjrng/digest.hpp"
#include "mtjrng/error.hpp"
#include "mtjrng/extractor.hpp"
#include "mtjrng/kernels/montgomery.hpp"
#include "mtjrng/ntt.hpp"

namespace mtjrng::extract {

ToeplitzSeed::ToeplitzSeed(BitString bits, std::size_t n, std::size_t m)
    : bits_(std::move(bits)), n_(n), m_(m) {
  if (n == 0 || m == 0) throw ConfigError("Toeplitz shape must have n >= 1 and m >= 1");
  if (bits_.size() != n + m - 1) {
    throw ConfigError("Toeplitz seed has " + std::to_string(bits_.size()) +
                      " bits, need n + m - 1 = " + std::to_string(n + m - 1));
  }
}

namespace {

void check_input(const ToeplitzSeed& seed, const BitString& x) {
  if (x.size() != seed.n()) {
    throw ConfigError("input has " + std::to_string(x.size()) + " bits, seed expects " +
                      std::to_string(seed.n()));
  }
}

std::vector<std::uint32_t> expand_bits(const BitString& bits, std::size_t length) {
  std::vector<std::uint32_t> out(length, 0);
  const auto words = bits.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t word = words[w];
    const std::size_t base = 64 * w;
    const std::size_t end = std::min<std::size_t>(64, bits.size() - base);
    for (std::size_t b = 0; b < end; ++b, word >>= 1) out[base + b] = word & 1U;
  }
  return out;
}

}  // namespace

BitString toeplitz_direct(const ToeplitzSeed& seed, const BitString& x,
                          const kernels::KernelTable& k) {
  check_input(seed, x);
  const std::size_t n = seed.n();
  const std::size_t m = seed.m();
  const std::size_t r = n + m - 1;
  // Row i of T is the reversed seed read from offset m-1-i.
  BitString reversed(r);
  for (std::size_t t = 0; t < r; ++t) reversed.set(t, seed.bits()[r - 1 - t]);

  const std::size_t words = BitString::word_count(n);
  std::vector<std::uint64_t> row(words);
  const std::uint64_t tail_mask =
      (n % 64 == 0) ? ~std::uint64_t{0} : (std::uint64_t{1} << (n % 64)) - 1;
  BitString z(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t offset = m - 1 - i;
    for (std::size_t w = 0; w < words; ++w) row[w] = reversed.word_at_bit(offset + 64 * w);
    row.back() &= tail_mask;
    z.set(i, k.and_popcount(row, x.words()) & 1U);
  }
  return z;
}

BitString toeplitz_fft(const ToeplitzSeed& seed, const BitString& x,
                       const kernels::KernelTable& k) {
  check_input(seed, x);
  const std::size_t n = seed.n();
  const std::size_t m = seed.m();
  const std::size_t r = n + m - 1;
  // Coefficients n-1 .. n+m-2 of seed * x are free of wrap-around once the
  // cyclic length reaches n + m - 1. Each is a count of at most n ones, so
  // it is exact while n < p.
  if (r > (std::size_t{1} << modp::kMaxLog2Length) || n >= modp::kPrime) {
    throw ConfigError("n + m - 1 = " + std::to_string(r) +
                      " exceeds the exact transform limit of 2^30; use chunked extraction");
  }
  const std::size_t length = ntt::transform_length(r);
  auto a = expand_bits(seed.bits(), length);
  auto b = expand_bits(x, length);
  const ntt::Plan plan(length);
  plan.convolve(a, b, k);

  BitString z(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint32_t c = a[n - 1 + i];
    if (c > n) throw StageError("convolution coefficient exceeds its bound; transform fault");
    z.set(i, c & 1U);
  }
  return z;
}

ExtractionResult extract(const BitString& x, const ToeplitzSeed& seed,
                         const ExtractorParams& params) {
  params.validate();
  if (x.size() != params.n) {
    throw ConfigError("input length " + std::to_string(x.size()) + " differs from n = " +
                      std::to_string(params.n));
  }
  if (seed.n() != params.n || seed.m() != params.m || seed.bits().size() != params.r) {
    throw ConfigError("seed length " + std::to_string(seed.bits().size()) +
                      " differs from r = n + m - 1 = " + std::to_string(params.r));
  }
  ExtractionResult result;
  result.output = toeplitz_fft(seed, x);
  result.params = params;
  result.input_digest = digest(x);
  result.seed_digest = digest(seed.bits());
  return result;
}

ChunkedExtraction extract_chunked(const BitString& x, const BitString& seed,
                                  std::size_t chunk_bits, double h_per_bit, const Epsilon& eps) {
  ChunkedExtraction result;
  result.chunk_params = chunk_params(chunk_bits, h_per_bit, eps);
  const auto& p = result.chunk_params;
  if (seed.size() < p.r) {
    throw ConfigError("seed has " + std::to_string(seed.size()) + " bits, chunked extraction needs " +
                      std::to_string(p.r));
  }
  const ToeplitzSeed chunk_seed(seed.size() == p.r ? seed : seed.slice(0, p.r), p.n, p.m);
  result.chunks = x.size() / chunk_bits;
  result.discarded_bits = x.size() - result.chunks * chunk_bits;
  result.output.reserve(result.chunks * p.m);
  for (std::size_t c = 0; c < result.chunks; ++c) {
    const BitString z = toeplitz_fft(chunk_seed, x.slice(c * chunk_bits, chunk_bits));
    for (std::size_t i = 0; i < z.size(); ++i) result.output.push_back(z[i]);
  }
  result.input_digest = digest(x);
  result.seed_digest = digest(chunk_seed.bits());
  return result;
}

}  // namespace mtjrng::extract
