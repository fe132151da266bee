#include <bit>

#include "mtjrng/kernels/kernels.hpp"
#include "mtjrng/kernels/montgomery.hpp"

namespace mtjrng::kernels {
namespace {

void xor_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
               std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ^ b[i];
}

std::uint64_t popcount_words(std::span<const std::uint64_t> words) {
  std::uint64_t total = 0;
  for (const auto w : words) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  }
  return total;
}

void ntt_dif_stage(std::span<std::uint32_t> data, std::span<const std::uint32_t> twiddles,
                   std::size_t half) {
  for (std::size_t base = 0; base < data.size(); base += 2 * half) {
    std::uint32_t* lo = data.data() + base;
    std::uint32_t* hi = lo + half;
    for (std::size_t j = 0; j < half; ++j) {
      const std::uint32_t u = lo[j];
      const std::uint32_t v = hi[j];
      lo[j] = modp::add(u, v);
      hi[j] = modp::mont_mul(modp::sub(u, v), twiddles[j]);
    }
  }
}

void ntt_dit_stage(std::span<std::uint32_t> data, std::span<const std::uint32_t> twiddles,
                   std::size_t half) {
  for (std::size_t base = 0; base < data.size(); base += 2 * half) {
    std::uint32_t* lo = data.data() + base;
    std::uint32_t* hi = lo + half;
    for (std::size_t j = 0; j < half; ++j) {
      const std::uint32_t u = lo[j];
      const std::uint32_t v = modp::mont_mul(hi[j], twiddles[j]);
      lo[j] = modp::add(u, v);
      hi[j] = modp::sub(u, v);
    }
  }
}

void pointwise_mul(std::span<std::uint32_t> a, std::span<const std::uint32_t> b,
                   std::uint32_t scale) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = modp::mont_mul(modp::mont_mul(a[i], b[i]), scale);
  }
}

constexpr KernelTable kScalar{
    Isa::scalar,  xor_words,     popcount_words, and_popcount,
    ntt_dif_stage, ntt_dit_stage, pointwise_mul,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace mtjrng::kernels
