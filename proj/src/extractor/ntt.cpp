#include "mtjrng/ntt.hpp"

#include <algorithm>
#include <bit>

#include "mtjrng/error.hpp"
#include "mtjrng/kernels/montgomery.hpp"

namespace mtjrng::ntt {
namespace {

// Stages whose butterflies fit inside one block run block by block so the
// block stays cache resident across them.
constexpr std::size_t kBlock = std::size_t{1} << 14;

}  // namespace

std::size_t transform_length(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 2)); }

Plan::Plan(std::size_t length) : length_(length) {
  if (length < 2 || !std::has_single_bit(length) ||
      length > (std::size_t{1} << modp::kMaxLog2Length)) {
    throw ConfigError("transform length must be a power of two in [2, 2^30]");
  }
  twiddles_.assign(length, 0);
  const std::size_t top = length / 2;
  const std::uint32_t w = modp::pow(modp::kGenerator, (modp::kPrime - 1) / length);
  const std::uint32_t w_mont = modp::to_mont(w);
  std::uint32_t cur = modp::to_mont(1);
  for (std::size_t j = 0; j < top; ++j) {
    twiddles_[top + j] = cur;
    cur = modp::mont_mul(cur, w_mont);
  }
  // A root of order 2h is the square of one of order 4h.
  for (std::size_t h = top / 2; h >= 1; h /= 2) {
    for (std::size_t j = 0; j < h; ++j) twiddles_[h + j] = twiddles_[2 * h + 2 * j];
  }
}

void Plan::forward(std::span<std::uint32_t> data, const kernels::KernelTable& k) const {
  if (data.size() != length_) throw ConfigError("transform input has the wrong length");
  const std::size_t block = std::min(kBlock, length_);
  std::size_t h = length_ / 2;
  for (; h >= block; h /= 2) k.ntt_dif_stage(data, stage_twiddles(h), h);
  for (std::size_t base = 0; base < length_; base += block) {
    const auto chunk = data.subspan(base, block);
    for (std::size_t hh = h; hh >= 1; hh /= 2) k.ntt_dif_stage(chunk, stage_twiddles(hh), hh);
  }
}

void Plan::forward_dit(std::span<std::uint32_t> data, const kernels::KernelTable& k) const {
  const std::size_t block = std::min(kBlock, length_);
  for (std::size_t base = 0; base < length_; base += block) {
    const auto chunk = data.subspan(base, block);
    for (std::size_t h = 1; h < block; h *= 2) k.ntt_dit_stage(chunk, stage_twiddles(h), h);
  }
  for (std::size_t h = block; h < length_; h *= 2) k.ntt_dit_stage(data, stage_twiddles(h), h);
}

void Plan::convolve(std::span<std::uint32_t> a, std::span<std::uint32_t> b,
                    const kernels::KernelTable& k) const {
  if (a.size() != length_ || b.size() != length_) {
    throw ConfigError("convolution operands have the wrong length");
  }
  forward(a, k);
  forward(b, k);
  const std::uint32_t inv_len = modp::inverse(static_cast<std::uint32_t>(length_ % modp::kPrime));
  k.pointwise_mul(a, b, modp::to_mont(modp::to_mont(inv_len)));
  // Transforming again with the same root yields the result at index -t.
  forward_dit(a, k);
  std::reverse(a.begin() + 1, a.end());
}

}  // namespace mtjrng::ntt
