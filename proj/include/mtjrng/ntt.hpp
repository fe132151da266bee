#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mtjrng/kernels/kernels.hpp"

namespace mtjrng::ntt {

// Power-of-two number-theoretic transform modulo modp::kPrime.
class Plan {
 public:
  explicit Plan(std::size_t length);

  std::size_t size() const noexcept { return length_; }

  // In place; natural order in, bit-reversed order out.
  void forward(std::span<std::uint32_t> data, const kernels::KernelTable& k) const;

  // a <- cyclic convolution of a and b (natural order, residues < p).
  // b is overwritten with its transform.
  void convolve(std::span<std::uint32_t> a, std::span<std::uint32_t> b,
                const kernels::KernelTable& k) const;

 private:
  // Bit-reversed order in, natural order out, same root as forward().
  void forward_dit(std::span<std::uint32_t> data, const kernels::KernelTable& k) const;
  std::span<const std::uint32_t> stage_twiddles(std::size_t half) const {
    return std::span(twiddles_).subspan(half, half);
  }

  std::size_t length_;
  // twiddles_[h + j] = w^j in Montgomery form, w of order 2h
  std::vector<std::uint32_t> twiddles_;
};

// Smallest power of two >= n.
std::size_t transform_length(std::size_t n);

}  // namespace mtjrng::ntt
