#pragma once

#include <cstdint>

// Arithmetic modulo the NTT prime 3 * 2^30 + 1.
//
// The prime exceeds every coefficient of a 0/1 convolution of inputs shorter
// than 3.2e9 bits and has 2^30-th roots of unity, so a single-prime transform
// of length up to 2^30 gives the exact integer convolution.
namespace mtjrng::modp {

inline constexpr std::uint32_t kPrime = 3221225473U;
inline constexpr std::uint32_t kGenerator = 5;
inline constexpr int kMaxLog2Length = 30;

namespace detail {
constexpr std::uint32_t inverse_mod_2_32(std::uint32_t p) {
  std::uint32_t x = p;  // Newton iteration, 5 steps reach 32 bits
  for (int i = 0; i < 5; ++i) x *= 2U - p * x;
  return x;
}
}  // namespace detail

// p^-1 mod 2^32
inline constexpr std::uint32_t kPrimeInv = detail::inverse_mod_2_32(kPrime);
static_assert(kPrime * kPrimeInv == 1U);
// 2^64 mod p, used to enter the Montgomery domain
inline constexpr std::uint32_t kR2 = static_cast<std::uint32_t>(
    (static_cast<unsigned __int128>(1) << 64) % kPrime);

constexpr std::uint32_t add(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t c = kPrime - b;
  return a >= c ? a - c : a - c + kPrime;
}

constexpr std::uint32_t sub(std::uint32_t a, std::uint32_t b) {
  return a >= b ? a - b : a - b + kPrime;
}

// a * b * 2^-32 mod p for a, b < p. The result is canonical.
constexpr std::uint32_t mont_mul(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t t = static_cast<std::uint64_t>(a) * b;
  const std::uint32_t m = static_cast<std::uint32_t>(t) * kPrimeInv;
  const std::uint32_t t_hi = static_cast<std::uint32_t>(t >> 32);
  const std::uint32_t mp_hi =
      static_cast<std::uint32_t>((static_cast<std::uint64_t>(m) * kPrime) >> 32);
  return t_hi >= mp_hi ? t_hi - mp_hi : t_hi - mp_hi + kPrime;
}

constexpr std::uint32_t to_mont(std::uint32_t a) { return mont_mul(a, kR2); }
constexpr std::uint32_t from_mont(std::uint32_t a) { return mont_mul(a, 1); }

// Plain modular product, via the Montgomery form.
constexpr std::uint32_t mul(std::uint32_t a, std::uint32_t b) {
  return mont_mul(to_mont(a), b);
}

constexpr std::uint32_t pow(std::uint32_t base, std::uint64_t e) {
  std::uint32_t result = 1;
  while (e != 0) {
    if (e & 1U) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

constexpr std::uint32_t inverse(std::uint32_t a) { return pow(a, kPrime - 2); }

static_assert(mul(kPrime - 1, kPrime - 1) == 1);
static_assert(pow(kGenerator, (kPrime - 1) / 2) == kPrime - 1);
static_assert(pow(kGenerator, (kPrime - 1) / 3) != 1);

}  // namespace mtjrng::modp
