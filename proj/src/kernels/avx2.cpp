// Compiled with -mavx2; only reached through table_for(Isa::avx2) after a
// runtime CPU check.
#include <immintrin.h>

#include "mtjrng/kernels/kernels.hpp"
#include "mtjrng/kernels/montgomery.hpp"

namespace mtjrng::kernels {
namespace {

inline __m256i load(const void* p) { return _mm256_loadu_si256(static_cast<const __m256i*>(p)); }
inline void store(void* p, __m256i v) { _mm256_storeu_si256(static_cast<__m256i*>(p), v); }

// Per-byte popcount summed into four 64-bit lanes (nibble lookup).
inline __m256i popcount_lanes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts =
      _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

void xor_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
               std::span<std::uint64_t> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    store(out.data() + i, _mm256_xor_si256(load(a.data() + i), load(b.data() + i)));
  }
  for (; i < n; ++i) out[i] = a[i] ^ b[i];
}

std::uint64_t popcount_words(std::span<const std::uint64_t> words) {
  const std::size_t n = words.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, popcount_lanes(load(words.data() + i)));
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(words[i]));
  return total;
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  const std::size_t n = a.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_epi64(
        acc, popcount_lanes(_mm256_and_si256(load(a.data() + i), load(b.data() + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
  return total;
}

// Lane-wise a >= b for unsigned 32-bit lanes.
inline __m256i geq_u32(__m256i a, __m256i b) {
  return _mm256_cmpeq_epi32(_mm256_max_epu32(a, b), a);
}

inline __m256i add_mod(__m256i a, __m256i b, __m256i p) {
  const __m256i c = _mm256_sub_epi32(p, b);
  const __m256i d = _mm256_sub_epi32(a, c);
  return _mm256_add_epi32(d, _mm256_andnot_si256(geq_u32(a, c), p));
}

inline __m256i sub_mod(__m256i a, __m256i b, __m256i p) {
  const __m256i d = _mm256_sub_epi32(a, b);
  return _mm256_add_epi32(d, _mm256_andnot_si256(geq_u32(a, b), p));
}

inline __m256i mont_mul(__m256i a, __m256i b, __m256i p, __m256i p_inv) {
  const __m256i t_even = _mm256_mul_epu32(a, b);
  const __m256i t_odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), _mm256_srli_epi64(b, 32));
  const __m256i m = _mm256_mullo_epi32(_mm256_mullo_epi32(a, b), p_inv);
  const __m256i mp_even = _mm256_mul_epu32(m, p);
  const __m256i mp_odd = _mm256_mul_epu32(_mm256_srli_epi64(m, 32), p);
  const __m256i t_hi = _mm256_blend_epi32(_mm256_srli_epi64(t_even, 32), t_odd, 0xAA);
  const __m256i mp_hi = _mm256_blend_epi32(_mm256_srli_epi64(mp_even, 32), mp_odd, 0xAA);
  return sub_mod(t_hi, mp_hi, p);
}

void ntt_dif_stage(std::span<std::uint32_t> data, std::span<const std::uint32_t> twiddles,
                   std::size_t half) {
  if (half < 8) {
    scalar_table().ntt_dif_stage(data, twiddles, half);
    return;
  }
  const __m256i p = _mm256_set1_epi32(static_cast<int>(modp::kPrime));
  const __m256i p_inv = _mm256_set1_epi32(static_cast<int>(modp::kPrimeInv));
  for (std::size_t base = 0; base < data.size(); base += 2 * half) {
    std::uint32_t* lo = data.data() + base;
    std::uint32_t* hi = lo + half;
    for (std::size_t j = 0; j < half; j += 8) {
      const __m256i u = load(lo + j);
      const __m256i v = load(hi + j);
      store(lo + j, add_mod(u, v, p));
      store(hi + j, mont_mul(sub_mod(u, v, p), load(twiddles.data() + j), p, p_inv));
    }
  }
}

void ntt_dit_stage(std::span<std::uint32_t> data, std::span<const std::uint32_t> twiddles,
                   std::size_t half) {
  if (half < 8) {
    scalar_table().ntt_dit_stage(data, twiddles, half);
    return;
  }
  const __m256i p = _mm256_set1_epi32(static_cast<int>(modp::kPrime));
  const __m256i p_inv = _mm256_set1_epi32(static_cast<int>(modp::kPrimeInv));
  for (std::size_t base = 0; base < data.size(); base += 2 * half) {
    std::uint32_t* lo = data.data() + base;
    std::uint32_t* hi = lo + half;
    for (std::size_t j = 0; j < half; j += 8) {
      const __m256i u = load(lo + j);
      const __m256i v = mont_mul(load(hi + j), load(twiddles.data() + j), p, p_inv);
      store(lo + j, add_mod(u, v, p));
      store(hi + j, sub_mod(u, v, p));
    }
  }
}

void pointwise_mul(std::span<std::uint32_t> a, std::span<const std::uint32_t> b,
                   std::uint32_t scale) {
  const __m256i p = _mm256_set1_epi32(static_cast<int>(modp::kPrime));
  const __m256i p_inv = _mm256_set1_epi32(static_cast<int>(modp::kPrimeInv));
  const __m256i s = _mm256_set1_epi32(static_cast<int>(scale));
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i prod = mont_mul(load(a.data() + i), load(b.data() + i), p, p_inv);
    store(a.data() + i, mont_mul(prod, s, p, p_inv));
  }
  if (i < n) scalar_table().pointwise_mul(a.subspan(i), b.subspan(i), scale);
}

constexpr KernelTable kAvx2{
    Isa::avx2,     xor_words,     popcount_words, and_popcount,
    ntt_dif_stage, ntt_dit_stage, pointwise_mul,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace mtjrng::kernels
