#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

// Data-parallel inner loops. Every kernel has a portable scalar reference and,
// where the CPU supports it, a vector variant; the variants must agree bit for
// bit. kernels() returns the table picked at startup (best available ISA,
// overridable with the MTJRNG_ISA environment variable).
namespace mtjrng::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  // out[i] = a[i] ^ b[i]
  void (*xor_words)(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                    std::span<std::uint64_t> out);
  std::uint64_t (*popcount_words)(std::span<const std::uint64_t> words);
  // popcount(a[i] & b[i]) summed over i
  std::uint64_t (*and_popcount)(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b);

  // One radix-2 decimation-in-frequency stage with butterfly half-width `half`
  // over `data` (length a multiple of 2*half). `twiddles` holds the
  // Montgomery-form roots w^0 .. w^(half-1) of order 2*half.
  void (*ntt_dif_stage)(std::span<std::uint32_t> data, std::span<const std::uint32_t> twiddles,
                        std::size_t half);
  // The matching decimation-in-time stage.
  void (*ntt_dit_stage)(std::span<std::uint32_t> data, std::span<const std::uint32_t> twiddles,
                        std::size_t half);
  // a[i] = a[i] * b[i] * scale / 2^64 mod p. Passing scale = c * 2^64 mod p
  // multiplies the plain product by c.
  void (*pointwise_mul)(std::span<std::uint32_t> a, std::span<const std::uint32_t> b,
                        std::uint32_t scale);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* table_for(Isa isa);
std::vector<Isa> available_isas();

const KernelTable& kernels();

}  // namespace mtjrng::kernels
