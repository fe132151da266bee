#include <cstdlib>
#include <string>

#include "mtjrng/kernels/kernels.hpp"

namespace mtjrng::kernels {

#if defined(MTJRNG_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_table();
    case Isa::avx2:
#if defined(MTJRNG_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt")) return &avx2_table();
#endif
      return nullptr;
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (const Isa isa : {Isa::scalar, Isa::avx2}) {
    if (table_for(isa) != nullptr) out.push_back(isa);
  }
  return out;
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("MTJRNG_ISA")) {
    const std::string name(forced);
    for (const Isa isa : available_isas()) {
      if (isa_name(isa) == name) return *table_for(isa);
    }
  }
  return *table_for(available_isas().back());
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& selected = select();
  return selected;
}

}  // namespace mtjrng::kernels
