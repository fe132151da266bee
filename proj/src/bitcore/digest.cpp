#include "mtjrng/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "mtjrng/error.hpp"

namespace mtjrng {
namespace {

using CtxPtr = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

std::string to_hex(std::span<const unsigned char> raw) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(raw.size() * 2);
  for (const auto c : raw) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 15]);
  }
  return out;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw StageError("SHA-256 initialisation failed");
    }
  }
  void update(std::span<const std::uint8_t> bytes) {
    if (EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size()) != 1) {
      throw StageError("SHA-256 update failed");
    }
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> raw{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), raw.data(), &len) != 1) {
      throw StageError("SHA-256 finalisation failed");
    }
    return to_hex(std::span(raw.data(), len));
  }

 private:
  CtxPtr ctx_;
};

}  // namespace

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  Sha256 h;
  h.update(bytes);
  return h.hex();
}

std::string digest(const BitString& bits) {
  Sha256 h;
  std::array<std::uint8_t, 8> length{};
  for (std::size_t i = 0; i < 8; ++i) {
    length[i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(bits.size()) >> (8 * i));
  }
  h.update(length);
  h.update(bits.to_bytes());
  return h.hex();
}

}  // namespace mtjrng
