#include "projstg/rng.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstring>
#include <stdexcept>

namespace projstg {

std::uint64_t derive_seed(std::uint64_t master, const std::string& context) {
  std::array<unsigned char, 8> prefix{};
  for (int i = 0; i < 8; ++i) {
    prefix[static_cast<std::size_t>(i)] =
        static_cast<unsigned char>((master >> (8 * i)) & 0xffu);
  }

  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int digest_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr ||
      EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, prefix.data(), prefix.size()) != 1 ||
      EVP_DigestUpdate(ctx, context.data(), context.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest.data(), &digest_len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("derive_seed: SHA-256 digest failed");
  }
  EVP_MD_CTX_free(ctx);

  std::uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) {
    seed |= static_cast<std::uint64_t>(digest[static_cast<std::size_t>(i)]) << (8 * i);
  }
  return seed;
}

}  // namespace projstg
