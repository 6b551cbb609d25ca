#include "dvps/hash.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace dvps {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

}  // namespace

Bytes shake256(ByteSpan data, std::size_t out_len) {
  Bytes out(out_len);
  if (out_len == 0) return out;
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw std::runtime_error("SHAKE256 failed");
  }
  return out;
}

Bytes sha256(ByteSpan data) {
  Bytes out(32);
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  return out;
}

Bytes expand_message_xmd_sha256(ByteSpan msg, ByteSpan dst, std::size_t len_in_bytes) {
  constexpr std::size_t kB = 32;   // b_in_bytes
  constexpr std::size_t kS = 64;   // s_in_bytes
  const std::size_t ell = (len_in_bytes + kB - 1) / kB;
  if (ell > 255 || dst.size() > 255 || len_in_bytes > 65535) {
    throw std::invalid_argument("expand_message_xmd: bad lengths");
  }
  Bytes dst_prime(dst.begin(), dst.end());
  dst_prime.push_back(static_cast<std::uint8_t>(dst.size()));

  Bytes b0_in(kS, 0);
  append(b0_in, msg);
  b0_in.push_back(static_cast<std::uint8_t>(len_in_bytes >> 8));
  b0_in.push_back(static_cast<std::uint8_t>(len_in_bytes));
  b0_in.push_back(0);
  append(b0_in, dst_prime);
  const Bytes b0 = sha256(b0_in);

  Bytes bi_in(b0);
  bi_in.push_back(1);
  append(bi_in, dst_prime);
  Bytes prev = sha256(bi_in);

  Bytes out(prev);
  for (std::size_t i = 2; i <= ell; ++i) {
    Bytes in(kB);
    for (std::size_t j = 0; j < kB; ++j) in[j] = b0[j] ^ prev[j];
    in.push_back(static_cast<std::uint8_t>(i));
    append(in, dst_prime);
    prev = sha256(in);
    append(out, prev);
  }
  out.resize(len_in_bytes);
  return out;
}

}  // namespace dvps
