#include "dvps/rng.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <stdexcept>

#include "dvps/hash.hpp"

namespace dvps {

namespace {
constexpr std::size_t kBlock = 4096;
}

struct Rng::Impl {
  EVP_CIPHER_CTX* ctx = nullptr;
  Bytes buffer = Bytes(kBlock);
  std::size_t pos = kBlock;

  explicit Impl(const Seed& seed) {
    ctx = EVP_CIPHER_CTX_new();
    // 16-byte IV: 32-bit block counter followed by a 96-bit nonce, all zero.
    const std::uint8_t iv[16] = {0};
    if (ctx == nullptr || EVP_EncryptInit_ex(ctx, EVP_chacha20(), nullptr, seed.data(), iv) != 1) {
      throw std::runtime_error("ChaCha20 init failed");
    }
  }
  ~Impl() { EVP_CIPHER_CTX_free(ctx); }
};

Rng::Rng(const Seed& seed) : impl_(std::make_unique<Impl>(seed)) {}

Rng::Rng(std::string_view label) {
  Bytes digest = sha256(to_bytes(label));
  Seed seed{};
  std::copy(digest.begin(), digest.end(), seed.begin());
  impl_ = std::make_unique<Impl>(seed);
}

Rng Rng::from_os() {
  Seed seed{};
  if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return Rng(seed);
}

Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;
Rng::~Rng() = default;

void Rng::refill() {
  static const Bytes zeros(kBlock, 0);
  int len = 0;
  if (EVP_EncryptUpdate(impl_->ctx, impl_->buffer.data(), &len, zeros.data(),
                        static_cast<int>(kBlock)) != 1 ||
      len != static_cast<int>(kBlock)) {
    throw std::runtime_error("ChaCha20 keystream failed");
  }
  impl_->pos = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (impl_->pos == kBlock) refill();
    std::size_t n = std::min(out.size() - done, kBlock - impl_->pos);
    std::copy_n(impl_->buffer.begin() + static_cast<std::ptrdiff_t>(impl_->pos), n,
                out.begin() + static_cast<std::ptrdiff_t>(done));
    impl_->pos += n;
    done += n;
  }
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint64_t Rng::next_u64() {
  std::uint8_t b[8];
  fill(b);
  std::uint64_t v = 0;
  for (std::uint8_t x : b) v = (v << 8) | x;
  return v;
}

mpz_class Rng::bits(std::size_t nbits) {
  if (nbits == 0) return 0;
  Bytes raw = bytes(byte_len(nbits));
  std::size_t excess = raw.size() * 8 - nbits;
  raw[0] &= static_cast<std::uint8_t>(0xff >> excess);
  return int_from_bytes(raw);
}

mpz_class Rng::below(const mpz_class& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
  const std::size_t nbits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  for (;;) {
    mpz_class v = bits(nbits);
    if (v < bound) return v;
  }
}

mpz_class Rng::range(const mpz_class& lo, const mpz_class& hi) {
  if (hi <= lo) throw std::invalid_argument("Rng::range: empty range");
  return lo + below(hi - lo);
}

Rng Rng::fork() {
  Seed seed{};
  fill(seed);
  return Rng(seed);
}

}  // namespace dvps
