#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "dvps/bytes.hpp"

namespace dvps {

/// Deterministic random bit generator: the ChaCha20 keystream under a 256-bit
/// seed. Two instances built from the same seed produce identical streams,
/// which is what golden transcripts and `--seed` rely on.
///
/// Not thread-safe; give every session its own instance (see `fork`).
class Rng {
 public:
  using Seed = std::array<std::uint8_t, 32>;

  explicit Rng(const Seed& seed);
  /// Seed derived as SHA-256 of the label; handy for tests.
  explicit Rng(std::string_view label);
  /// Seeded from the operating system.
  static Rng from_os();

  Rng(Rng&&) noexcept;
  Rng& operator=(Rng&&) noexcept;
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
  ~Rng();

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();

  /// Uniform in [0, 2^bits).
  mpz_class bits(std::size_t bits);
  /// Uniform in [0, bound), rejection sampled. bound must be positive.
  mpz_class below(const mpz_class& bound);
  /// Uniform in [lo, hi).
  mpz_class range(const mpz_class& lo, const mpz_class& hi);

  /// Independent child generator, seeded from this stream.
  Rng fork();

 private:
  void refill();

  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dvps
