#pragma once

#include <gmpxx.h>

#include <cstddef>

namespace dvps {

class Rng;

/// Paillier ciphertext, an integer mod N^2 coprime to N.
struct HeCiphertext {
  mpz_class value;
  bool operator==(const HeCiphertext& o) const { return value == o.value; }
};

/// Encryption randomness, a unit mod N.
struct HeCoins {
  mpz_class value;
  bool operator==(const HeCoins& o) const { return value == o.value; }
};

/// Public key with generator N + 1.
class PaillierPublicKey {
 public:
  PaillierPublicKey() = default;
  /// `bits` is the declared modulus length; N must have exactly that many bits.
  PaillierPublicKey(mpz_class n, std::size_t bits);

  const mpz_class& n() const { return n_; }
  const mpz_class& n2() const { return n2_; }
  std::size_t bits() const { return bits_; }

  /// E(m; r) = (1 + mN) r^N mod N^2. Throws PlaintextOutOfRange unless 0 <= m < N.
  HeCiphertext encrypt(const mpz_class& m, const HeCoins& coins) const;
  HeCoins random_coins(Rng& rng) const;

  HeCiphertext add(const HeCiphertext& a, const HeCiphertext& b) const;
  /// a^k; k may be negative (inverts first).
  HeCiphertext scale(const HeCiphertext& a, const mpz_class& k) const;
  HeCiphertext sub(const HeCiphertext& a, const HeCiphertext& b) const;

  /// r_new * r_old^k mod N, so that E(m1; r_new) E(m2; r_old)^k = E(m1 + k m2; result).
  HeCoins coins_combine(const HeCoins& r_new, const HeCoins& r_old, const mpz_class& k) const;

  bool valid_ciphertext(const HeCiphertext& c) const;
  bool valid_coins(const HeCoins& r) const;

  std::size_t ciphertext_bytes() const { return 2 * modulus_bytes(); }
  std::size_t modulus_bytes() const { return (bits_ + 7) / 8; }

  bool operator==(const PaillierPublicKey& o) const { return n_ == o.n_ && bits_ == o.bits_; }

 private:
  mpz_class n_;
  mpz_class n2_;
  std::size_t bits_ = 0;
};

class PaillierSecretKey {
 public:
  PaillierSecretKey() = default;
  /// Distinct odd primes with gcd(pq, (p-1)(q-1)) = 1.
  static PaillierSecretKey from_primes(const mpz_class& p, const mpz_class& q);

  const PaillierPublicKey& pub() const { return pub_; }
  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }

  /// CRT decryption. The input must be a valid ciphertext.
  mpz_class decrypt(const HeCiphertext& c) const;

 private:
  mpz_class decrypt_half(const mpz_class& c, const mpz_class& prime, const mpz_class& prime2,
                         const mpz_class& h) const;

  PaillierPublicKey pub_;
  mpz_class p_, q_, p2_, q2_, hp_, hq_, q_inv_p_;
};

/// Primes of bits/2 bits with the top two bits set, so N has exactly `bits` bits.
PaillierSecretKey paillier_keygen(std::size_t bits, Rng& rng);

}  // namespace dvps
