#include "dvps/paillier.hpp"

#include "dvps/errors.hpp"
#include "dvps/rng.hpp"

namespace dvps {

namespace {

mpz_class powm(const mpz_class& b, const mpz_class& e, const mpz_class& m) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class invert(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kIntegerOutOfRange, "value not invertible");
  }
  return r;
}

std::size_t bitlen(const mpz_class& v) { return mpz_sizeinbase(v.get_mpz_t(), 2); }

}  // namespace

PaillierPublicKey::PaillierPublicKey(mpz_class n, std::size_t bits)
    : n_(std::move(n)), n2_(n_ * n_), bits_(bits) {
  if (n_ < 15 || mpz_even_p(n_.get_mpz_t()) || bitlen(n_) != bits_) {
    throw Error(ErrorCode::kIntegerOutOfRange, "Paillier modulus has the wrong shape");
  }
}

HeCiphertext PaillierPublicKey::encrypt(const mpz_class& m, const HeCoins& coins) const {
  if (m < 0 || m >= n_) throw Error(ErrorCode::kPlaintextOutOfRange, "plaintext outside [0, N)");
  mpz_class gm = mod(1 + m * n_, n2_);
  return {mod(gm * powm(coins.value, n_, n2_), n2_)};
}

HeCoins PaillierPublicKey::random_coins(Rng& rng) const {
  for (;;) {
    mpz_class r = rng.range(1, n_);
    if (valid_coins({r})) return {r};
  }
}

HeCiphertext PaillierPublicKey::add(const HeCiphertext& a, const HeCiphertext& b) const {
  return {mod(a.value * b.value, n2_)};
}

HeCiphertext PaillierPublicKey::scale(const HeCiphertext& a, const mpz_class& k) const {
  if (k < 0) return {powm(invert(a.value, n2_), -k, n2_)};
  return {powm(a.value, k, n2_)};
}

HeCiphertext PaillierPublicKey::sub(const HeCiphertext& a, const HeCiphertext& b) const {
  return {mod(a.value * invert(b.value, n2_), n2_)};
}

HeCoins PaillierPublicKey::coins_combine(const HeCoins& r_new, const HeCoins& r_old,
                                         const mpz_class& k) const {
  return {mod(r_new.value * powm(r_old.value, k, n_), n_)};
}

bool PaillierPublicKey::valid_ciphertext(const HeCiphertext& c) const {
  if (c.value <= 0 || c.value >= n2_) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), n_.get_mpz_t());
  return g == 1;
}

bool PaillierPublicKey::valid_coins(const HeCoins& r) const {
  if (r.value <= 0 || r.value >= n_) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r.value.get_mpz_t(), n_.get_mpz_t());
  return g == 1;
}

PaillierSecretKey PaillierSecretKey::from_primes(const mpz_class& p, const mpz_class& q) {
  if (p == q || p < 3 || q < 3) throw Error(ErrorCode::kInvalidParams, "bad Paillier primes");
  mpz_class n = p * q;
  mpz_class phi = (p - 1) * (q - 1);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
  if (g != 1) throw Error(ErrorCode::kInvalidParams, "gcd(N, phi(N)) != 1");

  PaillierSecretKey sk;
  sk.pub_ = PaillierPublicKey(n, bitlen(n));
  sk.p_ = p;
  sk.q_ = q;
  sk.p2_ = p * p;
  sk.q2_ = q * q;
  // h_p = L_p((N+1)^(p-1) mod p^2)^(-1) mod p.
  auto h = [&](const mpz_class& prime, const mpz_class& prime2) {
    mpz_class l = (powm(n + 1, prime - 1, prime2) - 1) / prime;
    return invert(mod(l, prime), prime);
  };
  sk.hp_ = h(p, sk.p2_);
  sk.hq_ = h(q, sk.q2_);
  sk.q_inv_p_ = invert(mod(q, p), p);
  return sk;
}

mpz_class PaillierSecretKey::decrypt_half(const mpz_class& c, const mpz_class& prime,
                                          const mpz_class& prime2, const mpz_class& h) const {
  mpz_class l = (powm(mod(c, prime2), prime - 1, prime2) - 1) / prime;
  return mod(l * h, prime);
}

mpz_class PaillierSecretKey::decrypt(const HeCiphertext& c) const {
  mpz_class mp = decrypt_half(c.value, p_, p2_, hp_);
  mpz_class mq = decrypt_half(c.value, q_, q2_, hq_);
  // Garner: m = mq + q * ((mp - mq) q^-1 mod p).
  return mq + q_ * mod((mp - mq) * q_inv_p_, p_);
}

PaillierSecretKey paillier_keygen(std::size_t bits, Rng& rng) {
  if (bits < 16 || bits % 2 != 0) throw Error(ErrorCode::kInvalidParams, "Paillier modulus size");
  const std::size_t half = bits / 2;
  auto prime = [&] {
    for (;;) {
      mpz_class c = rng.bits(half);
      mpz_setbit(c.get_mpz_t(), half - 1);
      mpz_setbit(c.get_mpz_t(), half - 2);
      mpz_class p;
      mpz_nextprime(p.get_mpz_t(), c.get_mpz_t());
      if (bitlen(p) == half) return p;
    }
  };
  for (;;) {
    mpz_class p = prime();
    mpz_class q = prime();
    if (p == q) continue;
    try {
      PaillierSecretKey sk = PaillierSecretKey::from_primes(p, q);
      if (sk.pub().bits() == bits) return sk;
    } catch (const Error&) {
    }
  }
}

}  // namespace dvps
