#include "doctest.h"

#include "dvps/errors.hpp"
#include "dvps/paillier.hpp"
#include "dvps/rng.hpp"

using namespace dvps;

namespace {

mpz_class textbook(const mpz_class& m, const mpz_class& r, const mpz_class& n) {
  mpz_class n2 = n * n, a, b;
  mpz_class g = n + 1;
  mpz_powm(a.get_mpz_t(), g.get_mpz_t(), m.get_mpz_t(), n2.get_mpz_t());
  mpz_powm(b.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), n2.get_mpz_t());
  return (a * b) % n2;
}

}  // namespace

TEST_CASE("N = 35 exhaustive truth table") {
  PaillierSecretKey sk = PaillierSecretKey::from_primes(5, 7);
  const PaillierPublicKey& ek = sk.pub();
  CHECK(ek.n() == 35);
  int units = 0;
  for (int r = 1; r < 35; ++r) {
    if (!ek.valid_coins({r})) continue;
    ++units;
    for (int m = 0; m < 35; ++m) {
      HeCiphertext c = ek.encrypt(m, {r});
      CHECK(c.value == textbook(m, r, 35));
      CHECK(sk.decrypt(c) == m);
    }
  }
  CHECK(units == 24);
  CHECK_THROWS_AS(ek.encrypt(35, {1}), Error);
  CHECK_THROWS_AS(ek.encrypt(-1, {1}), Error);
}

TEST_CASE("N = 35 homomorphism") {
  PaillierSecretKey sk = PaillierSecretKey::from_primes(5, 7);
  const PaillierPublicKey& ek = sk.pub();
  CHECK(sk.decrypt(ek.add(ek.encrypt(2, {3}), ek.encrypt(3, {4}))) == 5);
  CHECK(sk.decrypt(ek.scale(ek.encrypt(2, {3}), 3)) == 6);
  CHECK(sk.decrypt(ek.scale(ek.encrypt(2, {3}), 0)) == 0);
  CHECK(sk.decrypt(ek.add(ek.encrypt(30, {2}), ek.encrypt(10, {8}))) == 5);
  CHECK(ek.coins_combine({4}, {9}, 0) == HeCoins{4});

  Rng rng("combine");
  for (int i = 0; i < 50; ++i) {
    mpz_class m1 = rng.below(35), m2 = rng.below(35), k = rng.below(20);
    HeCoins r = ek.random_coins(rng), rp = ek.random_coins(rng);
    HeCiphertext product = ek.add(ek.encrypt(m1, rp), ek.scale(ek.encrypt(m2, r), k));
    mpz_class m = (m1 + k * m2) % 35;
    CHECK(ek.encrypt(m, ek.coins_combine(rp, r, k)) == product);
  }
  HeCoins a{2}, b{3};
  CHECK(ek.encrypt(7, ek.coins_combine(a, b, 1)) == ek.add(ek.encrypt(7, a), ek.encrypt(0, b)));
}

TEST_CASE("generated keys round-trip") {
  Rng rng("paillier keygen");
  PaillierSecretKey sk = paillier_keygen(256, rng);
  const PaillierPublicKey& ek = sk.pub();
  CHECK(ek.bits() == 256);
  CHECK(sk.decrypt(ek.encrypt(0, ek.random_coins(rng))) == 0);
  for (int i = 0; i < 100; ++i) {
    mpz_class m = rng.below(ek.n());
    CHECK(sk.decrypt(ek.encrypt(m, ek.random_coins(rng))) == m);
  }
  HeCoins c = ek.random_coins(rng);
  CHECK(ek.encrypt(5, c) == ek.encrypt(5, c));
  CHECK(sk.decrypt(ek.sub(ek.encrypt(9, c), ek.encrypt(4, c))) == 5);
  CHECK_FALSE(ek.valid_ciphertext({0}));
  CHECK_FALSE(ek.valid_ciphertext({ek.n()}));
  CHECK_FALSE(ek.valid_coins({ek.n() + 1}));
}

TEST_CASE("production-size homomorphism") {
  Rng rng("paillier prod");
  PaillierSecretKey sk = paillier_keygen(3072, rng);
  const PaillierPublicKey& ek = sk.pub();
  CHECK(ek.bits() == 3072);
  for (int i = 0; i < 5; ++i) {
    mpz_class a = rng.bits(850), b = rng.bits(850), k = rng.bits(80);
    HeCoins r1 = ek.random_coins(rng), r2 = ek.random_coins(rng);
    HeCiphertext c = ek.add(ek.encrypt(a, r1), ek.scale(ek.encrypt(b, r2), k));
    CHECK(sk.decrypt(c) == a + k * b);
    CHECK(ek.encrypt(a + k * b, ek.coins_combine(r1, r2, k)) == c);
  }
}
