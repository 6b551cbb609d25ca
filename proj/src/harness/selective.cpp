#include "dvps/dem.hpp"
#include "dvps/harness/harness.hpp"
#include "dvps/rng.hpp"

namespace dvps::harness {

namespace {

// The honest DV prover without its witness-size check.
DvProof dv_prove_unchecked(const Params& pp, const Scalar& r, const mpz_class& r1,
                           const HeCoins& coins, const DvStatement& st, Rng& rng) {
  const Group& g = pp.g();
  const PaillierPublicKey& ek = *st.ek;
  mpz_class r2 = rng.bits(pp.r1_bits());
  mpz_class r3 = rng.bits(pp.r3_bits());
  HeCoins rp = ek.random_coins(rng);
  GroupElement alpha2 = g.exp_g(r2);
  GroupElement alpha3 = g.exp_g(r3);
  HeCiphertext a = ek.add(ek.encrypt(r3, rp), ek.scale(st.big_b, r2));
  mpz_class beta = pp.H().to_integer(OracleId::kHdv, dv_transcript(pp, st, alpha2, alpha3, a),
                                     pp.rho);
  return {beta, r2 + beta * r.value(), r3 + beta * r1, ek.coins_combine(rp, coins, beta)};
}

}  // namespace

Ciphertext craft_selective_failure(const Params& pp, const PublicKey& pub, const mpz_class& b,
                                   SelectiveFailureVariant variant, Rng& rng) {
  const Group& g = pp.g();
  Scalar r = g.random_nonzero_scalar(rng);
  const mpz_class& n = pub.ek1.n() < pub.ek2.n() ? pub.ek1.n() : pub.ek2.n();
  mpz_class r1 = n - r.value() * b;

  Ciphertext c;
  c.u = g.exp_g(r);
  c.c2 = dem_seal(g, pp.H(), g.exp(pub.pk, r), to_bytes("probe"));
  c.alpha1 = g.exp_g(r1);
  HeCoins coins1 = pub.ek1.random_coins(rng);
  HeCoins coins2 = pub.ek2.random_coins(rng);
  c.gamma1 = pub.ek1.add(pub.ek1.encrypt(r1, coins1), pub.ek1.scale(pub.b1, r.value()));
  c.gamma2 = pub.ek2.add(pub.ek2.encrypt(r1, coins2), pub.ek2.scale(pub.b2, r.value()));
  c.pi = kne_prove(pp, r, g.generator(), c.u, encrypt_ctx(pp, c.alpha1, c.gamma1, c.gamma2), 1,
                   kKneEncrypt, rng);
  c.pi1 = dv_prove_unchecked(pp, r, r1, coins1, {c.u, c.alpha1, pub.b1, c.gamma1, &pub.ek1}, rng);
  c.pi2 = dv_prove_unchecked(pp, r, r1, coins2, {c.u, c.alpha1, pub.b2, c.gamma2, &pub.ek2}, rng);
  if (variant == SelectiveFailureVariant::kClampedResponse) {
    for (DvProof* p : {&c.pi1, &c.pi2}) {
      mpz_fdiv_r_2exp(p->gamma3.get_mpz_t(), p->gamma3.get_mpz_t(), pp.gamma3_bits());
    }
  }
  return c;
}

}  // namespace dvps::harness
