#include "dvps/bytes.hpp"
#include "dvps/dem.hpp"
#include "dvps/errors.hpp"
#include "dvps/harness/harness.hpp"
#include "dvps/rng.hpp"

namespace dvps::harness {

DdhProof simulate_dhp(const Params& pp, ProgrammableOracle& oracle, const DdhStatement& st,
                      const Transcript& ctx, OracleId id, Rng& rng, std::string_view label) {
  const Group& g = pp.g();
  Scalar beta = g.random_scalar(rng);
  Scalar gamma = g.random_scalar(rng);
  GroupElement alpha = g.div(g.exp(st.g, gamma), g.exp(st.u, beta));
  GroupElement alpha_p = g.div(g.exp(st.h, gamma), g.exp(st.v, beta));
  oracle.program_scalar(id, dhp_transcript(pp, st, alpha, alpha_p, ctx, label), beta);
  return {beta, gamma};
}

KneProof simulate_kne(const Params& pp, ProgrammableOracle& oracle, const GroupElement& g,
                      const GroupElement& u, const Transcript& ctx, int dir, const KneOracles& o,
                      Rng& rng) {
  if (dir != 1 && dir != -1) throw Error(ErrorCode::kInvalidParams, "direction must be +-1");
  const Group& grp = pp.g();
  Scalar t = grp.random_nonzero_scalar(rng);
  GroupElement h, v;
  std::optional<Scalar> dlog;
  if (dir == 1) {
    h = grp.exp(g, t);
    v = grp.exp(u, t);
    if (g == grp.generator()) dlog = t;
  } else {
    // v = h^(1/r) with u = g^r: h = u^t gives v = g^t.
    h = grp.exp(u, t);
    v = grp.exp(g, t);
  }
  oracle.program_group(o.htilde, kne_base_transcript(pp, g, u, ctx, o), h, dlog);
  DdhProof ddh = simulate_dhp(pp, oracle, kne_statement(g, h, u, v, dir), ctx, o.h, rng, o.label);
  return {ddh, v};
}

DvProof simulate_dv(const Params& pp, ProgrammableOracle& oracle, const DvStatement& st,
                    Rng& rng) {
  const Group& g = pp.g();
  const PaillierPublicKey& ek = *st.ek;
  DvProof proof;
  proof.beta_prime = rng.bits(pp.rho);
  proof.gamma2 = rng.bits(pp.r1_bits());
  proof.gamma3 = rng.bits(pp.r3_bits());
  proof.gamma_c = ek.random_coins(rng);
  GroupElement alpha2 = g.div(g.exp_g(proof.gamma2), g.exp(st.u, proof.beta_prime));
  GroupElement alpha3 = g.div(g.exp_g(proof.gamma3), g.exp(st.alpha1, proof.beta_prime));
  HeCiphertext a = ek.sub(ek.add(ek.encrypt(proof.gamma3, proof.gamma_c),
                                 ek.scale(st.big_b, proof.gamma2)),
                          ek.scale(st.gamma, proof.beta_prime));
  oracle.program_bits(OracleId::kHdv, dv_transcript(pp, st, alpha2, alpha3, a), pp.rho,
                      int_to_bytes(proof.beta_prime, byte_len(pp.rho)));
  return proof;
}

ServerResponse simulate_response(const Params& pp, ProgrammableOracle& oracle,
                                 const ClientShare& client, const GroupElement& u_blinded,
                                 const GroupElement& w, const SessionId& sid, Rng& rng) {
  DdhStatement st{client.pk1, u_blinded, client.pub.pk, w};
  return {w, simulate_dhp(pp, oracle, st, response_ctx(pp, sid), OracleId::kH3, rng)};
}

Ciphertext simulate_ciphertext(const Params& pp, ProgrammableOracle& oracle,
                               const PublicKey& pub, const GroupElement& u_challenge,
                               const mpz_class& beta, std::size_t message_len, Rng& rng) {
  const Group& g = pp.g();
  Ciphertext c;
  c.u = g.exp(u_challenge, g.random_nonzero_scalar(rng));
  mpz_class gamma = rng.bits(pp.r1_bits());
  c.alpha1 = g.div(g.exp_g(gamma), g.exp(c.u, beta));
  c.gamma1 = pub.ek1.encrypt(gamma, pub.ek1.random_coins(rng));
  c.gamma2 = pub.ek2.encrypt(gamma, pub.ek2.random_coins(rng));
  c.pi = simulate_kne(pp, oracle, g.generator(), c.u,
                      encrypt_ctx(pp, c.alpha1, c.gamma1, c.gamma2), 1, kKneEncrypt, rng);
  c.pi1 = simulate_dv(pp, oracle, {c.u, c.alpha1, pub.b1, c.gamma1, &pub.ek1}, rng);
  c.pi2 = simulate_dv(pp, oracle, {c.u, c.alpha1, pub.b2, c.gamma2, &pub.ek2}, rng);
  c.c2.c21 = rng.bytes(message_len);
  c.c2.c22 = rng.bytes(kDemTagBits / 8);
  return c;
}

EqPaillierProof simulate_eq_paillier(const Params& pp, ProgrammableOracle& oracle,
                                     const PaillierPublicKey& ek1, const HeCiphertext& e1,
                                     const HeCoins& coins1, const mpz_class& x1,
                                     const PaillierPublicKey& ek2, const HeCiphertext& e2,
                                     const HeCoins& coins2, const mpz_class& x2, std::size_t len,
                                     const Transcript& ctx, Rng& rng) {
  const Group& g = pp.g();
  Transcript ht = eq_paillier_pedersen_transcript(pp, e1, e2, ctx);
  Scalar tau = g.random_nonzero_scalar(rng);
  oracle.program_group(OracleId::kHcom, ht, g.exp_g(tau), tau);
  PedersenParams ped = eq_paillier_pedersen(pp, e1, e2, ctx);

  Scalar z1 = g.random_scalar(rng);
  Scalar z2 = g.random_scalar(rng);
  EqPaillierProof proof;
  proof.c1 = pedersen_commit(g, x1, z1, ped);
  proof.c2 = pedersen_commit(g, x2, z2, ped);
  proof.p1 = eq_pp_prove(pp, ek1, e1, proof.c1, x1, coins1, z1, ped, len,
                         eq_paillier_sub_ctx(pp, ctx, 1), rng);
  proof.p2 = eq_pp_prove(pp, ek2, e2, proof.c2, x2, coins2, z2, ped, len,
                         eq_paillier_sub_ctx(pp, ctx, 2), rng);
  // C1/C2 = g^(x1-x2) h^(z1-z2) = h^((x1-x2)/tau + z1 - z2).
  Scalar delta = g.scalar(x1 - x2) * tau.inverse() + z1 - z2;
  proof.link = kne_prove(pp, delta, ped.h, g.div(proof.c1, proof.c2),
                         eq_paillier_link_ctx(pp, e1, e2, ctx), 1, kKneEquality, rng);
  return proof;
}

}  // namespace dvps::harness
