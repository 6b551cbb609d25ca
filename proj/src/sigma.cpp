#include "dvps/sigma.hpp"

#include "dvps/errors.hpp"
#include "dvps/rng.hpp"

namespace dvps {

namespace {

mpz_class pow2(std::size_t bits) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, bits);
  return r;
}

bool in_bits(const mpz_class& v, std::size_t bits) { return v >= 0 && v < pow2(bits); }

mpz_class mod_pow2(const mpz_class& v, std::size_t bits) {
  mpz_class r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), v.get_mpz_t(), bits);
  return r;
}

}  // namespace

// --- DHP -------------------------------------------------------------------

Transcript dhp_transcript(const Params& pp, const DdhStatement& st, const GroupElement& alpha,
                          const GroupElement& alpha_p, const Transcript& ctx,
                          std::string_view label) {
  Transcript t(pp.g());
  if (!label.empty()) t.label(label);
  t.element(st.g).element(st.h).element(st.u).element(st.v);
  t.element(alpha).element(alpha_p);
  t.bytes(ctx.encoded());
  return t;
}

DdhProof dhp_prove(const Params& pp, const Scalar& r, const DdhStatement& st,
                   const Transcript& ctx, OracleId id, Rng& rng, std::string_view label) {
  const Group& g = pp.g();
  Scalar s = g.random_scalar(rng);
  GroupElement alpha = g.exp(st.g, s);
  GroupElement alpha_p = g.exp(st.h, s);
  Scalar beta = pp.H().to_scalar(id, dhp_transcript(pp, st, alpha, alpha_p, ctx, label));
  return {beta, s + r * beta};
}

bool dhp_verify(const Params& pp, const DdhProof& proof, const DdhStatement& st,
                const Transcript& ctx, OracleId id, std::string_view label) {
  const Group& g = pp.g();
  if (!proof.beta.valid() || !proof.gamma.valid()) return false;
  GroupElement alpha = g.div(g.exp(st.g, proof.gamma), g.exp(st.u, proof.beta));
  GroupElement alpha_p = g.div(g.exp(st.h, proof.gamma), g.exp(st.v, proof.beta));
  Scalar beta = pp.H().to_scalar(id, dhp_transcript(pp, st, alpha, alpha_p, ctx, label));
  return beta == proof.beta;
}

// --- KNE -------------------------------------------------------------------

Transcript kne_base_transcript(const Params& pp, const GroupElement& g, const GroupElement& u,
                               const Transcript& ctx, const KneOracles& o) {
  Transcript t(pp.g());
  if (!o.label.empty()) t.label(o.label);
  t.element(g).element(u).bytes(ctx.encoded());
  return t;
}

GroupElement kne_base(const Params& pp, const GroupElement& g, const GroupElement& u,
                      const Transcript& ctx, const KneOracles& o) {
  return pp.H().to_group(o.htilde, kne_base_transcript(pp, g, u, ctx, o));
}

DdhStatement kne_statement(const GroupElement& g, const GroupElement& h, const GroupElement& u,
                           const GroupElement& v, int dir) {
  if (dir == 1) return {g, h, u, v};
  return {g, v, u, h};
}

KneProof kne_prove(const Params& pp, const Scalar& r, const GroupElement& g,
                   const GroupElement& u, const Transcript& ctx, int dir, const KneOracles& o,
                   Rng& rng) {
  if (dir != 1 && dir != -1) throw Error(ErrorCode::kInvalidParams, "direction must be +-1");
  if (dir == -1 && r.is_zero()) throw Error(ErrorCode::kZeroWitness, "cannot invert zero");
  const Group& grp = pp.g();
  GroupElement h = kne_base(pp, g, u, ctx, o);
  GroupElement v = grp.exp(h, dir == 1 ? r : r.inverse());
  DdhProof ddh = dhp_prove(pp, r, kne_statement(g, h, u, v, dir), ctx, o.h, rng, o.label);
  return {ddh, v};
}

bool kne_verify(const Params& pp, const KneProof& proof, const GroupElement& g,
                const GroupElement& u, const Transcript& ctx, int dir, const KneOracles& o) {
  if (dir != 1 && dir != -1) return false;
  const Group& grp = pp.g();
  if (proof.v.empty()) return false;
  if (dir == -1 && (grp.is_identity(u) || grp.is_identity(proof.v))) return false;
  GroupElement h = kne_base(pp, g, u, ctx, o);
  return dhp_verify(pp, proof.ddh, kne_statement(g, h, u, proof.v, dir), ctx, o.h, o.label);
}

// --- DV --------------------------------------------------------------------

std::string_view dv_result_name(DvResult r) {
  switch (r) {
    case DvResult::kOk: return "ok";
    case DvResult::kChallengeOutOfRange: return "challenge_out_of_range";
    case DvResult::kGamma2OutOfRange: return "gamma2_out_of_range";
    case DvResult::kGamma3OutOfRange: return "gamma3_out_of_range";
    case DvResult::kBadCoins: return "bad_coins";
    case DvResult::kBadStatement: return "bad_statement";
    case DvResult::kChallengeMismatch: return "challenge_mismatch";
  }
  return "unknown";
}

Transcript dv_transcript(const Params& pp, const DvStatement& st, const GroupElement& alpha2,
                         const GroupElement& alpha3, const HeCiphertext& a) {
  Transcript t(pp.g());
  t.label("dv");
  t.element(pp.g().generator()).element(st.u).element(st.alpha1);
  t.integer(st.gamma.value).element(alpha2).element(alpha3).integer(a.value);
  t.integer(st.big_b.value);
  return t;
}

DvProof dv_prove(const Params& pp, const Scalar& r, const mpz_class& r1, const HeCoins& coins,
                 const DvStatement& st, Rng& rng) {
  if (!in_bits(r1, pp.r1_bits())) throw Error(ErrorCode::kWitnessOutOfRange, "r1 too large");
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
  DvProof proof;
  proof.beta_prime = beta;
  proof.gamma2 = r2 + beta * r.value();
  proof.gamma3 = r3 + beta * r1;
  proof.gamma_c = ek.coins_combine(rp, coins, beta);
  return proof;
}

DvResult dv_verify(const Params& pp, const DvProof& proof, const DvStatement& st) {
  if (!in_bits(proof.beta_prime, pp.rho)) return DvResult::kChallengeOutOfRange;
  if (!in_bits(proof.gamma2, pp.gamma2_bits())) return DvResult::kGamma2OutOfRange;
  if (!in_bits(proof.gamma3, pp.gamma3_bits())) return DvResult::kGamma3OutOfRange;
  const PaillierPublicKey& ek = *st.ek;
  if (!ek.valid_coins(proof.gamma_c)) return DvResult::kBadCoins;
  if (!ek.valid_ciphertext(st.gamma) || !ek.valid_ciphertext(st.big_b)) {
    return DvResult::kBadStatement;
  }
  const Group& g = pp.g();
  GroupElement alpha2 = g.div(g.exp_g(proof.gamma2), g.exp(st.u, proof.beta_prime));
  GroupElement alpha3 = g.div(g.exp_g(proof.gamma3), g.exp(st.alpha1, proof.beta_prime));
  HeCiphertext a = ek.sub(ek.add(ek.encrypt(proof.gamma3, proof.gamma_c),
                                 ek.scale(st.big_b, proof.gamma2)),
                          ek.scale(st.gamma, proof.beta_prime));
  mpz_class beta = pp.H().to_integer(OracleId::kHdv, dv_transcript(pp, st, alpha2, alpha3, a),
                                     pp.rho);
  return beta == proof.beta_prime ? DvResult::kOk : DvResult::kChallengeMismatch;
}

// --- Pedersen / eq_pp ------------------------------------------------------

GroupElement pedersen_commit(const Group& grp, const mpz_class& x, const Scalar& z,
                             const PedersenParams& ped) {
  return grp.mul(grp.exp(ped.g, x), grp.exp(ped.h, z));
}

namespace {

Transcript eq_pp_transcript(const Params& pp, const HeCiphertext& e, const GroupElement& c,
                            const HeCiphertext& a1, const GroupElement& a2,
                            const PedersenParams& ped, const Transcript& ctx) {
  Transcript t(pp.g());
  t.label("eq_pp");
  t.element(ped.g).element(ped.h);
  t.integer(e.value).element(c).integer(a1.value).element(a2);
  t.bytes(ctx.encoded());
  return t;
}

}  // namespace

EqPpProof eq_pp_prove(const Params& pp, const PaillierPublicKey& ek, const HeCiphertext& e,
                      const GroupElement& c, const mpz_class& x, const HeCoins& coins,
                      const Scalar& z, const PedersenParams& ped, std::size_t len,
                      const Transcript& ctx, Rng& rng) {
  if (!in_bits(x, len)) throw Error(ErrorCode::kWitnessOutOfRange, "committed value too large");
  const Group& g = pp.g();
  mpz_class xt = rng.bits(len + pp.rho + pp.kappa);
  Scalar zt = g.random_scalar(rng);
  HeCoins rt = ek.random_coins(rng);
  EqPpProof proof;
  proof.a1 = ek.encrypt(xt, rt);
  proof.a2 = pedersen_commit(g, xt, zt, ped);
  proof.e = pp.H().to_integer(OracleId::kHdv,
                              eq_pp_transcript(pp, e, c, proof.a1, proof.a2, ped, ctx), pp.rho);
  proof.s_x = xt + proof.e * x;
  proof.s_z = zt + z * g.scalar(proof.e);
  proof.s_r = ek.coins_combine(rt, coins, proof.e);
  return proof;
}

bool eq_pp_verify(const Params& pp, const PaillierPublicKey& ek, const HeCiphertext& e,
                  const GroupElement& c, const EqPpProof& proof, const PedersenParams& ped,
                  std::size_t len, const Transcript& ctx) {
  if (!in_bits(proof.e, pp.rho)) return false;
  if (!in_bits(proof.s_x, len + pp.rho + pp.kappa + 1)) return false;
  if (proof.s_x >= ek.n()) return false;
  if (!proof.s_z.valid() || proof.a2.empty()) return false;
  if (!ek.valid_coins(proof.s_r) || !ek.valid_ciphertext(proof.a1) || !ek.valid_ciphertext(e)) {
    return false;
  }
  mpz_class expect = pp.H().to_integer(
      OracleId::kHdv, eq_pp_transcript(pp, e, c, proof.a1, proof.a2, ped, ctx), pp.rho);
  if (expect != proof.e) return false;
  if (!(ek.encrypt(proof.s_x, proof.s_r) == ek.add(proof.a1, ek.scale(e, proof.e)))) return false;
  const Group& g = pp.g();
  return pedersen_commit(g, proof.s_x, proof.s_z, ped) == g.mul(proof.a2, g.exp(c, proof.e));
}

// --- eq_paillier -----------------------------------------------------------

Transcript eq_paillier_pedersen_transcript(const Params& pp, const HeCiphertext& e1,
                                           const HeCiphertext& e2, const Transcript& ctx) {
  Transcript t(pp.g());
  t.label("eq").integer(e1.value).integer(e2.value).bytes(ctx.encoded());
  return t;
}

PedersenParams eq_paillier_pedersen(const Params& pp, const HeCiphertext& e1,
                                    const HeCiphertext& e2, const Transcript& ctx) {
  return {pp.g().generator(),
          pp.H().to_group(OracleId::kHcom, eq_paillier_pedersen_transcript(pp, e1, e2, ctx))};
}

Transcript eq_paillier_sub_ctx(const Params& pp, const Transcript& ctx, int index) {
  Transcript t(pp.g());
  t.label(index == 1 ? "eq.1" : "eq.2").bytes(ctx.encoded());
  return t;
}

Transcript eq_paillier_link_ctx(const Params& pp, const HeCiphertext& e1, const HeCiphertext& e2,
                       const Transcript& ctx) {
  Transcript t(pp.g());
  t.integer(e1.value).integer(e2.value).bytes(ctx.encoded());
  return t;
}

EqPaillierProof eq_paillier_prove(const Params& pp, const PaillierPublicKey& ek1,
                                  const HeCiphertext& e1, const HeCoins& coins1,
                                  const PaillierPublicKey& ek2, const HeCiphertext& e2,
                                  const HeCoins& coins2, const mpz_class& x, std::size_t len,
                                  const Transcript& ctx, Rng& rng) {
  const Group& g = pp.g();
  PedersenParams ped = eq_paillier_pedersen(pp, e1, e2, ctx);
  Scalar z1 = g.random_scalar(rng);
  Scalar z2 = g.random_scalar(rng);
  EqPaillierProof proof;
  proof.c1 = pedersen_commit(g, x, z1, ped);
  proof.c2 = pedersen_commit(g, x, z2, ped);
  proof.p1 = eq_pp_prove(pp, ek1, e1, proof.c1, x, coins1, z1, ped, len, eq_paillier_sub_ctx(pp, ctx, 1),
                         rng);
  proof.p2 = eq_pp_prove(pp, ek2, e2, proof.c2, x, coins2, z2, ped, len, eq_paillier_sub_ctx(pp, ctx, 2),
                         rng);
  // C1/C2 = h^(z1 - z2) when the plaintexts agree.
  proof.link = kne_prove(pp, z1 - z2, ped.h, g.div(proof.c1, proof.c2),
                         eq_paillier_link_ctx(pp, e1, e2, ctx), 1, kKneEquality, rng);
  return proof;
}

bool eq_paillier_verify(const Params& pp, const PaillierPublicKey& ek1, const HeCiphertext& e1,
                        const PaillierPublicKey& ek2, const HeCiphertext& e2,
                        const EqPaillierProof& proof, std::size_t len, const Transcript& ctx) {
  const Group& g = pp.g();
  if (proof.c1.empty() || proof.c2.empty()) return false;
  PedersenParams ped = eq_paillier_pedersen(pp, e1, e2, ctx);
  if (!eq_pp_verify(pp, ek1, e1, proof.c1, proof.p1, ped, len, eq_paillier_sub_ctx(pp, ctx, 1))) {
    return false;
  }
  if (!eq_pp_verify(pp, ek2, e2, proof.c2, proof.p2, ped, len, eq_paillier_sub_ctx(pp, ctx, 2))) {
    return false;
  }
  return kne_verify(pp, proof.link, ped.h, g.div(proof.c1, proof.c2),
                    eq_paillier_link_ctx(pp, e1, e2, ctx), 1, kKneEquality);
}

// --- OR --------------------------------------------------------------------

namespace {

Transcript or_transcript(const Params& pp, const DdhStatement& s1, const DdhStatement& s2,
                         const GroupElement (&alpha)[4], const Transcript& ctx) {
  Transcript t(pp.g());
  t.label("or");
  for (const DdhStatement* s : {&s1, &s2}) t.element(s->g).element(s->h).element(s->u).element(s->v);
  for (const GroupElement& a : alpha) t.element(a);
  t.bytes(ctx.encoded());
  return t;
}

void or_alphas(const Group& g, const DdhStatement& s, const mpz_class& beta, const Scalar& gamma,
               GroupElement& a, GroupElement& ap) {
  a = g.div(g.exp(s.g, gamma), g.exp(s.u, beta));
  ap = g.div(g.exp(s.h, gamma), g.exp(s.v, beta));
}

}  // namespace

OrProof or_prove(const Params& pp, const DdhStatement& s1, const DdhStatement& s2, int side,
                 const Scalar& w, const Transcript& ctx, Rng& rng) {
  if (side != 1 && side != 2) throw Error(ErrorCode::kInvalidParams, "side must be 1 or 2");
  const Group& g = pp.g();
  const DdhStatement& real = side == 1 ? s1 : s2;
  const DdhStatement& fake = side == 1 ? s2 : s1;

  Scalar s = g.random_scalar(rng);
  mpz_class beta_fake = rng.bits(pp.rho);
  Scalar gamma_fake = g.random_scalar(rng);

  GroupElement alpha[4];
  GroupElement* real_a = side == 1 ? &alpha[0] : &alpha[2];
  GroupElement* fake_a = side == 1 ? &alpha[2] : &alpha[0];
  real_a[0] = g.exp(real.g, s);
  real_a[1] = g.exp(real.h, s);
  or_alphas(g, fake, beta_fake, gamma_fake, fake_a[0], fake_a[1]);

  mpz_class beta = pp.H().to_integer(OracleId::kHdv, or_transcript(pp, s1, s2, alpha, ctx), pp.rho);
  mpz_class beta_real = mod_pow2(beta - beta_fake, pp.rho);
  Scalar gamma_real = s + w * g.scalar(beta_real);

  OrProof proof;
  if (side == 1) {
    proof = {beta_real, beta_fake, gamma_real, gamma_fake};
  } else {
    proof = {beta_fake, beta_real, gamma_fake, gamma_real};
  }
  return proof;
}

bool or_verify(const Params& pp, const OrProof& proof, const DdhStatement& s1,
               const DdhStatement& s2, const Transcript& ctx) {
  if (!in_bits(proof.beta1, pp.rho) || !in_bits(proof.beta2, pp.rho)) return false;
  if (!proof.gamma1.valid() || !proof.gamma2.valid()) return false;
  const Group& g = pp.g();
  GroupElement alpha[4];
  or_alphas(g, s1, proof.beta1, proof.gamma1, alpha[0], alpha[1]);
  or_alphas(g, s2, proof.beta2, proof.gamma2, alpha[2], alpha[3]);
  mpz_class beta = pp.H().to_integer(OracleId::kHdv, or_transcript(pp, s1, s2, alpha, ctx), pp.rho);
  return mod_pow2(proof.beta1 + proof.beta2, pp.rho) == beta;
}

// --- range -----------------------------------------------------------------

PedersenParams range_pedersen(const Params& pp, const HeCiphertext& b, const Transcript& ctx) {
  Transcript t(pp.g());
  t.label("range").integer(b.value).bytes(ctx.encoded());
  return {pp.g().generator(), pp.H().to_group(OracleId::kHcom, t)};
}

Transcript range_bit_ctx(const Params& pp, const HeCiphertext& b, const Transcript& ctx,
                         std::size_t i) {
  Transcript t(pp.g());
  t.label("range.bit").integer(i).integer(b.value).bytes(ctx.encoded());
  return t;
}

std::pair<DdhStatement, DdhStatement> range_bit_statements(const Params& pp,
                                                           const PedersenParams& ped,
                                                           const GroupElement& c0,
                                                           const GroupElement& c1) {
  const Group& g = pp.g();
  return {DdhStatement{ped.g, ped.h, c0, c1}, DdhStatement{ped.g, ped.h, c0, g.div(c1, ped.g)}};
}

namespace {

}  // namespace

Transcript range_link_ctx(const Params& pp, const HeCiphertext& b, const Transcript& ctx) {
  Transcript t(pp.g());
  t.label("range.link").integer(b.value).bytes(ctx.encoded());
  return t;
}

GroupElement range_aggregate(const Group& g, const std::vector<GroupElement>& c1) {
  GroupElement acc = g.identity();
  for (std::size_t i = c1.size(); i-- > 0;) acc = g.mul(g.mul(acc, acc), c1[i]);
  return acc;
}

RangeProof range_prove(const Params& pp, const PaillierPublicKey& ek, const HeCiphertext& b,
                       const mpz_class& beta, const HeCoins& coins, const Transcript& ctx,
                       Rng& rng) {
  if (!in_bits(beta, pp.rho)) throw Error(ErrorCode::kBitOutOfRange, "value exceeds rho bits");
  const Group& g = pp.g();
  PedersenParams ped = range_pedersen(pp, b, ctx);
  RangeProof proof;
  Scalar z = g.scalar(0);
  for (std::size_t i = 0; i < pp.rho; ++i) {
    const int bit = mpz_tstbit(beta.get_mpz_t(), i);
    Scalar ri = g.random_scalar(rng);
    GroupElement c0 = g.exp(ped.g, ri);
    GroupElement c1 = g.mul(g.exp(ped.g, bit), g.exp(ped.h, ri));
    auto [s1, s2] = range_bit_statements(pp, ped, c0, c1);
    proof.bits.push_back(or_prove(pp, s1, s2, bit + 1, ri, range_bit_ctx(pp, b, ctx, i), rng));
    proof.c0.push_back(c0);
    proof.c1.push_back(c1);
    z = z + ri * g.scalar(pow2(i));
  }
  GroupElement c = range_aggregate(g, proof.c1);
  proof.link = eq_pp_prove(pp, ek, b, c, beta, coins, z, ped, pp.rho, range_link_ctx(pp, b, ctx),
                           rng);
  return proof;
}

bool range_verify(const Params& pp, const PaillierPublicKey& ek, const HeCiphertext& b,
                  const RangeProof& proof, const Transcript& ctx) {
  if (proof.c0.size() != pp.rho || proof.c1.size() != pp.rho || proof.bits.size() != pp.rho) {
    return false;
  }
  const Group& g = pp.g();
  PedersenParams ped = range_pedersen(pp, b, ctx);
  for (std::size_t i = 0; i < pp.rho; ++i) {
    if (proof.c0[i].empty() || proof.c1[i].empty()) return false;
    auto [s1, s2] = range_bit_statements(pp, ped, proof.c0[i], proof.c1[i]);
    if (!or_verify(pp, proof.bits[i], s1, s2, range_bit_ctx(pp, b, ctx, i))) return false;
  }
  GroupElement c = range_aggregate(g, proof.c1);
  return eq_pp_verify(pp, ek, b, c, proof.link, ped, pp.rho, range_link_ctx(pp, b, ctx));
}

}  // namespace dvps
