#include "dvps/dvps.hpp"

#include "dvps/errors.hpp"
#include "dvps/rng.hpp"

namespace dvps {

SessionId random_session_id(Rng& rng) {
  SessionId sid{};
  rng.fill(sid);
  return sid;
}

Transcript encrypt_ctx(const Params& pp, const GroupElement& alpha1, const HeCiphertext& g1,
                       const HeCiphertext& g2) {
  Transcript t(pp.g());
  t.element(alpha1).integer(g1.value).integer(g2.value);
  return t;
}

Ciphertext encrypt(const Params& pp, const PublicKey& pub, ByteSpan m, Rng& rng,
                   EncryptWitness* witness) {
  const Group& g = pp.g();
  Scalar r = g.random_scalar(rng);
  Ciphertext c;
  c.u = g.exp_g(r);
  c.c2 = dem_seal(g, pp.H(), g.exp(pub.pk, r), m);

  mpz_class r1 = rng.bits(pp.r1_bits());
  c.alpha1 = g.exp_g(r1);
  HeCoins coins1 = pub.ek1.random_coins(rng);
  HeCoins coins2 = pub.ek2.random_coins(rng);
  c.gamma1 = pub.ek1.add(pub.ek1.encrypt(r1, coins1), pub.ek1.scale(pub.b1, r.value()));
  c.gamma2 = pub.ek2.add(pub.ek2.encrypt(r1, coins2), pub.ek2.scale(pub.b2, r.value()));

  c.pi = kne_prove(pp, r, g.generator(), c.u, encrypt_ctx(pp, c.alpha1, c.gamma1, c.gamma2), 1,
                   kKneEncrypt, rng);
  c.pi1 = dv_prove(pp, r, r1, coins1, {c.u, c.alpha1, pub.b1, c.gamma1, &pub.ek1}, rng);
  c.pi2 = dv_prove(pp, r, r1, coins2, {c.u, c.alpha1, pub.b2, c.gamma2, &pub.ek2}, rng);
  if (witness != nullptr) *witness = {r, r1};
  return c;
}

std::string_view ciphertext_check_name(CiphertextCheck c) {
  switch (c) {
    case CiphertextCheck::kOk: return "ok";
    case CiphertextCheck::kBadKne: return "bad_kne";
    case CiphertextCheck::kBadDv1: return "bad_dv1";
    case CiphertextCheck::kBadDv2: return "bad_dv2";
  }
  return "unknown";
}

CiphertextCheck verify_ciphertext(const Params& pp, const PublicKey& pub, const Ciphertext& c) {
  const Group& g = pp.g();
  if (dv_verify(pp, c.pi1, {c.u, c.alpha1, pub.b1, c.gamma1, &pub.ek1}) != DvResult::kOk) {
    return CiphertextCheck::kBadDv1;
  }
  if (dv_verify(pp, c.pi2, {c.u, c.alpha1, pub.b2, c.gamma2, &pub.ek2}) != DvResult::kOk) {
    return CiphertextCheck::kBadDv2;
  }
  if (!kne_verify(pp, c.pi, g.generator(), c.u, encrypt_ctx(pp, c.alpha1, c.gamma1, c.gamma2), 1,
                  kKneEncrypt)) {
    return CiphertextCheck::kBadKne;
  }
  return CiphertextCheck::kOk;
}

Transcript blind_ctx(const Params& pp, const SessionId& sid, const BlindedRequest& req) {
  Transcript t(pp.g());
  t.bytes(sid).element(req.u).element(req.alpha1).integer(req.gamma1.value).integer(
      req.gamma2.value);
  return t;
}

Transcript response_ctx(const Params& pp, const SessionId& sid) {
  Transcript t(pp.g());
  t.bytes(sid);
  return t;
}

std::pair<BlindedRequest, BlindState> client_blind(const Params& pp, const ClientShare& share,
                                                   const Ciphertext& c, const SessionId& sid,
                                                   Rng& rng) {
  CiphertextCheck check = verify_ciphertext(pp, share.pub, c);
  if (check != CiphertextCheck::kOk) {
    throw Error(ErrorCode::kInvalidCiphertext, std::string(ciphertext_check_name(check)));
  }
  const Group& g = pp.g();
  const PublicKey& pub = share.pub;
  Scalar z = g.random_nonzero_scalar(rng);
  mpz_class zp = rng.bits(pp.zprime_bits());

  BlindedRequest req;
  req.u = g.exp(c.u, z);
  req.alpha1 = g.mul(g.exp(c.alpha1, z), g.exp_g(zp));
  req.gamma1 = pub.ek1.add(pub.ek1.scale(c.gamma1, z.value()),
                           pub.ek1.encrypt(zp, pub.ek1.random_coins(rng)));
  req.gamma2 = pub.ek2.add(pub.ek2.scale(c.gamma2, z.value()),
                           pub.ek2.encrypt(zp, pub.ek2.random_coins(rng)));
  req.pi = kne_prove(pp, share.sk1, g.generator(), share.pk1, blind_ctx(pp, sid, req), -1,
                     kKneBlind, rng);
  BlindState st(z, c.c2, req.u, sid);
  return {std::move(req), std::move(st)};
}

ServerResponse server_respond(const Params& pp, ServerShare& share, const BlindedRequest& req,
                              const SessionId& sid, Rng& rng) {
  if (share.fail_count.load() >= pp.fail_threshold) {
    throw Error(ErrorCode::kSharePoisoned, "failure threshold reached");
  }
  auto fail = [&](ErrorCode code, const char* what) {
    share.fail_count.increment();
    throw Error(code, what);
  };
  const Group& g = pp.g();
  const PublicKey& pub = share.pub;
  if (!pub.ek1.valid_ciphertext(req.gamma1) || !pub.ek2.valid_ciphertext(req.gamma2)) {
    throw Error(ErrorCode::kMalformedEncoding, "request ciphertexts");
  }
  mpz_class gamma = share.vk1.decrypt(req.gamma1);
  if (share.vk2.decrypt(req.gamma2) != gamma) fail(ErrorCode::kEqualityMismatch, "plaintexts differ");
  if (g.exp_g(gamma) != g.mul(req.alpha1, g.exp(req.u, share.beta))) {
    fail(ErrorCode::kLinearCheckFailed, "linear relation fails");
  }
  if (!kne_verify(pp, req.pi, g.generator(), share.pk1, blind_ctx(pp, sid, req), -1, kKneBlind)) {
    fail(ErrorCode::kBadClientProof, "client proof rejected");
  }
  ServerResponse resp;
  resp.w = g.exp(req.u, share.sk2);
  resp.pi = dhp_prove(pp, share.sk2, {share.pk1, req.u, pub.pk, resp.w}, response_ctx(pp, sid),
                      OracleId::kH3, rng);
  return resp;
}

Bytes client_finish(const Params& pp, const ClientShare& share, const ServerResponse& resp,
                    BlindState&& st) {
  BlindState local = std::move(st);
  const Group& g = pp.g();
  if (!dhp_verify(pp, resp.pi, {share.pk1, local.u_blinded(), share.pub.pk, resp.w},
                  response_ctx(pp, local.sid()), OracleId::kH3)) {
    throw Error(ErrorCode::kBadServerProof, "server proof rejected");
  }
  GroupElement k = g.exp(resp.w, share.sk1 * local.z().inverse());
  return dem_open(g, pp.H(), k, local.c2());
}

}  // namespace dvps
