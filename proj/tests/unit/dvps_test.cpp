#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "doctest.h"

#include "dvps/dvps.hpp"
#include "dvps/errors.hpp"
#include "dvps/harness/harness.hpp"
#include "dvps/rng.hpp"
#include "dvps/wire.hpp"

using namespace dvps;
using namespace dvps::harness;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kConfig;
}

const LocalKeys& toy_keys() {
  static const LocalKeys keys = local_keygen(Params::toy(), "dvps toy keys");
  return keys;
}

const LocalKeys& lite_keys() {
  static const LocalKeys keys = local_keygen(Params::lite(), "dvps lite keys");
  return keys;
}

mpz_class pow2(std::size_t bits) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, bits);
  return r;
}

}  // namespace

TEST_CASE("multiplicative key sharing in the toy group") {
  Params pp = Params::toy();
  const Group& g = pp.g();
  // sk1 = 4, sk2 = 5: pk = 2^20 mod 23 = 6.
  GroupElement pk1 = g.exp_g(4), pk2 = g.exp_g(5);
  CHECK(g.encode(g.exp(pk2, 4)) == Bytes{6});
  CHECK(g.encode(g.exp(pk1, 5)) == Bytes{6});
  // pk = 6, r = 3: shared secret 9 and u = 8; w = (8^z)^5, w^(4/z) = 9 for every z.
  GroupElement pk = g.decode(Bytes{6});
  CHECK(g.encode(g.exp(pk, 3)) == Bytes{9});
  for (long z = 1; z < 11; ++z) {
    Scalar zs = g.scalar(z);
    GroupElement w = g.exp(g.exp(g.decode(Bytes{8}), zs), 5);
    CHECK(g.encode(g.exp(w, g.scalar(4) * zs.inverse())) == Bytes{9});
  }
  CHECK(g.encode(g.exp(g.decode(Bytes{8}), 2)) == Bytes{18});
}

TEST_CASE("keygen output is consistent on both sides") {
  for (Params pp : {Params::toy(), Params::lite()}) {
    const LocalKeys& k = pp.profile == "toy" ? toy_keys() : lite_keys();
    const Group& g = pp.g();
    CHECK(k.client.pub == k.server.pub);
    CHECK(g.exp_g(k.client.sk1) == k.client.pk1);
    CHECK(g.exp_g(k.server.sk2) == k.server.pk2);
    CHECK(g.exp(k.client.pk2, k.client.sk1) == k.client.pub.pk);
    CHECK(g.exp(k.server.pk1, k.server.sk2) == k.client.pub.pk);
    CHECK(g.exp_g(k.client.sk1 * k.server.sk2) == k.client.pub.pk);
    CHECK(k.server.vk1.decrypt(k.server.pub.b1) == k.server.beta);
    CHECK(k.server.vk2.decrypt(k.server.pub.b2) == k.server.beta);
    CHECK(k.server.beta < pow2(pp.rho));
    CHECK(k.server.fail_count.load() == 0);
  }
}

TEST_CASE("tampered share opening aborts the client") {
  Params pp = Params::toy();
  auto [a, b] = memory_channel_pair(std::chrono::seconds(5));
  Rng crng("tamper client"), srng("tamper server");
  SessionId sid = random_session_id(crng);
  std::thread server([&] {
    // A server that commits to one share and opens another.
    Message m1 = b->recv();
    Scalar sk;
    const Group& g = pp.g();
    sk = g.random_nonzero_scalar(srng);
    KneProof pi = kne_prove(pp, sk, g.generator(), g.exp_g(sk), Transcript(g), -1, kKneShare, srng);
    b->send({MsgType::kKg2, sid, share_commitment(pp, g.exp_g(sk), pi)});
    b->recv();
    Scalar other = sk + g.scalar(1);
    ShareOpening open{g.exp_g(other), pi};
    b->send({MsgType::kKg4, sid, serialize(pp, open)});
    try {
      b->recv();
    } catch (...) {
    }
  });
  ErrorCode code = code_of([&] { keygen_client(pp, crng, *a, sid); });
  server.join();
  CHECK(code == ErrorCode::kCommitMismatch);
}

TEST_CASE("end-to-end decryption of 100 messages") {
  for (Params pp : {Params::toy(), Params::lite()}) {
    const LocalKeys& k = pp.profile == "toy" ? toy_keys() : lite_keys();
    ServerShare server = k.server;
    Rng rng("e2e " + pp.profile);
    for (int i = 0; i < 100; ++i) {
      Bytes m = rng.bytes(static_cast<std::size_t>(rng.below(200).get_ui()));
      Ciphertext c = encrypt(pp, k.client.pub, m, rng);
      REQUIRE(verify_ciphertext(pp, k.client.pub, c) == CiphertextCheck::kOk);
      CHECK(local_decrypt(pp, k, server, c, rng) == m);
    }
    CHECK(server.fail_count.load() == 0);
  }
}

TEST_CASE("ciphertext check names the failing proof") {
  Params pp = Params::lite();
  const LocalKeys& k = lite_keys();
  Rng rng("reasons");
  Ciphertext c = encrypt(pp, k.client.pub, to_bytes("m"), rng);
  const Group& g = pp.g();
  Ciphertext bad = c;
  bad.pi.ddh.gamma = bad.pi.ddh.gamma + g.scalar(1);
  CHECK(verify_ciphertext(pp, k.client.pub, bad) == CiphertextCheck::kBadKne);
  bad = c;
  bad.pi1.gamma2 += 1;
  CHECK(verify_ciphertext(pp, k.client.pub, bad) == CiphertextCheck::kBadDv1);
  bad = c;
  bad.pi2.beta_prime ^= 1;
  CHECK(verify_ciphertext(pp, k.client.pub, bad) == CiphertextCheck::kBadDv2);
  bad = c;
  bad.u = g.mul(bad.u, g.generator());
  CHECK(verify_ciphertext(pp, k.client.pub, bad) != CiphertextCheck::kOk);
  CHECK(code_of([&] {
          Rng r("blind bad");
          client_blind(pp, k.client, bad, random_session_id(r), r);
        }) == ErrorCode::kInvalidCiphertext);
}

TEST_CASE("HE plaintexts never wrap") {
  Params pp = Params::lite();
  const LocalKeys& k = lite_keys();
  Rng rng("wrap");
  const Group& g = pp.g();
  const mpz_class bound = pow2(pp.r1_bits()) + pow2(pp.rho + pp.d());
  for (int i = 0; i < 200; ++i) {
    EncryptWitness w;
    Ciphertext c = encrypt(pp, k.client.pub, to_bytes("x"), rng, &w);
    mpz_class gamma = w.r1 + k.server.beta * w.r.value();
    CHECK(gamma < bound);
    CHECK(k.server.vk1.decrypt(c.gamma1) == gamma);
    CHECK(k.server.vk2.decrypt(c.gamma2) == gamma);

    // Replay the client's coins to recompute gamma' = z gamma + z'.
    Rng seed_a("wrap blind " + std::to_string(i)), seed_b("wrap blind " + std::to_string(i));
    SessionId sid{};
    auto [req, st] = client_blind(pp, k.client, c, sid, seed_a);
    Scalar z = g.random_nonzero_scalar(seed_b);
    mpz_class zp = seed_b.bits(pp.zprime_bits());
    CHECK(st.z() == z);
    CHECK(k.server.vk1.decrypt(req.gamma1) == z.value() * gamma + zp);
    CHECK(k.server.vk2.decrypt(req.gamma2) == z.value() * gamma + zp);
  }
}

TEST_CASE("server rejection reasons and the failure counter") {
  Params pp = Params::lite();
  const LocalKeys& k = lite_keys();
  const PublicKey& pub = k.client.pub;
  const Group& g = pp.g();
  Rng rng("server checks");
  Ciphertext c = encrypt(pp, pub, to_bytes("secret"), rng);
  SessionId sid = random_session_id(rng);
  auto [req, st] = client_blind(pp, k.client, c, sid, rng);
  ServerShare server = k.server;

  BlindedRequest bad = req;
  mpz_class gp = server.vk1.decrypt(req.gamma1);
  bad.gamma2 = pub.ek2.encrypt(gp + 1, pub.ek2.random_coins(rng));
  CHECK(code_of([&] { server_respond(pp, server, bad, sid, rng); }) ==
        ErrorCode::kEqualityMismatch);
  CHECK(server.fail_count.load() == 1);

  bad = req;
  bad.alpha1 = g.mul(bad.alpha1, g.generator());
  CHECK(code_of([&] { server_respond(pp, server, bad, sid, rng); }) ==
        ErrorCode::kLinearCheckFailed);
  CHECK(server.fail_count.load() == 2);

  bad = req;
  bad.pi.ddh.beta = bad.pi.ddh.beta + g.scalar(1);
  CHECK(code_of([&] { server_respond(pp, server, bad, sid, rng); }) ==
        ErrorCode::kBadClientProof);
  CHECK(server.fail_count.load() == 3);

  // The same request replayed under another session id.
  SessionId other = sid;
  other[0] ^= 1;
  CHECK(code_of([&] { server_respond(pp, server, req, other, rng); }) ==
        ErrorCode::kBadClientProof);
  CHECK(server.fail_count.load() == 4);

  // Malformed ciphertexts are not counted and trigger no oracle query.
  auto counting = std::make_shared<CountingOracle>(pp.oracle);
  Params counted = pp.with_oracle(counting);
  bad = req;
  bad.gamma1.value = pub.ek1.n2();
  CHECK(code_of([&] { server_respond(counted, server, bad, sid, rng); }) ==
        ErrorCode::kMalformedEncoding);
  CHECK(counting->total() == 0);
  CHECK(server.fail_count.load() == 4);

  // The honest request still works, then the counter reaches the threshold.
  ServerResponse resp = server_respond(pp, server, req, sid, rng);
  CHECK(client_finish(pp, k.client, resp, std::move(st)) == to_bytes("secret"));
  bad = req;
  bad.alpha1 = g.mul(bad.alpha1, g.generator());
  while (server.fail_count.load() < pp.fail_threshold) {
    CHECK(code_of([&] { server_respond(pp, server, bad, sid, rng); }) ==
          ErrorCode::kLinearCheckFailed);
  }
  CHECK(code_of([&] { server_respond(pp, server, req, sid, rng); }) ==
        ErrorCode::kSharePoisoned);
  CHECK(server.fail_count.load() == pp.fail_threshold);
}

TEST_CASE("forged server responses are rejected") {
  Params pp = Params::lite();
  const LocalKeys& k = lite_keys();
  const Group& g = pp.g();
  Rng rng("forged response");
  ServerShare server = k.server;
  Ciphertext c = encrypt(pp, k.client.pub, to_bytes("m"), rng);
  SessionId sid = random_session_id(rng);
  auto [req, st] = client_blind(pp, k.client, c, sid, rng);
  const Scalar z = st.z();
  ServerResponse resp = server_respond(pp, server, req, sid, rng);
  // w shifted by g with the honest proof for the true w.
  ServerResponse shifted = resp;
  shifted.w = g.mul(resp.w, g.generator());
  CHECK(code_of([&] { client_finish(pp, k.client, shifted, std::move(st)); }) ==
        ErrorCode::kBadServerProof);
  int accepted = 0;
  for (int i = 0; i < 1000; ++i) {
    ServerResponse forged{g.exp_g(g.random_scalar(rng)),
                          {g.random_scalar(rng), g.random_scalar(rng)}};
    try {
      client_finish(pp, k.client, forged, BlindState(z, c.c2, req.u, sid));
      ++accepted;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kBadServerProof);
    }
  }
  CHECK(accepted == 0);
}

TEST_CASE("blindings of one ciphertext are unlinkable") {
  Params pp = Params::lite();
  const LocalKeys& k = lite_keys();
  Rng rng("unlinkable");
  Ciphertext c = encrypt(pp, k.client.pub, to_bytes("m"), rng);
  std::set<Bytes> seen;
  for (int i = 0; i < 50; ++i) {
    auto [req, st] = client_blind(pp, k.client, c, random_session_id(rng), rng);
    CHECK(seen.insert(req.u.repr()).second);
    CHECK_FALSE(st.z().is_zero());
  }
}

TEST_CASE("blinded encapsulations collide at the birthday rate") {
  // u' is uniform over the m = 10 non-identity elements, so the number of
  // colliding pairs among n sessions has mean C(n,2)/m and, for uniform bins,
  // variance C(n,2)(1/m)(1 - 1/m) exactly.
  Params pp = Params::toy();
  const LocalKeys& k = toy_keys();
  Rng rng("birthday");
  Ciphertext c = encrypt(pp, k.client.pub, to_bytes("m"), rng);
  REQUIRE(c.u != pp.g().identity());
  constexpr int n = 10000;
  std::map<Bytes, long> counts;
  for (int i = 0; i < n; ++i) {
    auto [req, st] = client_blind(pp, k.client, c, random_session_id(rng), rng);
    CHECK(req.u != pp.g().identity());
    ++counts[req.u.repr()];
  }
  CHECK(counts.size() == 10);
  double collisions = 0;
  for (const auto& [u, cnt] : counts) collisions += 0.5 * static_cast<double>(cnt) * (cnt - 1);
  const double pairs = 0.5 * n * (n - 1.0);
  const double mean = pairs / 10;
  const double sd = std::sqrt(pairs * 0.1 * 0.9);
  MESSAGE("collisions " << collisions << ", expected " << mean << " +- " << sd);
  CHECK(std::abs(collisions - mean) <= 3 * sd);
}

TEST_CASE("selective-failure ciphertexts are stopped by the range gates") {
  Params pp = Params::lite();
  const LocalKeys& k = lite_keys();
  const PublicKey& pub = k.client.pub;
  Rng rng("selective failure");
  auto counting = std::make_shared<CountingOracle>(pp.oracle);
  Params counted = pp.with_oracle(counting);
  for (int i = 0; i < 20; ++i) {
    mpz_class b = rng.bits(pp.rho);
    Ciphertext c = craft_selective_failure(pp, pub, b, SelectiveFailureVariant::kHonestAlgorithm, rng);
    counting->reset();
    DvResult r1 = dv_verify(counted, c.pi1, {c.u, c.alpha1, pub.b1, c.gamma1, &pub.ek1});
    CHECK(r1 == DvResult::kGamma3OutOfRange);
    CHECK(counting->total() == 0);
    CHECK(verify_ciphertext(pp, pub, c) == CiphertextCheck::kBadDv1);

    Ciphertext clamped =
        craft_selective_failure(pp, pub, b, SelectiveFailureVariant::kClampedResponse, rng);
    CHECK(dv_verify(pp, clamped.pi1, {clamped.u, clamped.alpha1, pub.b1, clamped.gamma1, &pub.ek1}) ==
          DvResult::kChallengeMismatch);
  }
}
