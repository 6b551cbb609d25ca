#include <openssl/crypto.h>

#include "dvps/dvps.hpp"
#include "dvps/errors.hpp"
#include "dvps/rng.hpp"
#include "dvps/wire.hpp"

namespace dvps {

namespace {

constexpr std::size_t kCommitBits = 256;

template <typename T>
Message make(MsgType type, const SessionId& sid, const Params& pp, const T& obj) {
  return {type, sid, serialize(pp, obj)};
}

template <typename F>
auto run_guarded(Channel& ch, const SessionId& sid, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kServerRejected && e.code() != ErrorCode::kChannelError) {
      send_reject(ch, sid);
    }
    throw;
  }
}

bool same_digest(const Bytes& a, const Bytes& b) {
  return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

void check_opening(const Params& pp, const Bytes& com, const ShareOpening& open) {
  if (!same_digest(com, share_commitment(pp, open.pk_i, open.pi))) {
    throw Error(ErrorCode::kCommitMismatch, "share opening does not match its commitment");
  }
  if (!kne_verify(pp, open.pi, pp.g().generator(), open.pk_i, Transcript(pp.g()), -1,
                  kKneShare)) {
    throw Error(ErrorCode::kBadShareProof, "share proof rejected");
  }
}

ShareOpening make_share(const Params& pp, Rng& rng, Scalar& sk) {
  const Group& g = pp.g();
  sk = g.random_nonzero_scalar(rng);
  GroupElement pk_i = g.exp_g(sk);
  KneProof pi = kne_prove(pp, sk, g.generator(), pk_i, Transcript(g), -1, kKneShare, rng);
  return {pk_i, pi};
}

}  // namespace

Transcript setup_ctx(const Params& pp, const SessionId& sid, const GroupElement& pk) {
  Transcript t(pp.g());
  t.bytes(sid).element(pk);
  return t;
}

Bytes share_commitment(const Params& pp, const GroupElement& pk_i, const KneProof& pi) {
  Transcript t(pp.g());
  t.label("commit").element(pk_i).bytes(serialize(pp, pi));
  return pp.H().to_bits(OracleId::kHc, t, kCommitBits);
}

Bytes public_key_digest(const Params& pp, const PublicKey& pub) {
  Transcript t(pp.g());
  t.label("confirm").bytes(serialize(pp, pub));
  return pp.H().to_bits(OracleId::kHc, t, kCommitBits);
}

ClientShare keygen_client(const Params& pp, Rng& rng, Channel& ch, const SessionId& sid) {
  return run_guarded(ch, sid, [&] {
    const Group& g = pp.g();
    ClientShare share;
    ShareOpening mine = make_share(pp, rng, share.sk1);
    share.pk1 = mine.pk_i;
    ch.send({MsgType::kKg1, sid, share_commitment(pp, mine.pk_i, mine.pi)});

    Bytes com2 = expect(ch, MsgType::kKg2, sid).payload;
    ch.send(make(MsgType::kKg3, sid, pp, mine));

    Message m4 = expect(ch, MsgType::kKg4, sid);
    Reader r4(pp, m4.payload);
    ShareOpening theirs = read_opening(r4);
    r4.finish();
    check_opening(pp, com2, theirs);
    share.pk2 = theirs.pk_i;
    GroupElement pk = g.exp(share.pk2, share.sk1);

    Message m5 = expect(ch, MsgType::kKg5, sid);
    Reader r5(pp, m5.payload);
    SetupMessage setup = read_setup(r5);
    r5.finish();
    Transcript ctx = setup_ctx(pp, sid, pk);
    if (!range_verify(pp, setup.ek1, setup.b1, setup.range, ctx)) {
      throw Error(ErrorCode::kBadSetupProof, "range proof rejected");
    }
    if (!eq_paillier_verify(pp, setup.ek1, setup.b1, setup.ek2, setup.b2, setup.eq, pp.rho, ctx)) {
      throw Error(ErrorCode::kBadSetupProof, "equality proof rejected");
    }
    share.pub = {pk, setup.ek1, setup.ek2, setup.b1, setup.b2};
    ch.send({MsgType::kKg6, sid, public_key_digest(pp, share.pub)});
    return share;
  });
}

ServerShare keygen_server(const Params& pp, Rng& rng, Channel& ch) {
  Message m1 = ch.recv();
  if (m1.type != MsgType::kKg1) {
    send_reject(ch, m1.sid);
    throw Error(ErrorCode::kChannelError, "keygen must start with KG1");
  }
  const SessionId sid = m1.sid;
  return run_guarded(ch, sid, [&] {
    const Group& g = pp.g();
    if (m1.payload.size() != kCommitBits / 8) {
      throw Error(ErrorCode::kMalformedEncoding, "commitment size");
    }
    Bytes com1 = m1.payload;
    ServerShare share;
    ShareOpening mine = make_share(pp, rng, share.sk2);
    share.pk2 = mine.pk_i;
    ch.send({MsgType::kKg2, sid, share_commitment(pp, mine.pk_i, mine.pi)});

    Message m3 = expect(ch, MsgType::kKg3, sid);
    Reader r3(pp, m3.payload);
    ShareOpening theirs = read_opening(r3);
    r3.finish();
    check_opening(pp, com1, theirs);
    share.pk1 = theirs.pk_i;
    GroupElement pk = g.exp(share.pk1, share.sk2);
    ch.send(make(MsgType::kKg4, sid, pp, mine));

    share.vk1 = paillier_keygen(pp.nu, rng);
    share.vk2 = paillier_keygen(pp.nu, rng);
    const PaillierPublicKey& ek1 = share.vk1.pub();
    const PaillierPublicKey& ek2 = share.vk2.pub();
    share.beta = rng.bits(pp.rho);
    HeCoins c1 = ek1.random_coins(rng), c2 = ek2.random_coins(rng);
    SetupMessage setup{ek1, ek2, ek1.encrypt(share.beta, c1), ek2.encrypt(share.beta, c2), {}, {}};
    Transcript ctx = setup_ctx(pp, sid, pk);
    setup.range = range_prove(pp, ek1, setup.b1, share.beta, c1, ctx, rng);
    setup.eq = eq_paillier_prove(pp, ek1, setup.b1, c1, ek2, setup.b2, c2, share.beta, pp.rho,
                                 ctx, rng);
    ch.send(make(MsgType::kKg5, sid, pp, setup));

    share.pub = {pk, ek1, ek2, setup.b1, setup.b2};
    Bytes confirm = expect(ch, MsgType::kKg6, sid).payload;
    if (!same_digest(confirm, public_key_digest(pp, share.pub))) {
      throw Error(ErrorCode::kBadSetupProof, "client confirmation does not match");
    }
    share.fail_count.store(0);
    return share;
  });
}

}  // namespace dvps
