#pragma once

#include <atomic>
#include <cstdint>
#include <utility>

#include "dvps/channel.hpp"
#include "dvps/dem.hpp"
#include "dvps/group.hpp"
#include "dvps/paillier.hpp"
#include "dvps/params.hpp"
#include "dvps/sigma.hpp"

namespace dvps {

class Rng;

struct PublicKey {
  GroupElement pk;
  PaillierPublicKey ek1;
  PaillierPublicKey ek2;
  HeCiphertext b1;
  HeCiphertext b2;
  bool operator==(const PublicKey& o) const {
    return pk == o.pk && ek1 == o.ek1 && ek2 == o.ek2 && b1 == o.b1 && b2 == o.b2;
  }
};

struct ClientShare {
  Scalar sk1;
  GroupElement pk1;
  GroupElement pk2;
  PublicKey pub;
};

/// Copyable atomic; a copy snapshots the current value.
class FailCounter {
 public:
  FailCounter() = default;
  explicit FailCounter(std::uint32_t v) : v_(v) {}
  FailCounter(const FailCounter& o) : v_(o.load()) {}
  FailCounter& operator=(const FailCounter& o) {
    v_.store(o.load());
    return *this;
  }

  std::uint32_t load() const { return v_.load(); }
  void store(std::uint32_t v) { v_.store(v); }
  /// Returns the new value.
  std::uint32_t increment() { return v_.fetch_add(1) + 1; }

 private:
  std::atomic<std::uint32_t> v_{0};
};

struct ServerShare {
  Scalar sk2;
  PaillierSecretKey vk1;
  PaillierSecretKey vk2;
  mpz_class beta;
  GroupElement pk1;
  GroupElement pk2;
  PublicKey pub;
  FailCounter fail_count;
};

struct Ciphertext {
  GroupElement u;
  GroupElement alpha1;
  HeCiphertext gamma1;
  HeCiphertext gamma2;
  KneProof pi;
  DvProof pi1;
  DvProof pi2;
  DemCiphertext c2;
};

struct BlindedRequest {
  GroupElement u;
  GroupElement alpha1;
  HeCiphertext gamma1;
  HeCiphertext gamma2;
  KneProof pi;
};

struct ServerResponse {
  GroupElement w;
  DdhProof pi;
};

/// Client-side secrets of one decryption attempt. Move-only and consumed by
/// client_finish; a failed attempt must start over with a fresh blinding.
class BlindState {
 public:
  BlindState(Scalar z, DemCiphertext c2, GroupElement u_blinded, SessionId sid)
      : z_(std::move(z)), c2_(std::move(c2)), u_(std::move(u_blinded)), sid_(sid) {}
  BlindState(BlindState&&) = default;
  BlindState& operator=(BlindState&&) = default;
  BlindState(const BlindState&) = delete;
  BlindState& operator=(const BlindState&) = delete;

  const Scalar& z() const { return z_; }
  const DemCiphertext& c2() const { return c2_; }
  const GroupElement& u_blinded() const { return u_; }
  const SessionId& sid() const { return sid_; }

 private:
  Scalar z_;
  DemCiphertext c2_;
  GroupElement u_;
  SessionId sid_;
};

// --- key generation ----------------------------------------------------------

/// Runs the client side over `ch`; `sid` names the keygen session.
ClientShare keygen_client(const Params& pp, Rng& rng, Channel& ch, const SessionId& sid);
/// Runs the server side; the session id is taken from the first message.
ServerShare keygen_server(const Params& pp, Rng& rng, Channel& ch);

/// Context of the setup proofs: (sid, pk).
Transcript setup_ctx(const Params& pp, const SessionId& sid, const GroupElement& pk);
Bytes share_commitment(const Params& pp, const GroupElement& pk_i, const KneProof& pi);
Bytes public_key_digest(const Params& pp, const PublicKey& pub);

// --- encryption --------------------------------------------------------------

/// Randomness of an encryption, exposed for tests that recompute integers.
struct EncryptWitness {
  Scalar r;
  mpz_class r1;
};

Ciphertext encrypt(const Params& pp, const PublicKey& pub, ByteSpan m, Rng& rng,
                   EncryptWitness* witness = nullptr);

enum class CiphertextCheck { kOk, kBadKne, kBadDv1, kBadDv2 };
std::string_view ciphertext_check_name(CiphertextCheck c);

/// Context of the encryption proof: (alpha1, Gamma1, Gamma2).
Transcript encrypt_ctx(const Params& pp, const GroupElement& alpha1, const HeCiphertext& g1,
                       const HeCiphertext& g2);
CiphertextCheck verify_ciphertext(const Params& pp, const PublicKey& pub, const Ciphertext& c);

// --- decryption --------------------------------------------------------------

/// Context of the client's blinded proof: (sid, u', alpha1', Gamma1', Gamma2').
Transcript blind_ctx(const Params& pp, const SessionId& sid, const BlindedRequest& req);
/// Context of the server's response proof: (sid).
Transcript response_ctx(const Params& pp, const SessionId& sid);

/// Throws InvalidCiphertext if the ciphertext does not verify.
std::pair<BlindedRequest, BlindState> client_blind(const Params& pp, const ClientShare& share,
                                                   const Ciphertext& c, const SessionId& sid,
                                                   Rng& rng);

/// Server checks of a request. Throws SharePoisoned, EqualityMismatch,
/// LinearCheckFailed or BadClientProof; every semantic failure bumps the
/// share's failure counter.
ServerResponse server_respond(const Params& pp, ServerShare& share, const BlindedRequest& req,
                              const SessionId& sid, Rng& rng);

/// Throws BadServerProof or TagMismatch.
Bytes client_finish(const Params& pp, const ClientShare& share, const ServerResponse& resp,
                    BlindState&& st);

SessionId random_session_id(Rng& rng);

}  // namespace dvps
