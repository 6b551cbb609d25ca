#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dvps/channel.hpp"
#include "dvps/dvps.hpp"
#include "dvps/oracle.hpp"
#include "dvps/params.hpp"
#include "dvps/sigma.hpp"

namespace dvps::harness {

// --- local two-party runs ------------------------------------------------------

struct LocalKeys {
  ClientShare client;
  ServerShare server;
};

/// Runs both keygen state machines over an in-process channel. When
/// `transcript` is given it receives every message in the order it was sent.
LocalKeys local_keygen(const Params& pp, Rng& client_rng, Rng& server_rng,
                       const SessionId& sid, std::vector<Message>* transcript = nullptr);

/// Seeds derived from one label, so a run can be replayed party by party.
LocalKeys local_keygen(const Params& pp, const std::string& seed,
                       std::vector<Message>* transcript = nullptr);

/// Blind, respond, finish with the given shares.
Bytes local_decrypt(const Params& pp, const LocalKeys& keys, ServerShare& server,
                    const Ciphertext& c, Rng& rng);

// --- simulators ----------------------------------------------------------------
//
// Each simulator programs `oracle`, which must be the oracle inside `pp`, and
// returns a proof that the honest verifier accepts without any witness.

/// beta, gamma uniform; alpha, alpha' solved for, H programmed to beta.
DdhProof simulate_dhp(const Params& pp, ProgrammableOracle& oracle, const DdhStatement& st,
                      const Transcript& ctx, OracleId id, Rng& rng,
                      std::string_view label = {});

/// Programs H~ to a base with known exponent t: h = g^t, v = u^t for dir = 1
/// and h = u^t, v = g^t for dir = -1, then simulates the embedded DHP.
KneProof simulate_kne(const Params& pp, ProgrammableOracle& oracle, const GroupElement& g,
                      const GroupElement& u, const Transcript& ctx, int dir, const KneOracles& o,
                      Rng& rng);

/// beta' drawn from [0, 2^rho), gamma2 and gamma3 from the honest response
/// ranges, fresh coins; alpha2, alpha3 and A solved for, Hdv programmed.
DvProof simulate_dv(const Params& pp, ProgrammableOracle& oracle, const DvStatement& st,
                    Rng& rng);

/// The server's response proof for an arbitrary w.
ServerResponse simulate_response(const Params& pp, ProgrammableOracle& oracle,
                                 const ClientShare& client, const GroupElement& u_blinded,
                                 const GroupElement& w, const SessionId& sid, Rng& rng);

/// Simulator-side encryption: embeds the challenge `u_challenge` as
/// u = u_challenge^r, puts the same gamma in both HE ciphertexts, sets
/// alpha1 = g^gamma / u^beta, simulates all proofs and draws c2 at random.
Ciphertext simulate_ciphertext(const Params& pp, ProgrammableOracle& oracle,
                               const PublicKey& pub, const GroupElement& u_challenge,
                               const mpz_class& beta, std::size_t message_len, Rng& rng);

/// Equality proof for ciphertexts that may hold different plaintexts, made
/// possible by programming Hcom so that log_g h = tau is known.
EqPaillierProof simulate_eq_paillier(const Params& pp, ProgrammableOracle& oracle,
                                     const PaillierPublicKey& ek1, const HeCiphertext& e1,
                                     const HeCoins& coins1, const mpz_class& x1,
                                     const PaillierPublicKey& ek2, const HeCiphertext& e2,
                                     const HeCoins& coins2, const mpz_class& x2, std::size_t len,
                                     const Transcript& ctx, Rng& rng);

// --- special soundness -----------------------------------------------------------

/// Two accepting transcripts with the same first message.
struct ForkedTranscript {
  DdhStatement statement;
  GroupElement alpha;
  GroupElement alpha_p;
  Scalar beta1, gamma1;
  Scalar beta2, gamma2;
};

enum class ProofKind { kDhp, kKneForward, kKneInverse };

/// r = (gamma1 - gamma2) / (beta1 - beta2). NotForked if the challenges
/// agree; InvalidProof if the result does not satisfy the kind's relation
/// (u = g^r, plus v = h^r for DHP and forward KNE, h = v^r for inverse KNE).
Scalar extract_witness(const ForkedTranscript& ft, ProofKind kind);

struct ForkRun {
  DdhProof proof;
  DdhStatement statement;
};
using ForkProver = std::function<ForkRun(const Params& pp, Rng& rng)>;

/// Runs `prover` against a fresh programmable oracle, then reruns it with the
/// same coins against an oracle that agrees everywhere except at the last
/// `id` challenge query, which is reprogrammed to a different value.
ForkedTranscript fork(const Params& base, OracleId id, const ForkProver& prover,
                      const std::string& seed);

ForkProver dhp_prover(const Scalar& r, const DdhStatement& st, OracleId id,
                      std::string_view label = {});
ForkProver kne_prover(const Scalar& r, const GroupElement& g, const GroupElement& u, int dir,
                      const KneOracles& o);

// --- exponent raising --------------------------------------------------------------

using KneProverFn = std::function<KneProof(const Params& pp)>;

/// Programs H~ at (g, u, ctx) to h = z^(1/t), runs the prover and returns
/// v^t = z^(r^dir). InvalidProof, with nothing returned, if the proof fails.
GroupElement raise_via_proof(const Params& pp, ProgrammableOracle& oracle, const GroupElement& z,
                             const GroupElement& g, const GroupElement& u, const Transcript& ctx,
                             int dir, const KneOracles& o, const KneProverFn& prover, Rng& rng);

// --- instrumentation --------------------------------------------------------------

/// Forwards to another oracle and counts queries per oracle id.
class CountingOracle final : public RandomOracle {
 public:
  explicit CountingOracle(std::shared_ptr<const RandomOracle> inner) : inner_(std::move(inner)) {}

  Scalar to_scalar(OracleId id, const Transcript& t) const override;
  GroupElement to_group(OracleId id, const Transcript& t) const override;
  Bytes to_bits(OracleId id, const Transcript& t, std::size_t nbits) const override;

  std::size_t count(OracleId id) const;
  std::size_t total() const;
  void reset();

 private:
  void bump(OracleId id) const;

  std::shared_ptr<const RandomOracle> inner_;
  mutable std::array<std::atomic<std::size_t>, 16> counts_{};
};

// --- selective failure ------------------------------------------------------------

enum class SelectiveFailureVariant {
  /// Runs the honest DV prover on the oversized r1, so the responses carry it.
  kHonestAlgorithm,
  /// Additionally reduces gamma3 into the accepted range.
  kClampedResponse,
};

/// Ciphertext whose HE plaintext r1 + beta r reaches N exactly when the
/// server's beta >= b, using r1 = N - r b.
Ciphertext craft_selective_failure(const Params& pp, const PublicKey& pub, const mpz_class& b,
                                   SelectiveFailureVariant variant, Rng& rng);

// --- range proof forgery ------------------------------------------------------------

enum class BitForgery {
  /// Honest OR prover on the "digit is 0" branch with the commitment coins.
  kClaimZero,
  /// Honest OR prover on the "digit is 1" branch.
  kClaimOne,
  /// Uniform challenges and responses.
  kRandom,
};

struct RangeForgery {
  HeCiphertext b;
  RangeProof proof;
  /// sum_i digit_i 2^i, with the bits of beta everywhere except `pos`.
  mpz_class value;
  /// Whether the link proof had a valid witness.
  bool link_honest = false;
};

/// Range proof that is honest at every position except `pos`, which commits
/// to `digit` and carries an OR proof made as `how` says.
RangeForgery forge_range_proof(const Params& pp, const PaillierPublicKey& ek, const mpz_class& beta,
                               std::size_t pos, const mpz_class& digit, BitForgery how,
                               const Transcript& ctx, Rng& rng);

}  // namespace dvps::harness
