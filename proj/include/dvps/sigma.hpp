#pragma once

#include <gmpxx.h>

#include <string_view>
#include <vector>

#include "dvps/group.hpp"
#include "dvps/oracle.hpp"
#include "dvps/paillier.hpp"
#include "dvps/params.hpp"

namespace dvps {

class Rng;

// ---------------------------------------------------------------------------
// Discrete-log equality (Chaum-Pedersen): log_g u = log_h v.

struct DdhStatement {
  GroupElement g, h, u, v;
};

struct DdhProof {
  Scalar beta;
  Scalar gamma;
  bool operator==(const DdhProof& o) const { return beta == o.beta && gamma == o.gamma; }
};

/// Challenge transcript: [label] g h u v alpha alpha' ctx.
Transcript dhp_transcript(const Params& pp, const DdhStatement& st, const GroupElement& alpha,
                          const GroupElement& alpha_p, const Transcript& ctx,
                          std::string_view label);

DdhProof dhp_prove(const Params& pp, const Scalar& r, const DdhStatement& st,
                   const Transcript& ctx, OracleId id, Rng& rng, std::string_view label = {});
bool dhp_verify(const Params& pp, const DdhProof& proof, const DdhStatement& st,
                const Transcript& ctx, OracleId id, std::string_view label = {});

// ---------------------------------------------------------------------------
// Knowledge of exponent: given u = g^r, v = h^(r^dir) with h = H~(g, u, ctx).

struct KneOracles {
  OracleId h;
  OracleId htilde;
  std::string_view label;
};

inline constexpr KneOracles kKneShare{OracleId::kH0, OracleId::kHtilde0, "share"};
inline constexpr KneOracles kKneEquality{OracleId::kH0, OracleId::kHtilde0, "eq"};
inline constexpr KneOracles kKneEncrypt{OracleId::kH1, OracleId::kHtilde1, ""};
inline constexpr KneOracles kKneBlind{OracleId::kH2, OracleId::kHtilde2, ""};

struct KneProof {
  DdhProof ddh;
  GroupElement v;
  bool operator==(const KneProof& o) const { return ddh == o.ddh && v == o.v; }
};

Transcript kne_base_transcript(const Params& pp, const GroupElement& g, const GroupElement& u,
                               const Transcript& ctx, const KneOracles& o);
GroupElement kne_base(const Params& pp, const GroupElement& g, const GroupElement& u,
                      const Transcript& ctx, const KneOracles& o);
/// The DDH statement the embedded proof is about, by direction.
DdhStatement kne_statement(const GroupElement& g, const GroupElement& h, const GroupElement& u,
                           const GroupElement& v, int dir);

/// ZeroWitness if dir = -1 and r = 0.
KneProof kne_prove(const Params& pp, const Scalar& r, const GroupElement& g,
                   const GroupElement& u, const Transcript& ctx, int dir, const KneOracles& o,
                   Rng& rng);
bool kne_verify(const Params& pp, const KneProof& proof, const GroupElement& g,
                const GroupElement& u, const Transcript& ctx, int dir, const KneOracles& o);

// ---------------------------------------------------------------------------
// Validity of Gamma = E(r1; coins) B^r for u = g^r, alpha1 = g^r1.

struct DvStatement {
  GroupElement u;
  GroupElement alpha1;
  HeCiphertext big_b;
  HeCiphertext gamma;
  const PaillierPublicKey* ek = nullptr;
};

struct DvProof {
  mpz_class beta_prime;
  mpz_class gamma2;
  mpz_class gamma3;
  HeCoins gamma_c;
  bool operator==(const DvProof& o) const {
    return beta_prime == o.beta_prime && gamma2 == o.gamma2 && gamma3 == o.gamma3 &&
           gamma_c == o.gamma_c;
  }
};

enum class DvResult {
  kOk,
  kChallengeOutOfRange,
  kGamma2OutOfRange,
  kGamma3OutOfRange,
  kBadCoins,
  kBadStatement,
  kChallengeMismatch,
};

std::string_view dv_result_name(DvResult r);

Transcript dv_transcript(const Params& pp, const DvStatement& st, const GroupElement& alpha2,
                         const GroupElement& alpha3, const HeCiphertext& a);

/// WitnessOutOfRange unless 0 <= r1 < 2^(rho+d+kappa).
DvProof dv_prove(const Params& pp, const Scalar& r, const mpz_class& r1, const HeCoins& coins,
                 const DvStatement& st, Rng& rng);
/// Range gates run before any hashing or Paillier arithmetic.
DvResult dv_verify(const Params& pp, const DvProof& proof, const DvStatement& st);

// ---------------------------------------------------------------------------
// Pedersen commitments and the Paillier/Pedersen plaintext equality proof.

struct PedersenParams {
  GroupElement g;
  GroupElement h;
};

GroupElement pedersen_commit(const Group& grp, const mpz_class& x, const Scalar& z,
                             const PedersenParams& ped);

struct EqPpProof {
  HeCiphertext a1;
  GroupElement a2;
  mpz_class e;
  mpz_class s_x;
  Scalar s_z;
  HeCoins s_r;
  bool operator==(const EqPpProof& o) const {
    return a1 == o.a1 && a2 == o.a2 && e == o.e && s_x == o.s_x && s_z == o.s_z && s_r == o.s_r;
  }
};

/// Proves E = E_ek(x; coins) and C = g^x h^z hold the same x, with 0 <= x < 2^len.
EqPpProof eq_pp_prove(const Params& pp, const PaillierPublicKey& ek, const HeCiphertext& e,
                      const GroupElement& c, const mpz_class& x, const HeCoins& coins,
                      const Scalar& z, const PedersenParams& ped, std::size_t len,
                      const Transcript& ctx, Rng& rng);
bool eq_pp_verify(const Params& pp, const PaillierPublicKey& ek, const HeCiphertext& e,
                  const GroupElement& c, const EqPpProof& proof, const PedersenParams& ped,
                  std::size_t len, const Transcript& ctx);

// ---------------------------------------------------------------------------
// Plaintext equality of two Paillier ciphertexts under different keys.

struct EqPaillierProof {
  GroupElement c1;
  GroupElement c2;
  EqPpProof p1;
  EqPpProof p2;
  KneProof link;
  bool operator==(const EqPaillierProof& o) const {
    return c1 == o.c1 && c2 == o.c2 && p1 == o.p1 && p2 == o.p2 && link == o.link;
  }
};

Transcript eq_paillier_pedersen_transcript(const Params& pp, const HeCiphertext& e1,
                                           const HeCiphertext& e2, const Transcript& ctx);
PedersenParams eq_paillier_pedersen(const Params& pp, const HeCiphertext& e1,
                                    const HeCiphertext& e2, const Transcript& ctx);
/// Contexts of the two Paillier/Pedersen halves (index 1 or 2) and of the link.
Transcript eq_paillier_sub_ctx(const Params& pp, const Transcript& ctx, int index);
Transcript eq_paillier_link_ctx(const Params& pp, const HeCiphertext& e1, const HeCiphertext& e2,
                       const Transcript& ctx);

/// Both ciphertexts encrypt x < 2^len.
EqPaillierProof eq_paillier_prove(const Params& pp, const PaillierPublicKey& ek1,
                                  const HeCiphertext& e1, const HeCoins& coins1,
                                  const PaillierPublicKey& ek2, const HeCiphertext& e2,
                                  const HeCoins& coins2, const mpz_class& x, std::size_t len,
                                  const Transcript& ctx, Rng& rng);
bool eq_paillier_verify(const Params& pp, const PaillierPublicKey& ek1, const HeCiphertext& e1,
                        const PaillierPublicKey& ek2, const HeCiphertext& e2,
                        const EqPaillierProof& proof, std::size_t len, const Transcript& ctx);

// ---------------------------------------------------------------------------
// OR of two discrete-log equality statements. Challenges live in Z_(2^rho).

struct OrProof {
  mpz_class beta1;
  mpz_class beta2;
  Scalar gamma1;
  Scalar gamma2;
  bool operator==(const OrProof& o) const {
    return beta1 == o.beta1 && beta2 == o.beta2 && gamma1 == o.gamma1 && gamma2 == o.gamma2;
  }
};

/// `side` is 1 or 2; `w` is the witness for that side.
OrProof or_prove(const Params& pp, const DdhStatement& s1, const DdhStatement& s2, int side,
                 const Scalar& w, const Transcript& ctx, Rng& rng);
bool or_verify(const Params& pp, const OrProof& proof, const DdhStatement& s1,
               const DdhStatement& s2, const Transcript& ctx);

// ---------------------------------------------------------------------------
// Range proof that B encrypts some beta in [0, 2^rho).

struct RangeProof {
  std::vector<GroupElement> c0;
  std::vector<GroupElement> c1;
  std::vector<OrProof> bits;
  EqPpProof link;
  bool operator==(const RangeProof& o) const {
    return c0 == o.c0 && c1 == o.c1 && bits == o.bits && link == o.link;
  }
};

PedersenParams range_pedersen(const Params& pp, const HeCiphertext& b, const Transcript& ctx);
/// Per-position context of the i-th bit proof.
Transcript range_bit_ctx(const Params& pp, const HeCiphertext& b, const Transcript& ctx,
                         std::size_t i);
/// The two statements for bit i: (g, h, c0, c1) or (g, h, c0, c1/g).
std::pair<DdhStatement, DdhStatement> range_bit_statements(const Params& pp,
                                                           const PedersenParams& ped,
                                                           const GroupElement& c0,
                                                           const GroupElement& c1);

/// Context of the proof linking the bit commitments to B.
Transcript range_link_ctx(const Params& pp, const HeCiphertext& b, const Transcript& ctx);
/// prod_i c1[i]^(2^i), the Pedersen commitment to the whole value.
GroupElement range_aggregate(const Group& g, const std::vector<GroupElement>& c1);

/// BitOutOfRange unless 0 <= beta < 2^rho.
RangeProof range_prove(const Params& pp, const PaillierPublicKey& ek, const HeCiphertext& b,
                       const mpz_class& beta, const HeCoins& coins, const Transcript& ctx,
                       Rng& rng);
bool range_verify(const Params& pp, const PaillierPublicKey& ek, const HeCiphertext& b,
                  const RangeProof& proof, const Transcript& ctx);

}  // namespace dvps
