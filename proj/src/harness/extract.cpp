#include "dvps/errors.hpp"
#include "dvps/harness/harness.hpp"
#include "dvps/rng.hpp"

namespace dvps::harness {

namespace {

void first_messages(const Params& pp, const ForkRun& run, GroupElement& alpha,
                    GroupElement& alpha_p) {
  const Group& g = pp.g();
  const DdhStatement& st = run.statement;
  alpha = g.div(g.exp(st.g, run.proof.gamma), g.exp(st.u, run.proof.beta));
  alpha_p = g.div(g.exp(st.h, run.proof.gamma), g.exp(st.v, run.proof.beta));
}

}  // namespace

Scalar extract_witness(const ForkedTranscript& ft, ProofKind kind) {
  if (ft.beta1 == ft.beta2) throw Error(ErrorCode::kNotForked, "challenges agree");
  const Group& g = ft.beta1.group();
  Scalar r = (ft.gamma1 - ft.gamma2) * (ft.beta1 - ft.beta2).inverse();
  // For inverse KNE the statement is (g, v, u, h), so h = v^r is the second check.
  const DdhStatement& st = ft.statement;
  if (g.exp(st.g, r) != st.u || g.exp(st.h, r) != st.v) {
    throw Error(ErrorCode::kInvalidProof,
                kind == ProofKind::kDhp ? "extracted value fails the DHP relation"
                                        : "extracted value fails the KNE relation");
  }
  return r;
}

ForkedTranscript fork(const Params& base, OracleId id, const ForkProver& prover,
                      const std::string& seed) {
  auto first = std::make_shared<ProgrammableOracle>(seed);
  Params pp1 = base.with_oracle(first);
  Rng rng1(seed + "/prover");
  ForkRun run1 = prover(pp1, rng1);

  const ProgrammableOracle::Query* challenge = nullptr;
  std::vector<ProgrammableOracle::Query> log = first->queries();
  for (const auto& q : log) {
    if (q.kind == ProgrammableOracle::Kind::kScalar && q.id == id) challenge = &q;
  }
  if (challenge == nullptr) throw Error(ErrorCode::kInvalidProof, "prover made no challenge query");

  const Group& g = base.g();
  Rng pick(seed + "/fork");
  Scalar beta2 = g.random_scalar(pick);
  while (beta2 == run1.proof.beta) beta2 = g.random_scalar(pick);

  auto second = std::make_shared<ProgrammableOracle>(seed);
  second->program_scalar(id, challenge->input, beta2);
  Params pp2 = base.with_oracle(second);
  Rng rng2(seed + "/prover");
  ForkRun run2 = prover(pp2, rng2);

  if (!(run2.proof.beta == beta2)) throw Error(ErrorCode::kInvalidProof, "rewound run diverged");
  ForkedTranscript ft;
  ft.statement = run1.statement;
  GroupElement a2, ap2;
  first_messages(pp1, run1, ft.alpha, ft.alpha_p);
  first_messages(pp2, run2, a2, ap2);
  if (a2 != ft.alpha || ap2 != ft.alpha_p || !(run2.statement.h == run1.statement.h) ||
      !(run2.statement.v == run1.statement.v)) {
    throw Error(ErrorCode::kInvalidProof, "first messages differ");
  }
  ft.beta1 = run1.proof.beta;
  ft.gamma1 = run1.proof.gamma;
  ft.beta2 = run2.proof.beta;
  ft.gamma2 = run2.proof.gamma;
  return ft;
}

ForkProver dhp_prover(const Scalar& r, const DdhStatement& st, OracleId id,
                      std::string_view label) {
  std::string lab(label);
  return [=](const Params& pp, Rng& rng) {
    Transcript ctx(pp.g());
    return ForkRun{dhp_prove(pp, r, st, ctx, id, rng, lab), st};
  };
}

ForkProver kne_prover(const Scalar& r, const GroupElement& g, const GroupElement& u, int dir,
                      const KneOracles& o) {
  return [=](const Params& pp, Rng& rng) {
    Transcript ctx(pp.g());
    KneProof p = kne_prove(pp, r, g, u, ctx, dir, o, rng);
    GroupElement h = kne_base(pp, g, u, ctx, o);
    return ForkRun{p.ddh, kne_statement(g, h, u, p.v, dir)};
  };
}

GroupElement raise_via_proof(const Params& pp, ProgrammableOracle& oracle, const GroupElement& z,
                             const GroupElement& g, const GroupElement& u, const Transcript& ctx,
                             int dir, const KneOracles& o, const KneProverFn& prover, Rng& rng) {
  const Group& grp = pp.g();
  Scalar t = grp.random_nonzero_scalar(rng);
  oracle.program_group(o.htilde, kne_base_transcript(pp, g, u, ctx, o), grp.exp(z, t.inverse()));
  KneProof proof = prover(pp);
  if (!kne_verify(pp, proof, g, u, ctx, dir, o)) {
    throw Error(ErrorCode::kInvalidProof, "prover's proof rejected");
  }
  return grp.exp(proof.v, t);
}

// --- CountingOracle ---------------------------------------------------------------

void CountingOracle::bump(OracleId id) const {
  counts_[static_cast<std::size_t>(id) & 0x0f].fetch_add(1);
}

Scalar CountingOracle::to_scalar(OracleId id, const Transcript& t) const {
  bump(id);
  return inner_->to_scalar(id, t);
}

GroupElement CountingOracle::to_group(OracleId id, const Transcript& t) const {
  bump(id);
  return inner_->to_group(id, t);
}

Bytes CountingOracle::to_bits(OracleId id, const Transcript& t, std::size_t nbits) const {
  bump(id);
  return inner_->to_bits(id, t, nbits);
}

std::size_t CountingOracle::count(OracleId id) const {
  return counts_[static_cast<std::size_t>(id) & 0x0f].load();
}

std::size_t CountingOracle::total() const {
  std::size_t n = 0;
  for (const auto& c : counts_) n += c.load();
  return n;
}

void CountingOracle::reset() {
  for (auto& c : counts_) c.store(0);
}

}  // namespace dvps::harness
