#include "dvps/errors.hpp"
#include "dvps/harness/harness.hpp"
#include "dvps/rng.hpp"

namespace dvps::harness {

RangeForgery forge_range_proof(const Params& pp, const PaillierPublicKey& ek, const mpz_class& beta,
                               std::size_t pos, const mpz_class& digit, BitForgery how,
                               const Transcript& ctx, Rng& rng) {
  if (pos >= pp.rho) throw Error(ErrorCode::kInvalidParams, "position beyond rho");
  const Group& g = pp.g();

  mpz_class value = 0;
  std::vector<mpz_class> digits(pp.rho);
  for (std::size_t i = 0; i < pp.rho; ++i) {
    digits[i] = i == pos ? digit : mpz_class(mpz_tstbit(beta.get_mpz_t(), i));
    value += digits[i] << static_cast<mp_bitcnt_t>(i);
  }
  mpz_class plain = value % ek.n();
  if (plain < 0) plain += ek.n();

  RangeForgery out;
  out.value = value;
  HeCoins coins = ek.random_coins(rng);
  out.b = ek.encrypt(plain, coins);
  PedersenParams ped = range_pedersen(pp, out.b, ctx);

  Scalar z = g.scalar(0);
  for (std::size_t i = 0; i < pp.rho; ++i) {
    Scalar ri = g.random_scalar(rng);
    Scalar di = g.scalar(digits[i]);
    GroupElement c0 = g.exp(ped.g, ri);
    GroupElement c1 = g.mul(g.exp(ped.g, di), g.exp(ped.h, ri));
    auto [s1, s2] = range_bit_statements(pp, ped, c0, c1);
    const Transcript bctx = range_bit_ctx(pp, out.b, ctx, i);
    OrProof bit;
    if (i != pos) {
      bit = or_prove(pp, s1, s2, static_cast<int>(digits[i].get_ui()) + 1, ri, bctx, rng);
    } else if (how == BitForgery::kClaimZero) {
      bit = or_prove(pp, s1, s2, 1, ri, bctx, rng);
    } else if (how == BitForgery::kClaimOne) {
      bit = or_prove(pp, s1, s2, 2, ri, bctx, rng);
    } else {
      bit = {rng.bits(pp.rho), rng.bits(pp.rho), g.random_scalar(rng), g.random_scalar(rng)};
    }
    out.proof.c0.push_back(c0);
    out.proof.c1.push_back(c1);
    out.proof.bits.push_back(bit);
    z = z + ri * g.scalar(mpz_class(1) << static_cast<mp_bitcnt_t>(i));
  }

  // The link is honest whenever the committed sum is a valid rho-bit witness.
  GroupElement c = range_aggregate(g, out.proof.c1);
  out.link_honest = value >= 0 && mpz_sizeinbase(value.get_mpz_t(), 2) <= pp.rho;
  const mpz_class x = out.link_honest ? value : mpz_class(0);
  out.proof.link =
      eq_pp_prove(pp, ek, out.b, c, x, coins, z, ped, pp.rho, range_link_ctx(pp, out.b, ctx), rng);
  return out;
}

}  // namespace dvps::harness
