#include "dvps/group.hpp"

#include "dvps/errors.hpp"
#include "dvps/hash.hpp"
#include "dvps/rng.hpp"

namespace dvps {

namespace {

mpz_class mod_reduce(const mpz_class& v, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

Scalar::Scalar(const Group& group, const mpz_class& value)
    : group_(&group), value_(mod_reduce(value, group.order())) {}

Scalar Scalar::operator+(const Scalar& o) const { return Scalar(*group_, value_ + o.value_); }
Scalar Scalar::operator-(const Scalar& o) const { return Scalar(*group_, value_ - o.value_); }
Scalar Scalar::operator*(const Scalar& o) const { return Scalar(*group_, value_ * o.value_); }
Scalar Scalar::operator-() const { return Scalar(*group_, -value_); }

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::kZeroInverse, "inverse of zero scalar");
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), value_.get_mpz_t(), group_->order().get_mpz_t());
  return Scalar(*group_, inv);
}

Group::Group(std::string name, mpz_class order)
    : name_(std::move(name)),
      order_(std::move(order)),
      order_bits_(mpz_sizeinbase(order_.get_mpz_t(), 2)) {}

Scalar Group::random_scalar(Rng& rng) const { return Scalar(*this, rng.below(order_)); }

Scalar Group::random_nonzero_scalar(Rng& rng) const {
  return Scalar(*this, rng.range(1, order_));
}

namespace {

// Subgroup of order q inside Z_P^*. Elements are residues in [1, P).
class SchnorrGroup final : public Group {
 public:
  SchnorrGroup(std::string name, mpz_class modulus, mpz_class q, mpz_class g)
      : Group(std::move(name), q),
        modulus_(std::move(modulus)),
        width_(byte_len(mpz_sizeinbase(modulus_.get_mpz_t(), 2))),
        g_(std::move(g)) {
    mpz_class chk;
    mpz_powm(chk.get_mpz_t(), g_.get_mpz_t(), order().get_mpz_t(), modulus_.get_mpz_t());
    if (chk != 1 || g_ == 1) throw Error(ErrorCode::kInvalidParams, "generator order mismatch");
  }

  std::size_t element_bytes() const override { return width_; }
  GroupElement generator() const override { return wrap(g_); }
  GroupElement identity() const override { return wrap(1); }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    return wrap(mod_reduce(unwrap(a) * unwrap(b), modulus_));
  }
  GroupElement invert(const GroupElement& a) const override {
    mpz_class inv;
    mpz_class v = unwrap(a);
    mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), modulus_.get_mpz_t());
    return wrap(inv);
  }
  GroupElement exp(const GroupElement& base, const mpz_class& e) const override {
    mpz_class r;
    mpz_class b = unwrap(base);
    mpz_class ee = mod_reduce(e, order());
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), ee.get_mpz_t(), modulus_.get_mpz_t());
    return wrap(r);
  }

  Bytes encode(const GroupElement& e) const override { return e.repr(); }

  GroupElement decode(ByteSpan data) const override {
    if (data.size() != width_) throw Error(ErrorCode::kMalformedEncoding, "element width");
    mpz_class v = int_from_bytes(data);
    if (v == 0 || v >= modulus_) throw Error(ErrorCode::kMalformedEncoding, "residue out of range");
    mpz_class chk;
    mpz_powm(chk.get_mpz_t(), v.get_mpz_t(), order().get_mpz_t(), modulus_.get_mpz_t());
    if (chk != 1) throw Error(ErrorCode::kNotInSubgroup, "residue outside the subgroup");
    return wrap(v);
  }

  // Rejection sampling over exponents t in [1, q) from the XOF stream.
  GroupElement hash_to_group(ByteSpan msg, std::string_view dst) const override {
    Bytes seed = to_bytes(dst);
    seed.push_back(static_cast<std::uint8_t>(dst.size()));
    append(seed, msg);
    const std::size_t tbits = order_bits();
    const std::size_t tbytes = byte_len(tbits);
    for (std::uint32_t ctr = 0;; ++ctr) {
      Bytes in = seed;
      append_u32(in, ctr);
      Bytes out = shake256(in, tbytes);
      out[0] &= static_cast<std::uint8_t>(0xff >> (tbytes * 8 - tbits));
      mpz_class t = int_from_bytes(out);
      if (t != 0 && t < order()) return exp_g(t);
    }
  }

 private:
  GroupElement wrap(const mpz_class& v) const { return GroupElement(int_to_bytes(v, width_)); }
  mpz_class unwrap(const GroupElement& e) const { return int_from_bytes(e.repr()); }

  mpz_class modulus_;
  std::size_t width_;
  mpz_class g_;
};

}  // namespace

std::unique_ptr<Group> make_schnorr_group(std::string name, const mpz_class& modulus,
                                          const mpz_class& q, const mpz_class& g) {
  return std::make_unique<SchnorrGroup>(std::move(name), modulus, q, g);
}

const Group& toy_group() {
  static const std::unique_ptr<Group> group = make_schnorr_group("toy23", 23, 11, 2);
  return *group;
}

const Group& group_by_name(std::string_view name) {
  if (name == "p256") return p256();
  if (name == "toy23") return toy_group();
  throw Error(ErrorCode::kInvalidParams, "unknown group " + std::string(name));
}

}  // namespace dvps
