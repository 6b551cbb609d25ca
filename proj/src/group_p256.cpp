#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <algorithm>
#include <stdexcept>

#include "dvps/errors.hpp"
#include "dvps/group.hpp"
#include "dvps/hash.hpp"

namespace dvps {

namespace {

struct BnCtx {
  BN_CTX* ctx = BN_CTX_new();
  ~BnCtx() { BN_CTX_free(ctx); }
};

BN_CTX* bn_ctx() {
  thread_local BnCtx holder;
  return holder.ctx;
}

struct BnPtr {
  BIGNUM* bn;
  explicit BnPtr(const mpz_class& v) {
    Bytes raw = int_to_bytes(v);
    bn = BN_bin2bn(raw.data(), static_cast<int>(raw.size()), nullptr);
    if (bn == nullptr) throw std::bad_alloc();
  }
  ~BnPtr() { BN_free(bn); }
  BnPtr(const BnPtr&) = delete;
  BnPtr& operator=(const BnPtr&) = delete;
};

struct PointPtr {
  EC_POINT* p;
  explicit PointPtr(const EC_GROUP* g) : p(EC_POINT_new(g)) {
    if (p == nullptr) throw std::bad_alloc();
  }
  ~PointPtr() { EC_POINT_free(p); }
  PointPtr(PointPtr&& o) noexcept : p(o.p) { o.p = nullptr; }
  PointPtr(const PointPtr&) = delete;
  PointPtr& operator=(const PointPtr&) = delete;
};

mpz_class hex_mpz(const char* hex) { return mpz_class(hex, 16); }

// Internal representation: 65-byte uncompressed point, or {0x00} for the
// identity. Both forms are canonical.
class P256 final : public Group {
 public:
  P256()
      : Group("p256",
              hex_mpz("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551")),
        group_(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1)),
        field_(hex_mpz("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff")),
        b_(hex_mpz("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b")) {
    if (group_ == nullptr) throw std::runtime_error("P-256 unavailable");
    generator_ = from_point(EC_GROUP_get0_generator(group_));
  }
  ~P256() override { EC_GROUP_free(group_); }

  std::size_t element_bytes() const override { return 33; }
  GroupElement generator() const override { return generator_; }
  GroupElement identity() const override { return GroupElement(Bytes{0x00}); }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    PointPtr pa = to_point(a), pb = to_point(b), r(group_);
    check(EC_POINT_add(group_, r.p, pa.p, pb.p, bn_ctx()));
    return from_point(r.p);
  }

  GroupElement invert(const GroupElement& a) const override {
    PointPtr pa = to_point(a);
    check(EC_POINT_invert(group_, pa.p, bn_ctx()));
    return from_point(pa.p);
  }

  GroupElement exp(const GroupElement& base, const mpz_class& e) const override {
    PointPtr pb = to_point(base), r(group_);
    BnPtr k(reduce(e));
    check(EC_POINT_mul(group_, r.p, nullptr, pb.p, k.bn, bn_ctx()));
    return from_point(r.p);
  }

  GroupElement exp_g(const mpz_class& e) const override {
    PointPtr r(group_);
    BnPtr k(reduce(e));
    check(EC_POINT_mul(group_, r.p, k.bn, nullptr, nullptr, bn_ctx()));
    return from_point(r.p);
  }

  Bytes encode(const GroupElement& e) const override {
    if (is_identity(e)) return Bytes(33, 0);
    PointPtr p = to_point(e);
    Bytes out(33);
    if (EC_POINT_point2oct(group_, p.p, POINT_CONVERSION_COMPRESSED, out.data(), out.size(),
                           bn_ctx()) != 33) {
      throw std::runtime_error("P-256 encode failed");
    }
    return out;
  }

  GroupElement decode(ByteSpan data) const override {
    if (data.size() != 33) throw Error(ErrorCode::kMalformedEncoding, "P-256 element width");
    if (std::all_of(data.begin(), data.end(), [](std::uint8_t b) { return b == 0; })) {
      return identity();
    }
    if (data[0] != 0x02 && data[0] != 0x03) {
      throw Error(ErrorCode::kMalformedEncoding, "P-256 prefix byte");
    }
    PointPtr p(group_);
    if (EC_POINT_oct2point(group_, p.p, data.data(), data.size(), bn_ctx()) != 1) {
      throw Error(ErrorCode::kNotInSubgroup, "not a P-256 point");
    }
    GroupElement e = from_point(p.p);
    // Cofactor one: on-curve means in the subgroup. Re-encode for canonicality.
    Bytes round = encode(e);
    if (!std::equal(round.begin(), round.end(), data.begin())) {
      throw Error(ErrorCode::kMalformedEncoding, "non-canonical P-256 encoding");
    }
    return e;
  }

  // P256_XMD:SHA-256_SSWU_RO_.
  GroupElement hash_to_group(ByteSpan msg, std::string_view dst) const override {
    Bytes uniform = expand_message_xmd_sha256(msg, to_bytes(dst), 96);
    mpz_class u0 = fmod(int_from_bytes(ByteSpan(uniform).subspan(0, 48)));
    mpz_class u1 = fmod(int_from_bytes(ByteSpan(uniform).subspan(48, 48)));
    return mul(map_to_curve(u0), map_to_curve(u1));
  }

 private:
  static void check(int rc) {
    if (rc != 1) throw std::runtime_error("OpenSSL EC operation failed");
  }

  mpz_class reduce(const mpz_class& e) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), e.get_mpz_t(), order().get_mpz_t());
    return r;
  }

  PointPtr to_point(const GroupElement& e) const {
    PointPtr p(group_);
    if (is_identity(e)) {
      check(EC_POINT_set_to_infinity(group_, p.p));
    } else {
      check(EC_POINT_oct2point(group_, p.p, e.repr().data(), e.repr().size(), bn_ctx()));
    }
    return p;
  }

  GroupElement from_point(const EC_POINT* p) const {
    if (EC_POINT_is_at_infinity(group_, p) == 1) return identity();
    Bytes out(65);
    if (EC_POINT_point2oct(group_, p, POINT_CONVERSION_UNCOMPRESSED, out.data(), out.size(),
                           bn_ctx()) != 65) {
      throw std::runtime_error("P-256 point export failed");
    }
    return GroupElement(std::move(out));
  }

  GroupElement from_affine(const mpz_class& x, const mpz_class& y) const {
    Bytes raw{0x04};
    append(raw, int_to_bytes(x, 32));
    append(raw, int_to_bytes(y, 32));
    PointPtr p(group_);
    check(EC_POINT_oct2point(group_, p.p, raw.data(), raw.size(), bn_ctx()));
    return from_point(p.p);
  }

  mpz_class fmod(const mpz_class& v) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), field_.get_mpz_t());
    return r;
  }
  mpz_class fpow(const mpz_class& v, const mpz_class& e) const {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), v.get_mpz_t(), e.get_mpz_t(), field_.get_mpz_t());
    return r;
  }
  // inv0: zero maps to zero.
  mpz_class finv0(const mpz_class& v) const { return fpow(v, field_ - 2); }
  bool is_square(const mpz_class& v) const {
    return v == 0 || fpow(v, (field_ - 1) / 2) == 1;
  }
  mpz_class curve_rhs(const mpz_class& x) const { return fmod(x * x * x - 3 * x + b_); }

  // Simplified SWU with A = -3, Z = -10; p = 3 mod 4 so sqrt is a^((p+1)/4).
  GroupElement map_to_curve(const mpz_class& u) const {
    const mpz_class a = field_ - 3;
    const mpz_class z = field_ - 10;
    mpz_class u2 = fmod(u * u);
    mpz_class tv1 = finv0(fmod(z * z * u2 * u2 + z * u2));
    mpz_class x1;
    if (tv1 == 0) {
      x1 = fmod(b_ * finv0(fmod(z * a)));
    } else {
      x1 = fmod(fmod(-b_ * finv0(a)) * (1 + tv1));
    }
    mpz_class x = x1;
    mpz_class gx = curve_rhs(x1);
    if (!is_square(gx)) {
      x = fmod(z * u2 * x1);
      gx = curve_rhs(x);
    }
    mpz_class y = fpow(gx, (field_ + 1) / 4);
    if (mpz_odd_p(u.get_mpz_t()) != mpz_odd_p(y.get_mpz_t())) y = fmod(-y);
    return from_affine(x, y);
  }

  EC_GROUP* group_;
  mpz_class field_;
  mpz_class b_;
  GroupElement generator_;
};

}  // namespace

const Group& p256() {
  static const P256 group;
  return group;
}

}  // namespace dvps
