#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "dvps/bytes.hpp"

namespace dvps {

class Group;
class Rng;

/// Element of Z_p for the order p of a group. The value is reduced on
/// construction, so it always lies in [0, p).
class Scalar {
 public:
  Scalar() = default;
  Scalar(const Group& group, const mpz_class& value);

  const mpz_class& value() const { return value_; }
  const Group& group() const { return *group_; }
  bool valid() const { return group_ != nullptr; }
  bool is_zero() const { return value_ == 0; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  /// Throws ZeroInverse for zero.
  Scalar inverse() const;

  bool operator==(const Scalar& o) const { return value_ == o.value_; }

 private:
  const Group* group_ = nullptr;
  mpz_class value_;
};

/// Opaque group element. The representation is owned by the backend and is
/// canonical, so byte equality is element equality. Use Group::encode for the
/// wire form.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(Bytes repr) : repr_(std::move(repr)) {}

  const Bytes& repr() const { return repr_; }
  bool empty() const { return repr_.empty(); }

  bool operator==(const GroupElement& o) const { return repr_ == o.repr_; }
  bool operator<(const GroupElement& o) const { return repr_ < o.repr_; }

 private:
  Bytes repr_;
};

/// Prime-order cyclic group with generator g. Instances are immutable and
/// live for the whole program; scalars keep a pointer to their group.
class Group {
 public:
  virtual ~Group() = default;

  const std::string& name() const { return name_; }
  const mpz_class& order() const { return order_; }
  /// d, the bit-length of the order.
  std::size_t order_bits() const { return order_bits_; }
  std::size_t scalar_bytes() const { return byte_len(order_bits_); }

  virtual std::size_t element_bytes() const = 0;
  virtual GroupElement generator() const = 0;
  virtual GroupElement identity() const = 0;
  virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement invert(const GroupElement& a) const = 0;
  /// base^(e mod p). Negative exponents are reduced into [0, p) first.
  virtual GroupElement exp(const GroupElement& base, const mpz_class& e) const = 0;
  virtual GroupElement exp_g(const mpz_class& e) const { return exp(generator(), e); }

  virtual Bytes encode(const GroupElement& e) const = 0;
  /// Rejects anything that is not the canonical encoding of an element of the
  /// prime-order subgroup (MalformedEncoding or NotInSubgroup).
  virtual GroupElement decode(ByteSpan data) const = 0;

  /// Deterministic map from (dst, msg) into the group; the caller learns no
  /// discrete log.
  virtual GroupElement hash_to_group(ByteSpan msg, std::string_view dst) const = 0;

  GroupElement exp(const GroupElement& base, const Scalar& e) const { return exp(base, e.value()); }
  GroupElement exp_g(const Scalar& e) const { return exp_g(e.value()); }
  GroupElement div(const GroupElement& a, const GroupElement& b) const { return mul(a, invert(b)); }
  bool is_identity(const GroupElement& e) const { return e == identity(); }

  Scalar scalar(const mpz_class& v) const { return Scalar(*this, v); }
  Scalar random_scalar(Rng& rng) const;
  Scalar random_nonzero_scalar(Rng& rng) const;

 protected:
  Group(std::string name, mpz_class order);

 private:
  std::string name_;
  mpz_class order_;
  std::size_t order_bits_;
};

/// NIST P-256, compressed 33-byte encoding (identity = 33 zero bytes).
const Group& p256();

/// Order-11 subgroup of Z_23^* generated by 2, one-byte encoding.
const Group& toy_group();

/// Subgroup of order q of Z_modulus^* generated by g. Elements encode as
/// fixed-width big-endian residues.
std::unique_ptr<Group> make_schnorr_group(std::string name, const mpz_class& modulus,
                                          const mpz_class& q, const mpz_class& g);

/// "p256" or "toy23"; throws InvalidParams otherwise.
const Group& group_by_name(std::string_view name);

}  // namespace dvps
