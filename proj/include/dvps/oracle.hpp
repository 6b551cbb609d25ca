#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dvps/bytes.hpp"
#include "dvps/group.hpp"

namespace dvps {

enum class OracleId : std::uint8_t {
  kH0 = 0x01,
  kH1 = 0x02,
  kH2 = 0x03,
  kH3 = 0x04,
  kHc = 0x05,
  kHprime = 0x06,
  kHdoubleprime = 0x07,
  kHcom = 0x08,
  kHtilde0 = 0x09,
  kHtilde1 = 0x0a,
  kHtilde2 = 0x0b,
  kHdv = 0x0c,
};

std::string_view oracle_name(OracleId id);

inline constexpr std::uint8_t kProtocolVersion = 1;

/// Canonical, typed, length-prefixed encoding of an oracle input. Each part is
/// type(1) || length(4, big-endian) || body, so distinct part lists never
/// collide and an empty context is still a visible zero-length field.
class Transcript {
 public:
  enum class Kind : std::uint8_t {
    kLabel = 1,
    kElement = 2,
    kScalar = 3,
    kInteger = 4,
    kBytes = 5,
  };

  explicit Transcript(const Group& group) : group_(&group) {}

  Transcript& label(std::string_view s);
  Transcript& element(const GroupElement& e);
  Transcript& scalar(const Scalar& s);
  /// Non-negative integer, minimal big-endian.
  Transcript& integer(const mpz_class& v);
  Transcript& bytes(ByteSpan b);
  /// Splices another transcript's parts (used for contexts).
  Transcript& append(const Transcript& other);

  const Bytes& encoded() const { return data_; }
  const Group& group() const { return *group_; }

 private:
  void part(Kind kind, ByteSpan body);

  const Group* group_;
  Bytes data_;
};

/// The oracle interface every protocol routine goes through. The default
/// implementation is a domain-separated hash; the harness substitutes a
/// programmable table.
class RandomOracle {
 public:
  virtual ~RandomOracle() = default;

  /// Uniform in [0, p) of the transcript's group.
  virtual Scalar to_scalar(OracleId id, const Transcript& t) const = 0;
  virtual GroupElement to_group(OracleId id, const Transcript& t) const = 0;
  /// Exactly ceil(nbits/8) bytes, the unused high bits of byte 0 cleared.
  virtual Bytes to_bits(OracleId id, const Transcript& t, std::size_t nbits) const = 0;

  mpz_class to_integer(OracleId id, const Transcript& t, std::size_t nbits) const;
};

/// Prefix-free oracle input: tag || version || transcript.
Bytes oracle_input(OracleId id, const Transcript& t);

class HashOracle final : public RandomOracle {
 public:
  Scalar to_scalar(OracleId id, const Transcript& t) const override;
  GroupElement to_group(OracleId id, const Transcript& t) const override;
  Bytes to_bits(OracleId id, const Transcript& t, std::size_t nbits) const override;
};

std::shared_ptr<const RandomOracle> default_oracle();

/// Table-backed oracle for the test harness. Unprogrammed group queries are
/// answered with g^t for a fresh t derived from the input, and t is recorded,
/// so simulators can know discrete logs of every H-tilde output. Answers are
/// fixed once given. Table access is serialized.
class ProgrammableOracle final : public RandomOracle {
 public:
  enum class Kind { kScalar, kGroup, kBits };

  struct Query {
    Kind kind;
    OracleId id;
    Bytes input;  // transcript encoding, without the tag prefix
  };

  /// `seed` separates independent oracle instances.
  explicit ProgrammableOracle(std::string seed = "programmable");
  /// Copies the table and records, but starts a fresh query log.
  ProgrammableOracle(const ProgrammableOracle& other);

  Scalar to_scalar(OracleId id, const Transcript& t) const override;
  GroupElement to_group(OracleId id, const Transcript& t) const override;
  Bytes to_bits(OracleId id, const Transcript& t, std::size_t nbits) const override;

  /// ProgrammingCollision if the point was already answered.
  void program_scalar(OracleId id, const Transcript& t, const Scalar& value);
  void program_scalar(OracleId id, const Bytes& input, const Scalar& value);
  void program_group(OracleId id, const Transcript& t, const GroupElement& value,
                     std::optional<Scalar> dlog = std::nullopt);
  void program_bits(OracleId id, const Transcript& t, std::size_t nbits, const Bytes& value);
  void program_bits(OracleId id, const Bytes& input, std::size_t nbits, const Bytes& value);

  bool answered(Kind kind, OracleId id, const Transcript& t) const;
  /// Recorded discrete log of a group answer, if known.
  std::optional<Scalar> dlog(OracleId id, const Transcript& t) const;

  std::vector<Query> queries() const;
  void clear_log();

 private:
  using Key = std::tuple<int, std::uint8_t, std::size_t, Bytes>;
  struct Entry {
    Bytes value;
    std::optional<mpz_class> dlog;
  };

  static Key key(Kind kind, OracleId id, const Bytes& input, std::size_t nbits = 0);
  Bytes fallback(Kind kind, OracleId id, const Bytes& input, std::size_t len) const;
  Bytes answer(Kind kind, OracleId id, const Transcript& t, std::size_t nbits) const;
  void insert(const Key& k, Entry e);

  std::string seed_;
  mutable std::mutex mu_;
  mutable std::map<Key, Entry> table_;
  mutable std::vector<Query> log_;
};

}  // namespace dvps
