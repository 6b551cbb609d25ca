#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "dvps/bytes.hpp"
#include "dvps/channel.hpp"
#include "dvps/dvps.hpp"

namespace dvps {

inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kFrameHeaderBytes = 1 + 1 + 16 + 4;
inline constexpr std::uint32_t kMaxPayloadBytes = 16u << 20;

enum class FieldKind {
  kElement,
  kScalar,
  kUint,
  kHeCiphertext,
  kHeCoins,
  kHeModulus,
  kPrime,
  kLength,
  kBytes,
};

/// Position of one field inside a serialized message.
struct FieldSpan {
  std::string name;
  FieldKind kind;
  std::size_t offset;
  std::size_t size;
  /// Paillier N for ciphertext and coin fields, 0 otherwise.
  mpz_class modulus;
};

/// Fixed-width canonical encoder that records where every field lands.
class Writer {
 public:
  explicit Writer(const Params& pp) : pp_(&pp) {}

  void element(const std::string& name, const GroupElement& e);
  void scalar(const std::string& name, const Scalar& s);
  void uint(const std::string& name, const mpz_class& v, std::size_t width);
  void ciphertext(const std::string& name, const HeCiphertext& c, const PaillierPublicKey& ek);
  void coins(const std::string& name, const HeCoins& r, const PaillierPublicKey& ek);
  void modulus(const std::string& name, const PaillierPublicKey& ek);
  void prime(const std::string& name, const mpz_class& p, std::size_t width);
  void raw(const std::string& name, ByteSpan b);
  /// u32 length, then the bytes.
  void var(const std::string& name, ByteSpan b);

  void push(const std::string& scope);
  void pop();

  const Bytes& data() const { return data_; }
  const std::vector<FieldSpan>& spans() const { return spans_; }
  const Params& params() const { return *pp_; }

 private:
  void put(const std::string& name, FieldKind kind, ByteSpan body, const mpz_class& mod = 0);
  std::string scoped(const std::string& name) const;

  const Params* pp_;
  Bytes data_;
  std::vector<FieldSpan> spans_;
  std::vector<std::string> scope_;
};

/// Strict decoder; every failure is MalformedEncoding, NotInSubgroup or
/// IntegerOutOfRange and no partially decoded object escapes.
class Reader {
 public:
  Reader(const Params& pp, ByteSpan data) : pp_(&pp), data_(data) {}

  GroupElement element();
  Scalar scalar();
  mpz_class uint(std::size_t width);
  HeCiphertext ciphertext(const PaillierPublicKey& ek);
  HeCoins coins(const PaillierPublicKey& ek);
  PaillierPublicKey modulus();
  mpz_class prime(std::size_t width);
  Bytes raw(std::size_t n);
  Bytes var(std::size_t max_len = kMaxPayloadBytes);
  /// Throws unless every byte was consumed.
  void finish() const;

  const Params& params() const { return *pp_; }

 private:
  ByteSpan take(std::size_t n);

  const Params* pp_;
  ByteSpan data_;
  std::size_t pos_ = 0;
};

// Widths derived from Params.
std::size_t challenge_bytes(const Params& pp);
std::size_t gamma2_bytes(const Params& pp);
std::size_t gamma3_bytes(const Params& pp);
std::size_t response_bytes(const Params& pp, std::size_t len);

void write(Writer& w, const DdhProof& p);
void write(Writer& w, const KneProof& p);
void write(Writer& w, const DvProof& p, const PaillierPublicKey& ek);
void write(Writer& w, const OrProof& p);
void write(Writer& w, const EqPpProof& p, const PaillierPublicKey& ek, std::size_t len);
void write(Writer& w, const EqPaillierProof& p, const PaillierPublicKey& ek1,
           const PaillierPublicKey& ek2, std::size_t len);
void write(Writer& w, const RangeProof& p, const PaillierPublicKey& ek);
void write(Writer& w, const PublicKey& pub);
void write(Writer& w, const ClientShare& s);
void write(Writer& w, const ServerShare& s);
void write_c1(Writer& w, const Ciphertext& c, const PublicKey& pub);
void write_c2(Writer& w, const DemCiphertext& c2);
void write(Writer& w, const BlindedRequest& r, const PublicKey& pub);
void write(Writer& w, const ServerResponse& r);

DdhProof read_ddh(Reader& r);
KneProof read_kne(Reader& r);
DvProof read_dv(Reader& r, const PaillierPublicKey& ek);
OrProof read_or(Reader& r);
EqPpProof read_eq_pp(Reader& r, const PaillierPublicKey& ek, std::size_t len);
EqPaillierProof read_eq_paillier(Reader& r, const PaillierPublicKey& ek1,
                                 const PaillierPublicKey& ek2, std::size_t len);
RangeProof read_range(Reader& r, const PaillierPublicKey& ek);
PublicKey read_public_key(Reader& r);
ClientShare read_client_share(Reader& r);
ServerShare read_server_share(Reader& r);
/// Fills everything but c2.
Ciphertext read_c1(Reader& r, const PublicKey& pub);
DemCiphertext read_c2(Reader& r);
BlindedRequest read_request(Reader& r, const PublicKey& pub);
ServerResponse read_response(Reader& r);

// Keygen payloads.
struct ShareOpening {
  GroupElement pk_i;
  KneProof pi;
};

struct SetupMessage {
  PaillierPublicKey ek1;
  PaillierPublicKey ek2;
  HeCiphertext b1;
  HeCiphertext b2;
  RangeProof range;
  EqPaillierProof eq;
};

void write(Writer& w, const ShareOpening& o);
void write(Writer& w, const SetupMessage& m);
ShareOpening read_opening(Reader& r);
SetupMessage read_setup(Reader& r);

/// Convenience wrappers that serialize a whole object.
template <typename T, typename... Ctx>
Bytes serialize(const Params& pp, const T& obj, const Ctx&... ctx) {
  Writer w(pp);
  write(w, obj, ctx...);
  return w.data();
}
Bytes serialize_c1(const Params& pp, const Ciphertext& c, const PublicKey& pub);
/// Bit count of c1 summed over minimal field widths: two (d+1)-bit elements,
/// two 2nu-bit HE ciphertexts, the KNE proof (element, rho-bit challenge,
/// d-bit response) and two DV proofs (rho, r1_bits, r3_bits, nu bits each).
std::size_t c1_itemized_bits(const Params& pp);

PublicKey decode_public_key(const Params& pp, ByteSpan b);
BlindedRequest decode_request(const Params& pp, ByteSpan b, const PublicKey& pub);
ServerResponse decode_response(const Params& pp, ByteSpan b);

/// Ciphertext file: magic "DVPSCT01" || c1 || c2.
Bytes encode_ciphertext_file(const Params& pp, const Ciphertext& c, const PublicKey& pub);
Ciphertext decode_ciphertext_file(const Params& pp, ByteSpan b, const PublicKey& pub);

// Frames: version(1) type(1) sid(16) length(4, big-endian) payload.
Bytes encode_frame(const Message& m);
struct FrameHeader {
  std::uint8_t version;
  std::uint8_t type;
  SessionId sid;
  std::uint32_t length;
};
/// Throws MalformedEncoding on a bad version, type or length.
FrameHeader decode_frame_header(ByteSpan header);
Message decode_frame(ByteSpan frame);

}  // namespace dvps
