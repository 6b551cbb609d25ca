#include "dvps/wire.hpp"

#include <algorithm>

#include "dvps/errors.hpp"

namespace dvps {

namespace {

constexpr std::string_view kCiphertextMagic = "DVPSCT01";

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedEncoding, what);
}

}  // namespace

// --- Writer ------------------------------------------------------------------

std::string Writer::scoped(const std::string& name) const {
  std::string out;
  for (const std::string& s : scope_) out += s + ".";
  return out + name;
}

void Writer::put(const std::string& name, FieldKind kind, ByteSpan body, const mpz_class& mod) {
  spans_.push_back({scoped(name), kind, data_.size(), body.size(), mod});
  append(data_, body);
}

void Writer::push(const std::string& scope) { scope_.push_back(scope); }
void Writer::pop() { scope_.pop_back(); }

void Writer::element(const std::string& name, const GroupElement& e) {
  put(name, FieldKind::kElement, pp_->g().encode(e));
}

void Writer::scalar(const std::string& name, const Scalar& s) {
  put(name, FieldKind::kScalar, int_to_bytes(s.value(), pp_->g().scalar_bytes()));
}

void Writer::uint(const std::string& name, const mpz_class& v, std::size_t width) {
  put(name, FieldKind::kUint, int_to_bytes(v, width));
}

void Writer::ciphertext(const std::string& name, const HeCiphertext& c,
                        const PaillierPublicKey& ek) {
  put(name, FieldKind::kHeCiphertext, int_to_bytes(c.value, ek.ciphertext_bytes()), ek.n());
}

void Writer::coins(const std::string& name, const HeCoins& r, const PaillierPublicKey& ek) {
  put(name, FieldKind::kHeCoins, int_to_bytes(r.value, ek.modulus_bytes()), ek.n());
}

void Writer::modulus(const std::string& name, const PaillierPublicKey& ek) {
  put(name, FieldKind::kHeModulus, int_to_bytes(ek.n(), byte_len(pp_->nu)));
}

void Writer::prime(const std::string& name, const mpz_class& p, std::size_t width) {
  put(name, FieldKind::kPrime, int_to_bytes(p, width));
}

void Writer::raw(const std::string& name, ByteSpan b) { put(name, FieldKind::kBytes, b); }

void Writer::var(const std::string& name, ByteSpan b) {
  Bytes len;
  append_u32(len, static_cast<std::uint32_t>(b.size()));
  put(name + ".len", FieldKind::kLength, len);
  put(name, FieldKind::kBytes, b);
}

// --- Reader ------------------------------------------------------------------

ByteSpan Reader::take(std::size_t n) {
  if (data_.size() - pos_ < n) malformed("truncated input");
  ByteSpan out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

GroupElement Reader::element() { return pp_->g().decode(take(pp_->g().element_bytes())); }

Scalar Reader::scalar() {
  mpz_class v = int_from_bytes(take(pp_->g().scalar_bytes()));
  if (v >= pp_->g().order()) throw Error(ErrorCode::kIntegerOutOfRange, "scalar not reduced");
  return pp_->g().scalar(v);
}

mpz_class Reader::uint(std::size_t width) { return int_from_bytes(take(width)); }

HeCiphertext Reader::ciphertext(const PaillierPublicKey& ek) {
  HeCiphertext c{int_from_bytes(take(ek.ciphertext_bytes()))};
  if (!ek.valid_ciphertext(c)) throw Error(ErrorCode::kIntegerOutOfRange, "invalid ciphertext");
  return c;
}

HeCoins Reader::coins(const PaillierPublicKey& ek) {
  HeCoins r{int_from_bytes(take(ek.modulus_bytes()))};
  if (!ek.valid_coins(r)) throw Error(ErrorCode::kIntegerOutOfRange, "invalid coins");
  return r;
}

PaillierPublicKey Reader::modulus() {
  mpz_class n = int_from_bytes(take(byte_len(pp_->nu)));
  return PaillierPublicKey(n, pp_->nu);
}

mpz_class Reader::prime(std::size_t width) { return int_from_bytes(take(width)); }

Bytes Reader::raw(std::size_t n) {
  ByteSpan s = take(n);
  return Bytes(s.begin(), s.end());
}

Bytes Reader::var(std::size_t max_len) {
  std::uint32_t len = static_cast<std::uint32_t>(int_from_bytes(take(4)).get_ui());
  if (len > max_len) malformed("length field too large");
  return raw(len);
}

void Reader::finish() const {
  if (pos_ != data_.size()) malformed("trailing bytes");
}

// --- widths ------------------------------------------------------------------

std::size_t challenge_bytes(const Params& pp) { return byte_len(pp.rho); }
std::size_t gamma2_bytes(const Params& pp) { return byte_len(pp.gamma2_bits()); }
std::size_t gamma3_bytes(const Params& pp) { return byte_len(pp.gamma3_bits()); }
std::size_t response_bytes(const Params& pp, std::size_t len) {
  return byte_len(len + pp.rho + pp.kappa + 1);
}

// --- proofs ------------------------------------------------------------------

void write(Writer& w, const DdhProof& p) {
  w.scalar("beta", p.beta);
  w.scalar("gamma", p.gamma);
}

DdhProof read_ddh(Reader& r) {
  Scalar beta = r.scalar();
  Scalar gamma = r.scalar();
  return {beta, gamma};
}

void write(Writer& w, const KneProof& p) {
  write(w, p.ddh);
  w.element("v", p.v);
}

KneProof read_kne(Reader& r) {
  DdhProof ddh = read_ddh(r);
  GroupElement v = r.element();
  return {ddh, v};
}

void write(Writer& w, const DvProof& p, const PaillierPublicKey& ek) {
  const Params& pp = w.params();
  w.uint("beta_prime", p.beta_prime, challenge_bytes(pp));
  w.uint("gamma2", p.gamma2, gamma2_bytes(pp));
  w.uint("gamma3", p.gamma3, gamma3_bytes(pp));
  w.coins("gamma_c", p.gamma_c, ek);
}

DvProof read_dv(Reader& r, const PaillierPublicKey& ek) {
  const Params& pp = r.params();
  DvProof p;
  p.beta_prime = r.uint(challenge_bytes(pp));
  p.gamma2 = r.uint(gamma2_bytes(pp));
  p.gamma3 = r.uint(gamma3_bytes(pp));
  p.gamma_c = r.coins(ek);
  return p;
}

void write(Writer& w, const OrProof& p) {
  const Params& pp = w.params();
  w.uint("beta1", p.beta1, challenge_bytes(pp));
  w.uint("beta2", p.beta2, challenge_bytes(pp));
  w.scalar("gamma1", p.gamma1);
  w.scalar("gamma2", p.gamma2);
}

OrProof read_or(Reader& r) {
  const Params& pp = r.params();
  OrProof p;
  p.beta1 = r.uint(challenge_bytes(pp));
  p.beta2 = r.uint(challenge_bytes(pp));
  p.gamma1 = r.scalar();
  p.gamma2 = r.scalar();
  return p;
}

void write(Writer& w, const EqPpProof& p, const PaillierPublicKey& ek, std::size_t len) {
  const Params& pp = w.params();
  w.ciphertext("a1", p.a1, ek);
  w.element("a2", p.a2);
  w.uint("e", p.e, challenge_bytes(pp));
  w.uint("s_x", p.s_x, response_bytes(pp, len));
  w.scalar("s_z", p.s_z);
  w.coins("s_r", p.s_r, ek);
}

EqPpProof read_eq_pp(Reader& r, const PaillierPublicKey& ek, std::size_t len) {
  const Params& pp = r.params();
  EqPpProof p;
  p.a1 = r.ciphertext(ek);
  p.a2 = r.element();
  p.e = r.uint(challenge_bytes(pp));
  p.s_x = r.uint(response_bytes(pp, len));
  p.s_z = r.scalar();
  p.s_r = r.coins(ek);
  return p;
}

void write(Writer& w, const EqPaillierProof& p, const PaillierPublicKey& ek1,
           const PaillierPublicKey& ek2, std::size_t len) {
  w.element("c1", p.c1);
  w.element("c2", p.c2);
  w.push("p1");
  write(w, p.p1, ek1, len);
  w.pop();
  w.push("p2");
  write(w, p.p2, ek2, len);
  w.pop();
  w.push("link");
  write(w, p.link);
  w.pop();
}

EqPaillierProof read_eq_paillier(Reader& r, const PaillierPublicKey& ek1,
                                 const PaillierPublicKey& ek2, std::size_t len) {
  EqPaillierProof p;
  p.c1 = r.element();
  p.c2 = r.element();
  p.p1 = read_eq_pp(r, ek1, len);
  p.p2 = read_eq_pp(r, ek2, len);
  p.link = read_kne(r);
  return p;
}

void write(Writer& w, const RangeProof& p, const PaillierPublicKey& ek) {
  const Params& pp = w.params();
  if (p.c0.size() != pp.rho || p.c1.size() != pp.rho || p.bits.size() != pp.rho) {
    throw Error(ErrorCode::kMalformedEncoding, "range proof has the wrong bit count");
  }
  for (std::size_t i = 0; i < pp.rho; ++i) {
    w.push("bit" + std::to_string(i));
    w.element("c0", p.c0[i]);
    w.element("c1", p.c1[i]);
    write(w, p.bits[i]);
    w.pop();
  }
  w.push("link");
  write(w, p.link, ek, pp.rho);
  w.pop();
}

RangeProof read_range(Reader& r, const PaillierPublicKey& ek) {
  const Params& pp = r.params();
  RangeProof p;
  for (std::size_t i = 0; i < pp.rho; ++i) {
    p.c0.push_back(r.element());
    p.c1.push_back(r.element());
    p.bits.push_back(read_or(r));
  }
  p.link = read_eq_pp(r, ek, pp.rho);
  return p;
}

// --- keys --------------------------------------------------------------------

void write(Writer& w, const PublicKey& pub) {
  w.element("pk", pub.pk);
  w.modulus("ek1", pub.ek1);
  w.modulus("ek2", pub.ek2);
  w.ciphertext("b1", pub.b1, pub.ek1);
  w.ciphertext("b2", pub.b2, pub.ek2);
}

PublicKey read_public_key(Reader& r) {
  PublicKey pub;
  pub.pk = r.element();
  pub.ek1 = r.modulus();
  pub.ek2 = r.modulus();
  pub.b1 = r.ciphertext(pub.ek1);
  pub.b2 = r.ciphertext(pub.ek2);
  return pub;
}

void write(Writer& w, const ClientShare& s) {
  w.scalar("sk1", s.sk1);
  w.element("pk1", s.pk1);
  w.element("pk2", s.pk2);
  w.push("pub");
  write(w, s.pub);
  w.pop();
}

ClientShare read_client_share(Reader& r) {
  ClientShare s;
  s.sk1 = r.scalar();
  s.pk1 = r.element();
  s.pk2 = r.element();
  s.pub = read_public_key(r);
  return s;
}

namespace {

std::size_t prime_bytes(const Params& pp) { return byte_len(pp.nu / 2); }

}  // namespace

void write(Writer& w, const ServerShare& s) {
  const Params& pp = w.params();
  w.scalar("sk2", s.sk2);
  w.prime("vk1.p", s.vk1.p(), prime_bytes(pp));
  w.prime("vk1.q", s.vk1.q(), prime_bytes(pp));
  w.prime("vk2.p", s.vk2.p(), prime_bytes(pp));
  w.prime("vk2.q", s.vk2.q(), prime_bytes(pp));
  w.uint("beta", s.beta, challenge_bytes(pp));
  w.element("pk1", s.pk1);
  w.element("pk2", s.pk2);
  w.push("pub");
  write(w, s.pub);
  w.pop();
  w.uint("fail_count", s.fail_count.load(), 4);
}

ServerShare read_server_share(Reader& r) {
  // Factors precede the public key on the wire; decode them raw first.
  const Params& pp = r.params();
  ServerShare s;
  s.sk2 = r.scalar();
  mpz_class p1 = r.prime(prime_bytes(pp)), q1 = r.prime(prime_bytes(pp));
  mpz_class p2 = r.prime(prime_bytes(pp)), q2 = r.prime(prime_bytes(pp));
  s.beta = r.uint(challenge_bytes(pp));
  if (s.beta >= (mpz_class(1) << pp.rho)) throw Error(ErrorCode::kIntegerOutOfRange, "beta");
  s.pk1 = r.element();
  s.pk2 = r.element();
  s.pub = read_public_key(r);
  s.fail_count.store(static_cast<std::uint32_t>(r.uint(4).get_ui()));
  if (p1 * q1 != s.pub.ek1.n() || p2 * q2 != s.pub.ek2.n()) {
    throw Error(ErrorCode::kIntegerOutOfRange, "factors do not match the public moduli");
  }
  s.vk1 = PaillierSecretKey::from_primes(p1, q1);
  s.vk2 = PaillierSecretKey::from_primes(p2, q2);
  return s;
}

// --- ciphertexts and decryption messages -------------------------------------

void write_c1(Writer& w, const Ciphertext& c, const PublicKey& pub) {
  w.element("u", c.u);
  w.element("alpha1", c.alpha1);
  w.ciphertext("gamma1", c.gamma1, pub.ek1);
  w.ciphertext("gamma2", c.gamma2, pub.ek2);
  w.push("pi");
  write(w, c.pi);
  w.pop();
  w.push("pi1");
  write(w, c.pi1, pub.ek1);
  w.pop();
  w.push("pi2");
  write(w, c.pi2, pub.ek2);
  w.pop();
}

Ciphertext read_c1(Reader& r, const PublicKey& pub) {
  Ciphertext c;
  c.u = r.element();
  c.alpha1 = r.element();
  c.gamma1 = r.ciphertext(pub.ek1);
  c.gamma2 = r.ciphertext(pub.ek2);
  c.pi = read_kne(r);
  c.pi1 = read_dv(r, pub.ek1);
  c.pi2 = read_dv(r, pub.ek2);
  return c;
}

void write_c2(Writer& w, const DemCiphertext& c2) {
  w.var("c21", c2.c21);
  w.raw("c22", c2.c22);
}

DemCiphertext read_c2(Reader& r) {
  DemCiphertext c2;
  c2.c21 = r.var();
  c2.c22 = r.raw(kDemTagBits / 8);
  return c2;
}

void write(Writer& w, const BlindedRequest& q, const PublicKey& pub) {
  w.element("u", q.u);
  w.element("alpha1", q.alpha1);
  w.ciphertext("gamma1", q.gamma1, pub.ek1);
  w.ciphertext("gamma2", q.gamma2, pub.ek2);
  w.push("pi");
  write(w, q.pi);
  w.pop();
}

BlindedRequest read_request(Reader& r, const PublicKey& pub) {
  BlindedRequest q;
  q.u = r.element();
  q.alpha1 = r.element();
  q.gamma1 = r.ciphertext(pub.ek1);
  q.gamma2 = r.ciphertext(pub.ek2);
  q.pi = read_kne(r);
  return q;
}

void write(Writer& w, const ServerResponse& s) {
  w.element("w", s.w);
  w.push("pi");
  write(w, s.pi);
  w.pop();
}

ServerResponse read_response(Reader& r) {
  ServerResponse s;
  s.w = r.element();
  s.pi = read_ddh(r);
  return s;
}

void write(Writer& w, const ShareOpening& o) {
  w.element("pk_i", o.pk_i);
  w.push("pi");
  write(w, o.pi);
  w.pop();
}

ShareOpening read_opening(Reader& r) {
  ShareOpening o;
  o.pk_i = r.element();
  o.pi = read_kne(r);
  return o;
}

void write(Writer& w, const SetupMessage& m) {
  w.modulus("ek1", m.ek1);
  w.modulus("ek2", m.ek2);
  w.ciphertext("b1", m.b1, m.ek1);
  w.ciphertext("b2", m.b2, m.ek2);
  w.push("range");
  write(w, m.range, m.ek1);
  w.pop();
  w.push("eq");
  write(w, m.eq, m.ek1, m.ek2, w.params().rho);
  w.pop();
}

SetupMessage read_setup(Reader& r) {
  SetupMessage m;
  m.ek1 = r.modulus();
  m.ek2 = r.modulus();
  m.b1 = r.ciphertext(m.ek1);
  m.b2 = r.ciphertext(m.ek2);
  m.range = read_range(r, m.ek1);
  m.eq = read_eq_paillier(r, m.ek1, m.ek2, r.params().rho);
  return m;
}

std::size_t c1_itemized_bits(const Params& pp) {
  const std::size_t d = pp.d();
  const std::size_t element = d + 1;
  const std::size_t kne = element + pp.rho + d;
  const std::size_t dv = pp.rho + pp.r1_bits() + pp.r3_bits() + pp.nu;
  return 2 * element + 2 * (2 * pp.nu) + kne + 2 * dv;
}

Bytes serialize_c1(const Params& pp, const Ciphertext& c, const PublicKey& pub) {
  Writer w(pp);
  write_c1(w, c, pub);
  return w.data();
}

PublicKey decode_public_key(const Params& pp, ByteSpan b) {
  Reader r(pp, b);
  PublicKey pub = read_public_key(r);
  r.finish();
  return pub;
}

BlindedRequest decode_request(const Params& pp, ByteSpan b, const PublicKey& pub) {
  Reader r(pp, b);
  BlindedRequest q = read_request(r, pub);
  r.finish();
  return q;
}

ServerResponse decode_response(const Params& pp, ByteSpan b) {
  Reader r(pp, b);
  ServerResponse s = read_response(r);
  r.finish();
  return s;
}

Bytes encode_ciphertext_file(const Params& pp, const Ciphertext& c, const PublicKey& pub) {
  Writer w(pp);
  w.raw("magic", to_bytes(kCiphertextMagic));
  w.push("c1");
  write_c1(w, c, pub);
  w.pop();
  w.push("c2");
  write_c2(w, c.c2);
  w.pop();
  return w.data();
}

Ciphertext decode_ciphertext_file(const Params& pp, ByteSpan b, const PublicKey& pub) {
  Reader r(pp, b);
  if (r.raw(kCiphertextMagic.size()) != to_bytes(kCiphertextMagic)) malformed("bad magic");
  Ciphertext c = read_c1(r, pub);
  c.c2 = read_c2(r);
  r.finish();
  return c;
}

// --- frames ------------------------------------------------------------------

Bytes encode_frame(const Message& m) {
  if (m.payload.size() > kMaxPayloadBytes) malformed("payload too large");
  Bytes out{kWireVersion, static_cast<std::uint8_t>(m.type)};
  append(out, m.sid);
  append_u32(out, static_cast<std::uint32_t>(m.payload.size()));
  append(out, m.payload);
  return out;
}

FrameHeader decode_frame_header(ByteSpan header) {
  if (header.size() != kFrameHeaderBytes) malformed("frame header size");
  FrameHeader h;
  h.version = header[0];
  h.type = header[1];
  std::copy_n(header.begin() + 2, 16, h.sid.begin());
  h.length = static_cast<std::uint32_t>(int_from_bytes(header.subspan(18, 4)).get_ui());
  if (h.version != kWireVersion) malformed("unknown wire version");
  if (!known_msg_type(h.type)) malformed("unknown message type");
  if (h.length > kMaxPayloadBytes) malformed("frame too large");
  return h;
}

Message decode_frame(ByteSpan frame) {
  if (frame.size() < kFrameHeaderBytes) malformed("short frame");
  FrameHeader h = decode_frame_header(frame.subspan(0, kFrameHeaderBytes));
  if (frame.size() != kFrameHeaderBytes + h.length) malformed("frame length mismatch");
  Message m;
  m.type = static_cast<MsgType>(h.type);
  m.sid = h.sid;
  m.payload.assign(frame.begin() + kFrameHeaderBytes, frame.end());
  return m;
}

}  // namespace dvps
