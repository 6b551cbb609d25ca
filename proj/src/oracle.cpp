#include "dvps/oracle.hpp"

#include "dvps/errors.hpp"
#include "dvps/hash.hpp"

namespace dvps {

namespace {

constexpr std::string_view kHashToCurveDst = "DVPS-V01-P256_XMD:SHA-256_SSWU_RO_";

Bytes mask_bits(Bytes out, std::size_t nbits) {
  if (!out.empty()) out[0] &= static_cast<std::uint8_t>(0xff >> (out.size() * 8 - nbits));
  return out;
}

Scalar wide_reduce(const Group& g, ByteSpan wide) { return Scalar(g, int_from_bytes(wide)); }

std::size_t wide_len(const Group& g) { return g.scalar_bytes() + 16; }

}  // namespace

std::string_view oracle_name(OracleId id) {
  switch (id) {
    case OracleId::kH0: return "H0";
    case OracleId::kH1: return "H1";
    case OracleId::kH2: return "H2";
    case OracleId::kH3: return "H3";
    case OracleId::kHc: return "Hc";
    case OracleId::kHprime: return "Hprime";
    case OracleId::kHdoubleprime: return "Hdoubleprime";
    case OracleId::kHcom: return "Hcom";
    case OracleId::kHtilde0: return "Htilde0";
    case OracleId::kHtilde1: return "Htilde1";
    case OracleId::kHtilde2: return "Htilde2";
    case OracleId::kHdv: return "Hdv";
  }
  return "unknown";
}

void Transcript::part(Kind kind, ByteSpan body) {
  data_.push_back(static_cast<std::uint8_t>(kind));
  append_u32(data_, static_cast<std::uint32_t>(body.size()));
  dvps::append(data_, body);
}

Transcript& Transcript::label(std::string_view s) {
  part(Kind::kLabel, to_bytes(s));
  return *this;
}

Transcript& Transcript::element(const GroupElement& e) {
  part(Kind::kElement, group_->encode(e));
  return *this;
}

Transcript& Transcript::scalar(const Scalar& s) {
  part(Kind::kScalar, int_to_bytes(s.value(), group_->scalar_bytes()));
  return *this;
}

Transcript& Transcript::integer(const mpz_class& v) {
  part(Kind::kInteger, int_to_bytes(v));
  return *this;
}

Transcript& Transcript::bytes(ByteSpan b) {
  part(Kind::kBytes, b);
  return *this;
}

Transcript& Transcript::append(const Transcript& other) {
  dvps::append(data_, other.data_);
  return *this;
}

mpz_class RandomOracle::to_integer(OracleId id, const Transcript& t, std::size_t nbits) const {
  return int_from_bytes(to_bits(id, t, nbits));
}

Bytes oracle_input(OracleId id, const Transcript& t) {
  Bytes in{static_cast<std::uint8_t>(id), kProtocolVersion};
  append(in, t.encoded());
  return in;
}

Scalar HashOracle::to_scalar(OracleId id, const Transcript& t) const {
  return wide_reduce(t.group(), shake256(oracle_input(id, t), wide_len(t.group())));
}

GroupElement HashOracle::to_group(OracleId id, const Transcript& t) const {
  return t.group().hash_to_group(oracle_input(id, t), kHashToCurveDst);
}

Bytes HashOracle::to_bits(OracleId id, const Transcript& t, std::size_t nbits) const {
  return mask_bits(shake256(oracle_input(id, t), byte_len(nbits)), nbits);
}

std::shared_ptr<const RandomOracle> default_oracle() {
  static const auto oracle = std::make_shared<const HashOracle>();
  return oracle;
}

ProgrammableOracle::ProgrammableOracle(std::string seed) : seed_(std::move(seed)) {}

ProgrammableOracle::ProgrammableOracle(const ProgrammableOracle& other) : seed_(other.seed_) {
  std::lock_guard lock(other.mu_);
  table_ = other.table_;
}

ProgrammableOracle::Key ProgrammableOracle::key(Kind kind, OracleId id, const Bytes& input,
                                                std::size_t nbits) {
  return {static_cast<int>(kind), static_cast<std::uint8_t>(id), nbits, input};
}

Bytes ProgrammableOracle::fallback(Kind kind, OracleId id, const Bytes& input,
                                   std::size_t len) const {
  Bytes in = to_bytes(seed_);
  in.push_back(0);
  in.push_back(static_cast<std::uint8_t>(kind));
  in.push_back(static_cast<std::uint8_t>(id));
  append(in, input);
  return shake256(in, len);
}

Bytes ProgrammableOracle::answer(Kind kind, OracleId id, const Transcript& t,
                                 std::size_t nbits) const {
  const Group& g = t.group();
  const Bytes& input = t.encoded();
  std::lock_guard lock(mu_);
  log_.push_back({kind, id, input});
  Key k = key(kind, id, input, nbits);
  auto it = table_.find(k);
  if (it != table_.end()) return it->second.value;
  Entry e;
  switch (kind) {
    case Kind::kScalar:
      e.value = int_to_bytes(wide_reduce(g, fallback(kind, id, input, wide_len(g))).value(),
                             g.scalar_bytes());
      break;
    case Kind::kGroup: {
      // g^t with t nonzero, so discrete logs are known to the harness.
      Scalar s = wide_reduce(g, fallback(kind, id, input, wide_len(g)));
      if (s.is_zero()) s = g.scalar(1);
      e.value = g.encode(g.exp_g(s));
      e.dlog = s.value();
      break;
    }
    case Kind::kBits:
      e.value = mask_bits(fallback(kind, id, input, byte_len(nbits)), nbits);
      break;
  }
  table_.emplace(k, e);
  return e.value;
}

Scalar ProgrammableOracle::to_scalar(OracleId id, const Transcript& t) const {
  return Scalar(t.group(), int_from_bytes(answer(Kind::kScalar, id, t, 0)));
}

GroupElement ProgrammableOracle::to_group(OracleId id, const Transcript& t) const {
  return t.group().decode(answer(Kind::kGroup, id, t, 0));
}

Bytes ProgrammableOracle::to_bits(OracleId id, const Transcript& t, std::size_t nbits) const {
  return answer(Kind::kBits, id, t, nbits);
}

void ProgrammableOracle::insert(const Key& k, Entry e) {
  std::lock_guard lock(mu_);
  if (!table_.emplace(k, std::move(e)).second) {
    throw Error(ErrorCode::kProgrammingCollision, "oracle point already fixed");
  }
}

void ProgrammableOracle::program_scalar(OracleId id, const Transcript& t, const Scalar& value) {
  program_scalar(id, t.encoded(), value);
}

void ProgrammableOracle::program_scalar(OracleId id, const Bytes& input, const Scalar& value) {
  insert(key(Kind::kScalar, id, input),
         {int_to_bytes(value.value(), value.group().scalar_bytes()), std::nullopt});
}

void ProgrammableOracle::program_group(OracleId id, const Transcript& t,
                                       const GroupElement& value, std::optional<Scalar> dlog) {
  Entry e{t.group().encode(value), std::nullopt};
  if (dlog) e.dlog = dlog->value();
  insert(key(Kind::kGroup, id, t.encoded()), std::move(e));
}

void ProgrammableOracle::program_bits(OracleId id, const Transcript& t, std::size_t nbits,
                                      const Bytes& value) {
  program_bits(id, t.encoded(), nbits, value);
}

void ProgrammableOracle::program_bits(OracleId id, const Bytes& input, std::size_t nbits,
                                      const Bytes& value) {
  insert(key(Kind::kBits, id, input, nbits), {mask_bits(value, nbits), std::nullopt});
}

bool ProgrammableOracle::answered(Kind kind, OracleId id, const Transcript& t) const {
  std::lock_guard lock(mu_);
  for (const auto& [k, e] : table_) {
    if (std::get<0>(k) == static_cast<int>(kind) &&
        std::get<1>(k) == static_cast<std::uint8_t>(id) && std::get<3>(k) == t.encoded()) {
      return true;
    }
  }
  return false;
}

std::optional<Scalar> ProgrammableOracle::dlog(OracleId id, const Transcript& t) const {
  std::lock_guard lock(mu_);
  auto it = table_.find(key(Kind::kGroup, id, t.encoded()));
  if (it == table_.end() || !it->second.dlog) return std::nullopt;
  return Scalar(t.group(), *it->second.dlog);
}

std::vector<ProgrammableOracle::Query> ProgrammableOracle::queries() const {
  std::lock_guard lock(mu_);
  return log_;
}

void ProgrammableOracle::clear_log() {
  std::lock_guard lock(mu_);
  log_.clear();
}

}  // namespace dvps
