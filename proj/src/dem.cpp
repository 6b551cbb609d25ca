#include "dvps/dem.hpp"

#include <openssl/crypto.h>

#include "dvps/errors.hpp"

namespace dvps {

namespace {

Bytes mask(const Group& g, const RandomOracle& oracle, const GroupElement& k, std::size_t len) {
  return oracle.to_bits(OracleId::kHprime, Transcript(g).element(k), len * 8);
}

Bytes tag(const Group& g, const RandomOracle& oracle, const GroupElement& k, ByteSpan body) {
  return oracle.to_bits(OracleId::kHdoubleprime, Transcript(g).element(k).bytes(body),
                        kDemTagBits);
}

Bytes xor_bytes(ByteSpan a, const Bytes& b) {
  Bytes out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= b[i];
  return out;
}

}  // namespace

DemCiphertext dem_seal(const Group& g, const RandomOracle& oracle, const GroupElement& k,
                       ByteSpan m) {
  DemCiphertext ct;
  ct.c21 = xor_bytes(m, mask(g, oracle, k, m.size()));
  ct.c22 = tag(g, oracle, k, kDemTagOverPlaintext ? m : ByteSpan(ct.c21));
  return ct;
}

Bytes dem_open(const Group& g, const RandomOracle& oracle, const GroupElement& k,
               const DemCiphertext& ct) {
  Bytes m = xor_bytes(ct.c21, mask(g, oracle, k, ct.c21.size()));
  Bytes expected = tag(g, oracle, k, kDemTagOverPlaintext ? ByteSpan(m) : ByteSpan(ct.c21));
  if (ct.c22.size() != expected.size() ||
      CRYPTO_memcmp(ct.c22.data(), expected.data(), expected.size()) != 0) {
    throw Error(ErrorCode::kTagMismatch, "DEM tag check failed");
  }
  return m;
}

}  // namespace dvps
