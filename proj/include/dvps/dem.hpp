#pragma once

#include "dvps/bytes.hpp"
#include "dvps/group.hpp"
#include "dvps/oracle.hpp"

namespace dvps {

/// Selects the tag input: the plaintext (true) or the masked body (false).
inline constexpr bool kDemTagOverPlaintext = true;
inline constexpr std::size_t kDemTagBits = 256;

/// c21 = H'(k) xor m, c22 = H''(k, m).
struct DemCiphertext {
  Bytes c21;
  Bytes c22;
  bool operator==(const DemCiphertext& o) const { return c21 == o.c21 && c22 == o.c22; }
};

DemCiphertext dem_seal(const Group& g, const RandomOracle& oracle, const GroupElement& k,
                       ByteSpan m);
/// Throws TagMismatch on a wrong key or a modified ciphertext.
Bytes dem_open(const Group& g, const RandomOracle& oracle, const GroupElement& k,
               const DemCiphertext& ct);

}  // namespace dvps
