#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "dvps/bytes.hpp"
#include "dvps/group.hpp"
#include "dvps/oracle.hpp"

namespace dvps {

/// Group plus the statistical parameters rho (soundness) and kappa (masking
/// slack), the Paillier modulus size nu and the server failure threshold.
struct Params {
  std::string profile;
  const Group* group = nullptr;
  std::size_t rho = 0;
  std::size_t kappa = 0;
  std::size_t nu = 0;
  std::uint32_t fail_threshold = 10;
  std::shared_ptr<const RandomOracle> oracle = default_oracle();

  /// P-256, rho = 80, kappa = 128, nu = 3072.
  static Params production();
  /// Order-11 group, rho = kappa = 8, nu = 64.
  static Params toy();
  /// P-256 with a 1024-bit Paillier modulus. Same soundness as production,
  /// cheaper keys; used where a test needs many key pairs.
  static Params lite();
  /// "prod", "toy" or "lite".
  static Params by_name(std::string_view name);

  const Group& g() const { return *group; }
  const RandomOracle& H() const { return *oracle; }
  std::size_t d() const { return group->order_bits(); }

  /// Exclusive bit bounds of the sampled masks and accepted responses.
  std::size_t r1_bits() const { return rho + d() + kappa; }
  std::size_t gamma2_bits() const { return rho + d() + kappa + 1; }
  std::size_t r3_bits() const { return 2 * rho + d() + 2 * kappa; }
  std::size_t gamma3_bits() const { return 2 * rho + d() + 2 * kappa + 1; }
  std::size_t zprime_bits() const { return rho + 2 * d() + 2 * kappa; }

  /// Throws InvalidParams if any plaintext of the blinded decryption could
  /// wrap modulo N.
  void validate() const;

  Params with_oracle(std::shared_ptr<const RandomOracle> o) const;

  /// SHA-256 over the public parameter tuple.
  Bytes fingerprint() const;
};

}  // namespace dvps
