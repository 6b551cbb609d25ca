#include "dvps/params.hpp"

#include "dvps/errors.hpp"
#include "dvps/hash.hpp"

namespace dvps {

Params Params::production() {
  Params p;
  p.profile = "prod";
  p.group = &p256();
  p.rho = 80;
  p.kappa = 128;
  p.nu = 3072;
  return p;
}

Params Params::toy() {
  Params p;
  p.profile = "toy";
  p.group = &toy_group();
  p.rho = 8;
  p.kappa = 8;
  p.nu = 64;
  return p;
}

Params Params::lite() {
  Params p = production();
  p.profile = "lite";
  p.nu = 1024;
  return p;
}

Params Params::by_name(std::string_view name) {
  Params p;
  if (name == "prod") {
    p = production();
  } else if (name == "toy") {
    p = toy();
  } else if (name == "lite") {
    p = lite();
  } else {
    throw Error(ErrorCode::kInvalidParams, "unknown params profile " + std::string(name));
  }
  p.validate();
  return p;
}

void Params::validate() const {
  if (group == nullptr) throw Error(ErrorCode::kInvalidParams, "no group");
  if (rho == 0 || kappa == 0) throw Error(ErrorCode::kInvalidParams, "rho and kappa must be positive");
  if (rho > kappa) throw Error(ErrorCode::kInvalidParams, "rho must not exceed kappa");
  // Blinded plaintext z*gamma + z' stays below 2^(rho+2d+2kappa+1).
  if (nu < rho + 2 * d() + 2 * kappa + 2) {
    throw Error(ErrorCode::kInvalidParams, "nu too small for the blinded plaintext");
  }
  // DV proof response plaintext r3 + beta' r1 stays below N as well.
  if (nu < 2 * rho + d() + 2 * kappa + 2) {
    throw Error(ErrorCode::kInvalidParams, "nu too small for the validity proof");
  }
  if (nu % 2 != 0) throw Error(ErrorCode::kInvalidParams, "nu must be even");
  if (fail_threshold == 0) throw Error(ErrorCode::kInvalidParams, "fail threshold must be positive");
  if (!oracle) throw Error(ErrorCode::kInvalidParams, "no oracle");
}

Params Params::with_oracle(std::shared_ptr<const RandomOracle> o) const {
  Params p = *this;
  p.oracle = std::move(o);
  return p;
}

Bytes Params::fingerprint() const {
  Bytes in = to_bytes("dvps-params-v1");
  in.push_back(0);
  append(in, to_bytes(group->name()));
  in.push_back(0);
  append_u32(in, static_cast<std::uint32_t>(rho));
  append_u32(in, static_cast<std::uint32_t>(kappa));
  append_u32(in, static_cast<std::uint32_t>(nu));
  append_u32(in, fail_threshold);
  return sha256(in);
}

}  // namespace dvps
