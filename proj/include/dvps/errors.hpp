#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dvps {

enum class ErrorCode {
  kZeroInverse,
  kPlaintextOutOfRange,
  kTagMismatch,
  kWitnessOutOfRange,
  kZeroWitness,
  kBitOutOfRange,
  kCommitMismatch,
  kBadShareProof,
  kBadSetupProof,
  kChannelError,
  kTimeout,
  kInvalidCiphertext,
  kEqualityMismatch,
  kLinearCheckFailed,
  kBadClientProof,
  kSharePoisoned,
  kBadServerProof,
  kServerRejected,
  kMalformedEncoding,
  kNotInSubgroup,
  kIntegerOutOfRange,
  kInvalidParams,
  kProgrammingCollision,
  kNotForked,
  kInvalidProof,
  kKeyFile,
  kConfig,
  kFileExists,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  explicit Error(ErrorCode code) : Error(code, "") {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dvps
