#include "dvps/errors.hpp"

namespace dvps {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroInverse: return "ZeroInverse";
    case ErrorCode::kPlaintextOutOfRange: return "PlaintextOutOfRange";
    case ErrorCode::kTagMismatch: return "TagMismatch";
    case ErrorCode::kWitnessOutOfRange: return "WitnessOutOfRange";
    case ErrorCode::kZeroWitness: return "ZeroWitness";
    case ErrorCode::kBitOutOfRange: return "BitOutOfRange";
    case ErrorCode::kCommitMismatch: return "CommitMismatch";
    case ErrorCode::kBadShareProof: return "BadShareProof";
    case ErrorCode::kBadSetupProof: return "BadSetupProof";
    case ErrorCode::kChannelError: return "ChannelError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kInvalidCiphertext: return "InvalidCiphertext";
    case ErrorCode::kEqualityMismatch: return "EqualityMismatch";
    case ErrorCode::kLinearCheckFailed: return "LinearCheckFailed";
    case ErrorCode::kBadClientProof: return "BadClientProof";
    case ErrorCode::kSharePoisoned: return "SharePoisoned";
    case ErrorCode::kBadServerProof: return "BadServerProof";
    case ErrorCode::kServerRejected: return "ServerRejected";
    case ErrorCode::kMalformedEncoding: return "MalformedEncoding";
    case ErrorCode::kNotInSubgroup: return "NotInSubgroup";
    case ErrorCode::kIntegerOutOfRange: return "IntegerOutOfRange";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kProgrammingCollision: return "ProgrammingCollision";
    case ErrorCode::kNotForked: return "NotForked";
    case ErrorCode::kInvalidProof: return "InvalidProof";
    case ErrorCode::kKeyFile: return "KeyFile";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kFileExists: return "FileExists";
  }
  return "Unknown";
}

}  // namespace dvps
