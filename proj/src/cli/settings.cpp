#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "dvps/cli.hpp"
#include "json.hpp"

namespace dvps::cli {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::kConfig, what); }

std::uint32_t parse_u32(const std::string& key, const std::string& v) {
  std::uint32_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    config_error(key + " must be a non-negative integer");
  }
  return out;
}

void apply(Settings& s, const std::string& key, const std::string& v) {
  if (key == "params") {
    if (v != "prod" && v != "toy" && v != "lite") config_error("params must be prod, toy or lite");
    s.params = v;
  } else if (key == "seed") {
    s.seed = v;
  } else if (key == "listen") {
    s.listen = v;
  } else if (key == "server") {
    s.server = v;
  } else if (key == "timeout_ms") {
    s.timeout_ms = parse_u32(key, v);
  } else if (key == "idle_timeout_ms") {
    s.idle_timeout_ms = parse_u32(key, v);
  } else if (key == "log_level") {
    s.log_level = v;
  } else {
    config_error("unknown setting " + key);
  }
}

const char* const kKeys[] = {"params", "seed", "listen", "server", "timeout_ms",
                             "idle_timeout_ms", "log_level"};

std::string env_name(const std::string& key) {
  std::string out = "DVPS_";
  for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

Settings resolve_settings(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                          const std::optional<std::filesystem::path>& config) {
  Settings s;
  if (config) {
    std::ifstream in(*config);
    if (!in) config_error("cannot read config file " + config->string());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      config_error(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) config_error("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string()) {
        apply(s, key, value.get<std::string>());
      } else if (value.is_number_unsigned()) {
        apply(s, key, std::to_string(value.get<std::uint64_t>()));
      } else {
        config_error("setting " + key + " must be a string or a non-negative integer");
      }
    }
  }
  for (const char* key : kKeys) {
    if (auto v = env(env_name(key))) apply(s, key, *v);
  }
  for (const auto& [key, v] : flags) apply(s, key, v);
  return s;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kChannelError:
    case ErrorCode::kTimeout:
    case ErrorCode::kMalformedEncoding:
    case ErrorCode::kNotInSubgroup:
    case ErrorCode::kIntegerOutOfRange:
      return kExitChannel;
    case ErrorCode::kCommitMismatch:
    case ErrorCode::kBadShareProof:
    case ErrorCode::kBadSetupProof:
      return kExitKeygenProof;
    case ErrorCode::kInvalidCiphertext:
      return kExitInvalidCiphertext;
    case ErrorCode::kBadServerProof:
      return kExitBadServerProof;
    case ErrorCode::kServerRejected:
    case ErrorCode::kSharePoisoned:
      return kExitRejected;
    case ErrorCode::kTagMismatch:
      return kExitTagMismatch;
    case ErrorCode::kFileExists:
      return kExitFileExists;
    case ErrorCode::kKeyFile:
      return kExitKeyFile;
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidParams:
      return kExitUsage;
    default:
      return kExitInternal;
  }
}

}  // namespace dvps::cli
