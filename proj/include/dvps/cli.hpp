#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dvps/errors.hpp"

namespace dvps::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitChannel = 3,
  kExitKeygenProof = 4,
  kExitInvalidCiphertext = 5,
  kExitBadServerProof = 6,
  kExitRejected = 7,
  kExitTagMismatch = 8,
  kExitFileExists = 9,
  kExitKeyFile = 10,
};

int exit_code(ErrorCode code);

/// Settings shared by the subcommands. Each can come from a flag, from
/// DVPS_<KEY> in the environment or from a JSON config file, in that order.
struct Settings {
  std::string params = "prod";
  std::optional<std::string> seed;
  std::string listen = "127.0.0.1:7600";
  std::string server = "127.0.0.1:7600";
  std::uint32_t timeout_ms = 30000;
  std::uint32_t idle_timeout_ms = 30000;
  std::string log_level = "info";
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Throws Config on unknown keys, bad values or an unreadable config file.
Settings resolve_settings(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                          const std::optional<std::filesystem::path>& config);

std::optional<std::string> process_env(const std::string& name);

struct BenchRow {
  std::string metric;
  std::string unit;
  std::size_t n = 0;
  double mean = 0;
  double stddev = 0;
  std::optional<double> reference;
};

/// Times Enc, Dec_C (client compute only) and Dec_S over `iters` runs and
/// lists the serialized sizes. Zero iterations give an empty report.
std::vector<BenchRow> run_bench(const std::string& profile, std::size_t iters,
                                const std::optional<std::string>& seed);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_bench_json(std::ostream& out, const std::string& profile, std::size_t iters,
                      const std::vector<BenchRow>& rows);

/// Entry point of the dvps tool.
int run(int argc, char** argv);

}  // namespace dvps::cli
