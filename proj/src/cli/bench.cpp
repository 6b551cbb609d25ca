#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <thread>

#include "dvps/channel.hpp"
#include "dvps/cli.hpp"
#include "dvps/dvps.hpp"
#include "dvps/params.hpp"
#include "dvps/rng.hpp"
#include "dvps/wire.hpp"
#include "json.hpp"

namespace dvps::cli {

namespace {

// Published reference timings and sizes for the production profile.
constexpr double kRefEncMs = 1140;
constexpr double kRefDecCMs = 563;
constexpr double kRefDecSMs = 153;
constexpr double kRefC1Bits = 21714;
constexpr double kRefRequestBytes = 11.5 * 1024;
constexpr double kRefResponseBytes = 5.5 * 1024;

Rng make_rng(const std::optional<std::string>& seed, const std::string& label) {
  return seed ? Rng(*seed + "/bench/" + label) : Rng::from_os();
}

BenchRow timing(const std::string& metric, const std::vector<double>& ms,
                std::optional<double> ref) {
  double mean = 0;
  for (double v : ms) mean += v;
  mean /= static_cast<double>(ms.size());
  double var = 0;
  for (double v : ms) var += (v - mean) * (v - mean);
  const double sd = ms.size() > 1 ? std::sqrt(var / static_cast<double>(ms.size() - 1)) : 0;
  return {metric, "ms", ms.size(), mean, sd, ref};
}

BenchRow size(const std::string& metric, const std::string& unit, double v,
              std::optional<double> ref) {
  return {metric, unit, 1, v, 0, ref};
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const std::string& profile, std::size_t iters,
                                const std::optional<std::string>& seed) {
  if (iters == 0) return {};
  const Params pp = Params::by_name(profile);
  const bool prod = profile == "prod";
  auto ref = [prod](double v) { return prod ? std::optional<double>(v) : std::nullopt; };

  // Both roles in-process over a memory channel.
  Rng crng = make_rng(seed, "client"), srng = make_rng(seed, "server");
  Rng rng = make_rng(seed, "ops");
  auto [cch, sch] = memory_channel_pair(std::chrono::minutes(10));
  ServerShare server;
  std::exception_ptr server_error;
  std::thread t([&, &sch = sch] {
    try {
      server = keygen_server(pp, srng, *sch);
    } catch (...) {
      server_error = std::current_exception();
    }
  });
  ClientShare client;
  try {
    client = keygen_client(pp, crng, *cch, random_session_id(rng));
  } catch (...) {
    t.join();
    throw;
  }
  t.join();
  if (server_error) std::rethrow_exception(server_error);

  std::vector<double> enc, dec_c, dec_s;
  std::size_t c1_bytes = 0, req_bytes = 0, resp_bytes = 0;
  for (std::size_t i = 0; i < iters; ++i) {
    const Bytes m = rng.bytes(32);
    auto t0 = std::chrono::steady_clock::now();
    Ciphertext c = encrypt(pp, client.pub, m, rng);
    enc.push_back(ms_since(t0));

    const SessionId sid = random_session_id(rng);
    t0 = std::chrono::steady_clock::now();
    auto [req, st] = client_blind(pp, client, c, sid, rng);
    double client_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    ServerResponse resp = server_respond(pp, server, req, sid, rng);
    dec_s.push_back(ms_since(t0));

    t0 = std::chrono::steady_clock::now();
    Bytes out = client_finish(pp, client, resp, std::move(st));
    client_ms += ms_since(t0);
    dec_c.push_back(client_ms);
    if (out != m) throw Error(ErrorCode::kTagMismatch, "benchmark round trip failed");

    c1_bytes = serialize_c1(pp, c, client.pub).size();
    req_bytes = serialize(pp, req, client.pub).size();
    resp_bytes = serialize(pp, resp).size();
  }

  std::vector<BenchRow> rows;
  rows.push_back(timing("enc", enc, ref(kRefEncMs)));
  rows.push_back(timing("dec_c", dec_c, ref(kRefDecCMs)));
  rows.push_back(timing("dec_s", dec_s, ref(kRefDecSMs)));
  const double c1_bits = 8.0 * static_cast<double>(c1_bytes);
  rows.push_back(size("c1", "bits", c1_bits, ref(kRefC1Bits)));
  rows.push_back(size("c1_itemized", "bits", static_cast<double>(c1_itemized_bits(pp)), {}));
  if (prod) rows.push_back(size("c1_framing", "bits", c1_bits - kRefC1Bits, {}));
  rows.push_back(size("dec_req", "bytes", static_cast<double>(req_bytes), ref(kRefRequestBytes)));
  rows.push_back(
      size("dec_resp", "bytes", static_cast<double>(resp_bytes), ref(kRefResponseBytes)));
  rows.push_back(size("frame_header", "bytes", static_cast<double>(kFrameHeaderBytes), {}));
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "metric,unit,n,mean,stddev,reference\n";
  for (const BenchRow& r : rows) {
    out << r.metric << ',' << r.unit << ',' << r.n << ',' << std::fixed << std::setprecision(3)
        << r.mean << ',' << r.stddev << ',';
    if (r.reference) out << *r.reference;
    out << '\n';
  }
}

void write_bench_json(std::ostream& out, const std::string& profile, std::size_t iters,
                      const std::vector<BenchRow>& rows) {
  nlohmann::json j;
  j["profile"] = profile;
  j["iters"] = iters;
  j["rows"] = nlohmann::json::array();
  for (const BenchRow& r : rows) {
    nlohmann::json row = {{"metric", r.metric}, {"unit", r.unit}, {"n", r.n},
                          {"mean", r.mean},     {"stddev", r.stddev}};
    row["reference"] = r.reference ? nlohmann::json(*r.reference) : nlohmann::json(nullptr);
    j["rows"].push_back(row);
  }
  out << j.dump(2) << '\n';
}

}  // namespace dvps::cli
