#include <signal.h>

#include <fstream>
#include <iostream>
#include <mutex>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "dvps/channel.hpp"
#include "dvps/cli.hpp"
#include "dvps/dvps.hpp"
#include "dvps/keyfile.hpp"
#include "dvps/net.hpp"
#include "dvps/params.hpp"
#include "dvps/wire.hpp"
#include "json.hpp"

namespace dvps::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  Settings s;
  Params pp;
  std::chrono::milliseconds timeout() const { return std::chrono::milliseconds(s.timeout_ms); }
  Rng rng(const std::string& label) const {
    return s.seed ? Rng(*s.seed + "/" + label) : Rng::from_os();
  }
  std::shared_ptr<spdlog::logger> logger() const {
    auto log = std::make_shared<spdlog::logger>(
        "dvps", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    log->set_level(spdlog::level::from_str(s.log_level));
    return log;
  }
};

void refuse_existing(const fs::path& p, bool force) {
  if (!force && fs::exists(p)) {
    throw Error(ErrorCode::kFileExists, p.string() + " exists; pass --force to replace it");
  }
}

Bytes read_input(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Ciphertext load_ciphertext(const Params& pp, const fs::path& p, const PublicKey& pub) {
  const Bytes b = read_input(p);
  try {
    return decode_ciphertext_file(pp, b, pub);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidCiphertext, std::string("undecodable ciphertext file: ") +
                                                   std::string(error_name(e.code())));
  }
}

void announce(const std::string& host, std::uint16_t port) {
  std::cout << "listening " << host << ":" << port << std::endl;
}

// --- subcommands ----------------------------------------------------------------

struct KeygenArgs {
  std::string role;
  std::string out;
  bool force = false;
};

int cmd_keygen(const Context& cx, const KeygenArgs& a) {
  refuse_existing(a.out, a.force);
  Rng rng = cx.rng("keygen/" + a.role);
  if (a.role == "client") {
    ClientShare share = connect_and_keygen(cx.pp, parse_endpoint(cx.s.server), rng, cx.timeout());
    write_file_atomic(a.out, encode_key_file(cx.pp, share), a.force, true);
  } else {
    const Endpoint ep = parse_endpoint(cx.s.listen);
    TcpListener listener(ep);
    announce(ep.host, listener.port());
    auto ch = listener.accept(cx.timeout());
    ServerShare share = keygen_server(cx.pp, rng, *ch);
    write_file_atomic(a.out, encode_key_file(cx.pp, share), a.force, true);
  }
  std::cout << nlohmann::json({{"written", a.out}}).dump() << std::endl;
  return kExitOk;
}

struct ServeArgs {
  std::string key;
  bool keygen = false;
  std::string out;
  bool force = false;
};

int cmd_serve(const Context& cx, const ServeArgs& a) {
  if (a.keygen == !a.key.empty()) {
    throw Error(ErrorCode::kConfig, "serve needs exactly one of --key or --keygen");
  }
  if (a.keygen && a.out.empty()) throw Error(ErrorCode::kConfig, "--keygen needs --out");
  if (a.keygen) refuse_existing(a.out, a.force);

  auto log = cx.logger();
  std::optional<ServerShare> share;
  if (!a.key.empty()) share = load_server_key(cx.pp, a.key);

  // The key file always holds the latest failure count, so a restart keeps it.
  std::mutex mu;
  std::optional<ServerShare> persisted = share;
  fs::path key_path = a.keygen ? fs::path(a.out) : fs::path(a.key);
  DaemonConfig cfg;
  cfg.listen = parse_endpoint(cx.s.listen);
  cfg.idle_timeout = std::chrono::milliseconds(cx.s.idle_timeout_ms);
  cfg.keygen = a.keygen;
  cfg.log = log;
  cfg.on_keygen = [&](const ServerShare& s) {
    std::lock_guard lock(mu);
    persisted = s;
    write_file_atomic(key_path, encode_key_file(cx.pp, s), a.force, true);
  };
  cfg.on_fail_count = [&](std::uint32_t count) {
    std::lock_guard lock(mu);
    if (!persisted) return;
    persisted->fail_count.store(std::max(count, persisted->fail_count.load()));
    try {
      write_file_atomic(key_path, encode_key_file(cx.pp, *persisted), true, true);
    } catch (const Error& e) {
      log->error("cannot persist failure counter: {}", error_name(e.code()));
    }
  };
  if (share && share->fail_count.load() >= cx.pp.fail_threshold) {
    log->warn("share is poisoned; every request will be refused until a fresh keygen");
  }

  // Block the stop signals in every thread and wait for them here.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  Daemon d(cx.pp, std::move(share), cfg, cx.rng("serve"));
  d.start();
  announce(cfg.listen.host, d.port());
  int sig = 0;
  sigwait(&stop_signals, &sig);
  log->info("signal {} received", sig);
  d.stop();
  return kExitOk;
}

struct FileArgs {
  std::string key;
  std::string in;
  std::string out;
  bool force = false;
};

int cmd_encrypt(const Context& cx, const FileArgs& a) {
  refuse_existing(a.out, a.force);
  const PublicKey pub = load_public_key(cx.pp, a.key);
  Rng rng = cx.rng("encrypt");
  const Ciphertext c = encrypt(cx.pp, pub, read_input(a.in), rng);
  write_file_atomic(a.out, encode_ciphertext_file(cx.pp, c, pub), a.force);
  return kExitOk;
}

int cmd_decrypt(const Context& cx, const FileArgs& a) {
  refuse_existing(a.out, a.force);
  const ClientShare share = load_client_key(cx.pp, a.key);
  const Ciphertext c = load_ciphertext(cx.pp, a.in, share.pub);
  Rng rng = cx.rng("decrypt");
  const Bytes m =
      connect_and_decrypt(cx.pp, share, c, parse_endpoint(cx.s.server), rng, cx.timeout());
  write_file_atomic(a.out, m, a.force, true);
  return kExitOk;
}

int cmd_verify(const Context& cx, const FileArgs& a) {
  const PublicKey pub = load_public_key(cx.pp, a.key);
  const Ciphertext c = load_ciphertext(cx.pp, a.in, pub);
  const CiphertextCheck check = verify_ciphertext(cx.pp, pub, c);
  if (check != CiphertextCheck::kOk) {
    throw Error(ErrorCode::kInvalidCiphertext, std::string(ciphertext_check_name(check)));
  }
  std::cout << nlohmann::json({{"valid", true}}).dump() << std::endl;
  return kExitOk;
}

int cmd_export_pub(const Context& cx, const FileArgs& a) {
  refuse_existing(a.out, a.force);
  const PublicKey pub = load_public_key(cx.pp, a.key);
  write_file_atomic(a.out, encode_public_key_file(cx.pp, pub), a.force);
  return kExitOk;
}

struct BenchArgs {
  std::size_t iters = 10;
  bool json = false;
  std::string out;
};

int cmd_bench(const Context& cx, const BenchArgs& a) {
  const auto rows = run_bench(cx.s.params, a.iters, cx.s.seed);
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw Error(ErrorCode::kConfig, "cannot write " + a.out);
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  if (a.json) {
    write_bench_json(out, cx.s.params, a.iters, rows);
  } else {
    write_bench_csv(out, rows);
  }
  return kExitOk;
}

void report(const std::string& name, const std::string& message, int exit) {
  std::cerr << nlohmann::json({{"error", name}, {"message", message}, {"exit", exit}}).dump()
            << std::endl;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"dvps: two-party server-assisted ElGamal decryption"};
  app.require_subcommand(1);
  std::map<std::string, std::string> flags;
  auto setting = [&flags](CLI::App* cmd, const std::string& flag, const std::string& key,
                          const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  std::string config;
  app.add_option("--config", config, "JSON file with default settings");
  setting(&app, "--params", "params", "prod, toy or lite");
  setting(&app, "--seed", "seed", "derive all randomness from this string");
  setting(&app, "--timeout-ms", "timeout_ms", "network timeout");
  setting(&app, "--log-level", "log_level", "operator log level");

  KeygenArgs kg;
  auto* keygen = app.add_subcommand("keygen", "run one side of the two-party key generation");
  keygen->add_option("--role", kg.role, "client or server")
      ->required()
      ->check(CLI::IsMember({"client", "server"}));
  keygen->add_option("--out", kg.out, "key file to write")->required();
  keygen->add_flag("--force", kg.force, "replace an existing key file");
  setting(keygen, "--connect", "server", "server address (client role)");
  setting(keygen, "--listen", "listen", "listen address (server role)");

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "run the server daemon");
  serve->add_option("--key", sv.key, "server key file");
  serve->add_flag("--keygen", sv.keygen, "accept one key generation, then serve with it");
  serve->add_option("--out", sv.out, "where --keygen writes the server key file");
  serve->add_flag("--force", sv.force, "replace an existing key file");
  setting(serve, "--listen", "listen", "listen address");
  setting(serve, "--idle-timeout-ms", "idle_timeout_ms", "close idle connections after this");

  FileArgs enc_a, dec_a, ver_a, exp_a;
  auto* enc = app.add_subcommand("encrypt", "encrypt a file to the joint public key");
  enc->add_option("--pub", enc_a.key, "public key or key file")->required();
  enc->add_option("--in", enc_a.in, "plaintext file")->required();
  enc->add_option("--out", enc_a.out, "ciphertext file")->required();
  enc->add_flag("--force", enc_a.force, "replace an existing output");

  auto* dec = app.add_subcommand("decrypt", "decrypt a file with the server's help");
  dec->add_option("--key", dec_a.key, "client key file")->required();
  dec->add_option("--in", dec_a.in, "ciphertext file")->required();
  dec->add_option("--out", dec_a.out, "plaintext file")->required();
  dec->add_flag("--force", dec_a.force, "replace an existing output");
  setting(dec, "--server", "server", "server address");

  auto* ver = app.add_subcommand("verify", "check the proofs of a ciphertext file");
  ver->add_option("--pub", ver_a.key, "public key or key file")->required();
  ver->add_option("--in", ver_a.in, "ciphertext file")->required();

  auto* exp = app.add_subcommand("export-pub", "write the public key of a key file");
  exp->add_option("--key", exp_a.key, "key file")->required();
  exp->add_option("--out", exp_a.out, "public key file")->required();
  exp->add_flag("--force", exp_a.force, "replace an existing output");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "time the operations and list message sizes");
  bench->add_option("--iters", bn.iters, "iterations");
  bench->add_flag("--json", bn.json, "JSON instead of CSV");
  bench->add_option("--out", bn.out, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report("Usage", e.what(), kExitUsage);
    return kExitUsage;
  }

  try {
    Context cx;
    cx.s = resolve_settings(flags, process_env,
                            config.empty() ? std::nullopt : std::optional<fs::path>(config));
    cx.pp = Params::by_name(cx.s.params);
    if (*keygen) return cmd_keygen(cx, kg);
    if (*serve) return cmd_serve(cx, sv);
    if (*enc) return cmd_encrypt(cx, enc_a);
    if (*dec) return cmd_decrypt(cx, dec_a);
    if (*ver) return cmd_verify(cx, ver_a);
    if (*exp) return cmd_export_pub(cx, exp_a);
    if (*bench) return cmd_bench(cx, bn);
    return kExitUsage;
  } catch (const Error& e) {
    const int code = exit_code(e.code());
    report(std::string(error_name(e.code())), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report("Internal", e.what(), kExitInternal);
    return kExitInternal;
  }
}

}  // namespace dvps::cli
