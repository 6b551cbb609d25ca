#pragma once

#include <atomic>
#include <condition_variable>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "dvps/channel.hpp"
#include "dvps/dvps.hpp"
#include "dvps/params.hpp"
#include "dvps/rng.hpp"

namespace spdlog {
class logger;
}

namespace dvps {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::string str() const { return host + ":" + std::to_string(port); }
};

/// "host:port"; throws Config on anything else.
Endpoint parse_endpoint(const std::string& s);

/// Framed messages over a connected TCP socket. Owns the descriptor.
class TcpChannel final : public Channel {
 public:
  TcpChannel(int fd, std::chrono::milliseconds timeout);
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  /// Throws ChannelError if the connection cannot be made.
  static std::unique_ptr<TcpChannel> connect(const Endpoint& ep,
                                             std::chrono::milliseconds timeout);

  void send(const Message& m) override;
  /// Throws MalformedEncoding on a bad header, ChannelError on close, Timeout.
  Message recv() override;
  /// Sends raw bytes; for tests that need to break framing.
  void send_raw(ByteSpan b);
  void shutdown();

 private:
  void read_exact(std::uint8_t* out, std::size_t n);

  int fd_;
  std::chrono::milliseconds timeout_;
};

/// Bound, listening socket.
class TcpListener {
 public:
  /// Throws ChannelError on bind failure. Port 0 picks a free port.
  explicit TcpListener(const Endpoint& ep);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  /// Returns -1 once close() was called.
  int accept_fd();
  std::unique_ptr<TcpChannel> accept(std::chrono::milliseconds timeout);
  void close();

 private:
  std::atomic<int> fd_{-1};
  std::uint16_t port_ = 0;
};

struct DaemonConfig {
  Endpoint listen;
  std::chrono::milliseconds idle_timeout{30000};
  /// Serve keygen requests when no share is loaded.
  bool keygen = false;
  /// Called after a successful keygen; the daemon then serves decryptions.
  std::function<void(const ServerShare&)> on_keygen;
  /// Called after every change of the failure counter, for persistence.
  std::function<void(std::uint32_t)> on_fail_count;
  std::shared_ptr<spdlog::logger> log;
};

/// Per-session bookkeeping; the key material never enters it.
struct SessionRecord {
  enum class Phase { kKeygen, kDecrypt, kDone };
  Phase phase = Phase::kDecrypt;
  std::chrono::steady_clock::time_point created;
  std::chrono::steady_clock::time_point last_seen;
};

/// The server role: one thread per connection, REJECT frames without detail,
/// reason codes to the operator log only.
class Daemon {
 public:
  Daemon(Params pp, std::optional<ServerShare> share, DaemonConfig cfg, Rng rng);
  ~Daemon();

  /// Binds and starts accepting. Throws ChannelError on bind failure.
  void start();
  /// Port actually bound (useful with port 0).
  std::uint16_t port() const { return port_; }
  void stop();
  /// Blocks until stop() is called from elsewhere.
  void wait();

  std::uint32_t fail_count() const;
  bool has_share() const;
  std::size_t sessions_served() const { return served_.load(); }

 private:
  void accept_loop();
  void handle(int fd, std::uint64_t id);
  void handle_decrypt(Channel& ch, const Message& m, Rng& rng);
  std::shared_ptr<ServerShare> share() const;
  void handle_keygen(Channel& ch, const Message& m, Rng& rng);
  bool claim_session(const SessionId& sid, SessionRecord::Phase phase);
  void finish_session(const SessionId& sid);
  void expire_sessions();

  Params pp_;
  DaemonConfig cfg_;
  std::shared_ptr<spdlog::logger> log_;

  mutable std::mutex share_mu_;
  std::shared_ptr<ServerShare> share_;
  std::atomic<bool> keygen_busy_{false};

  std::mutex rng_mu_;
  Rng rng_;

  std::mutex sessions_mu_;
  std::map<SessionId, SessionRecord> sessions_;
  std::set<SessionId> used_;

  std::unique_ptr<TcpListener> listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex conns_mu_;
  std::map<std::uint64_t, std::thread> workers_;
  std::vector<std::uint64_t> finished_;
  std::uint64_t next_worker_ = 0;
  std::set<int> open_fds_;
  std::atomic<std::size_t> served_{0};
  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
};

/// Verifies and blinds locally (InvalidCiphertext before any connection),
/// sends exactly one DEC_REQ and finishes. The blinding state is dropped on
/// every failure; a retry must call again and blind afresh.
Bytes connect_and_decrypt(const Params& pp, const ClientShare& share, const Ciphertext& c,
                          const Endpoint& server, Rng& rng,
                          std::chrono::milliseconds timeout = std::chrono::seconds(30));

/// Client side of keygen against a daemon.
ClientShare connect_and_keygen(const Params& pp, const Endpoint& server, Rng& rng,
                               std::chrono::milliseconds timeout = std::chrono::seconds(60));

}  // namespace dvps
