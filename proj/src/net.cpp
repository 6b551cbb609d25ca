#include "dvps/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include <spdlog/sinks/null_sink.h>
#include <spdlog/spdlog.h>

#include "dvps/errors.hpp"
#include "dvps/wire.hpp"

namespace dvps {

Endpoint parse_endpoint(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) {
    throw Error(ErrorCode::kConfig, "endpoint must be host:port");
  }
  unsigned port = 0;
  const char* first = s.data() + colon + 1;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || ptr != last || port > 65535) {
    throw Error(ErrorCode::kConfig, "bad port in endpoint");
  }
  return {s.substr(0, colon), static_cast<std::uint16_t>(port)};
}

// --- TcpChannel ----------------------------------------------------------------

TcpChannel::TcpChannel(int fd, std::chrono::milliseconds timeout) : fd_(fd), timeout_(timeout) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

TcpChannel::~TcpChannel() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpChannel> TcpChannel::connect(const Endpoint& ep,
                                                std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  if (::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res) != 0) {
    throw Error(ErrorCode::kChannelError, "cannot resolve " + ep.host);
  }
  int fd = -1;
  for (addrinfo* a = res; a != nullptr; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw Error(ErrorCode::kChannelError, "cannot connect to " + ep.str());
  return std::make_unique<TcpChannel>(fd, timeout);
}

void TcpChannel::send_raw(ByteSpan b) {
  std::size_t off = 0;
  while (off < b.size()) {
    const ssize_t n = ::send(fd_, b.data() + off, b.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw Error(ErrorCode::kChannelError, "send failed");
    off += static_cast<std::size_t>(n);
  }
}

void TcpChannel::send(const Message& m) { send_raw(encode_frame(m)); }

void TcpChannel::read_exact(std::uint8_t* out, std::size_t n) {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::size_t off = 0;
  while (off < n) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw Error(ErrorCode::kTimeout, "no message");
    pollfd p{fd_, POLLIN, 0};
    const int r = ::poll(&p, 1, static_cast<int>(left.count()));
    if (r < 0 && errno == EINTR) continue;
    if (r < 0) throw Error(ErrorCode::kChannelError, "poll failed");
    if (r == 0) throw Error(ErrorCode::kTimeout, "no message");
    const ssize_t got = ::recv(fd_, out + off, n - off, 0);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) throw Error(ErrorCode::kChannelError, "connection closed");
    off += static_cast<std::size_t>(got);
  }
}

Message TcpChannel::recv() {
  Bytes frame(kFrameHeaderBytes);
  read_exact(frame.data(), frame.size());
  const FrameHeader h = decode_frame_header(frame);
  frame.resize(kFrameHeaderBytes + h.length);
  if (h.length > 0) read_exact(frame.data() + kFrameHeaderBytes, h.length);
  return decode_frame(frame);
}

void TcpChannel::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

// --- TcpListener ---------------------------------------------------------------

TcpListener::TcpListener(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  if (::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res) != 0 || !res) {
    throw Error(ErrorCode::kChannelError, "cannot resolve " + ep.host);
  }
  int fd = ::socket(res->ai_family, res->ai_socktype | SOCK_CLOEXEC, res->ai_protocol);
  int one = 1;
  if (fd >= 0) ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (fd < 0 || ::bind(fd, res->ai_addr, res->ai_addrlen) != 0 || ::listen(fd, 64) != 0) {
    ::freeaddrinfo(res);
    if (fd >= 0) ::close(fd);
    throw Error(ErrorCode::kChannelError, "cannot listen on " + ep.str());
  }
  ::freeaddrinfo(res);
  sockaddr_storage bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port
                                            : reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  fd_ = fd;
}

TcpListener::~TcpListener() { close(); }

void TcpListener::close() {
  const int fd = fd_.exchange(-1);
  if (fd >= 0) {
    ::shutdown(fd, SHUT_RDWR);
    ::close(fd);
  }
}

int TcpListener::accept_fd() {
  for (;;) {
    const int lfd = fd_.load();
    if (lfd < 0) return -1;
    const int fd = ::accept4(lfd, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0 && errno == EINTR) continue;
    return fd;
  }
}

std::unique_ptr<TcpChannel> TcpListener::accept(std::chrono::milliseconds timeout) {
  const int lfd = fd_.load();
  if (lfd < 0) throw Error(ErrorCode::kChannelError, "listener closed");
  pollfd p{lfd, POLLIN, 0};
  const int r = ::poll(&p, 1, static_cast<int>(timeout.count()));
  if (r == 0) throw Error(ErrorCode::kTimeout, "no connection");
  const int fd = accept_fd();
  if (fd < 0) throw Error(ErrorCode::kChannelError, "accept failed");
  return std::make_unique<TcpChannel>(fd, timeout);
}

// --- Daemon ----------------------------------------------------------------------

namespace {

/// Replays an already-read first message, then defers to the socket.
class PrefixChannel final : public Channel {
 public:
  PrefixChannel(Channel& inner, Message first) : inner_(inner), first_(std::move(first)) {}
  void send(const Message& m) override { inner_.send(m); }
  Message recv() override {
    if (first_) {
      Message m = std::move(*first_);
      first_.reset();
      return m;
    }
    return inner_.recv();
  }

 private:
  Channel& inner_;
  std::optional<Message> first_;
};

std::string sid_hex(const SessionId& sid) { return to_hex(sid); }

}  // namespace

Daemon::Daemon(Params pp, std::optional<ServerShare> share, DaemonConfig cfg, Rng rng)
    : pp_(std::move(pp)), cfg_(std::move(cfg)), rng_(std::move(rng)) {
  log_ = cfg_.log ? cfg_.log : std::make_shared<spdlog::logger>(
                                   "dvps", std::make_shared<spdlog::sinks::null_sink_mt>());
  if (share) share_ = std::make_shared<ServerShare>(std::move(*share));
}

Daemon::~Daemon() { stop(); }

std::shared_ptr<ServerShare> Daemon::share() const {
  std::lock_guard lock(share_mu_);
  return share_;
}

bool Daemon::has_share() const { return share() != nullptr; }

std::uint32_t Daemon::fail_count() const {
  auto s = share();
  return s ? s->fail_count.load() : 0;
}

void Daemon::start() {
  listener_ = std::make_unique<TcpListener>(cfg_.listen);
  port_ = listener_->port();
  running_ = true;
  log_->info("listening on {}:{} ({} profile, {})", cfg_.listen.host, port_, pp_.profile,
             has_share() ? "decrypt" : "keygen");
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Daemon::stop() {
  if (!running_.exchange(false)) return;
  listener_->close();
  if (acceptor_.joinable()) acceptor_.join();
  std::map<std::uint64_t, std::thread> workers;
  {
    std::lock_guard lock(conns_mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
    finished_.clear();
  }
  for (auto& [id, t] : workers) t.join();
  {
    std::lock_guard lock(stop_mu_);
    stop_cv_.notify_all();
  }
  log_->info("stopped after {} sessions", served_.load());
}

void Daemon::wait() {
  std::unique_lock lock(stop_mu_);
  stop_cv_.wait(lock, [this] { return !running_.load(); });
}

void Daemon::accept_loop() {
  while (running_) {
    const int fd = listener_->accept_fd();
    if (fd < 0) {
      if (!running_) break;
      log_->warn("accept failed: {}", std::strerror(errno));
      continue;
    }
    std::lock_guard lock(conns_mu_);
    for (std::uint64_t id : finished_) {
      workers_[id].join();
      workers_.erase(id);
    }
    finished_.clear();
    open_fds_.insert(fd);
    const std::uint64_t id = next_worker_++;
    workers_.emplace(id, std::thread([this, fd, id] { handle(fd, id); }));
  }
}

bool Daemon::claim_session(const SessionId& sid, SessionRecord::Phase phase) {
  std::lock_guard lock(sessions_mu_);
  if (!used_.insert(sid).second) return false;
  const auto now = std::chrono::steady_clock::now();
  sessions_[sid] = {phase, now, now};
  return true;
}

void Daemon::finish_session(const SessionId& sid) {
  std::lock_guard lock(sessions_mu_);
  sessions_.erase(sid);
}

void Daemon::expire_sessions() {
  std::lock_guard lock(sessions_mu_);
  const auto cutoff = std::chrono::steady_clock::now() - cfg_.idle_timeout;
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second.last_seen < cutoff; });
}

void Daemon::handle(int fd, std::uint64_t id) {
  Rng rng = [this] {
    std::lock_guard lock(rng_mu_);
    return rng_.fork();
  }();
  {
    TcpChannel ch(fd, cfg_.idle_timeout);
    // Sessions are named by their id; a connection may carry several.
    try {
      while (running_) {
        Message m = ch.recv();
        expire_sessions();
        switch (m.type) {
          case MsgType::kDecReq: handle_decrypt(ch, m, rng); break;
          case MsgType::kKg1: handle_keygen(ch, m, rng); break;
          default:
            log_->info("session {} rejected: unexpected message", sid_hex(m.sid));
            send_reject(ch, m.sid);
        }
      }
    } catch (const Error& e) {
      // Framing errors, idle and dropped peers; the failure counter is untouched.
      if (e.code() == ErrorCode::kMalformedEncoding) {
        log_->info("connection dropped: {}", error_name(e.code()));
        send_reject(ch, SessionId{});
      }
    } catch (const std::exception&) {
      log_->error("connection dropped: internal error");
    }
    std::lock_guard lock(conns_mu_);
    open_fds_.erase(fd);
    finished_.push_back(id);
  }
}

void Daemon::handle_decrypt(Channel& ch, const Message& m, Rng& rng) {
  auto share = this->share();
  if (!share) {
    log_->info("session {} rejected: no share loaded", sid_hex(m.sid));
    send_reject(ch, m.sid);
    return;
  }
  if (!claim_session(m.sid, SessionRecord::Phase::kDecrypt)) {
    log_->info("session {} rejected: reused session id", sid_hex(m.sid));
    send_reject(ch, m.sid);
    return;
  }
  const std::uint32_t before = share->fail_count.load();
  try {
    const BlindedRequest req = decode_request(pp_, m.payload, share->pub);
    const ServerResponse resp = server_respond(pp_, *share, req, m.sid, rng);
    ch.send({MsgType::kDecResp, m.sid, serialize(pp_, resp)});
    ++served_;
    log_->info("session {} answered", sid_hex(m.sid));
  } catch (const Error& e) {
    log_->info("session {} rejected: {}", sid_hex(m.sid), error_name(e.code()));
    send_reject(ch, m.sid);
  }
  const std::uint32_t after = share->fail_count.load();
  if (after != before) {
    log_->warn("failure counter now {}", after);
    if (cfg_.on_fail_count) cfg_.on_fail_count(after);
  }
  finish_session(m.sid);
}

void Daemon::handle_keygen(Channel& ch, const Message& m, Rng& rng) {
  if (!cfg_.keygen || has_share() || keygen_busy_.exchange(true)) {
    log_->info("session {} rejected: keygen not available", sid_hex(m.sid));
    send_reject(ch, m.sid);
    return;
  }
  if (!claim_session(m.sid, SessionRecord::Phase::kKeygen)) {
    keygen_busy_ = false;
    log_->info("session {} rejected: reused session id", sid_hex(m.sid));
    send_reject(ch, m.sid);
    return;
  }
  try {
    PrefixChannel pc(ch, m);
    ServerShare s = keygen_server(pp_, rng, pc);
    if (cfg_.on_keygen) cfg_.on_keygen(s);
    {
      std::lock_guard lock(share_mu_);
      share_ = std::make_shared<ServerShare>(std::move(s));
    }
    ++served_;
    log_->info("session {} keygen complete", sid_hex(m.sid));
  } catch (const Error& e) {
    log_->info("session {} keygen aborted: {}", sid_hex(m.sid), error_name(e.code()));
    send_reject(ch, m.sid);
  }
  keygen_busy_ = false;
  finish_session(m.sid);
}

// --- clients -------------------------------------------------------------------

Bytes connect_and_decrypt(const Params& pp, const ClientShare& share, const Ciphertext& c,
                          const Endpoint& server, Rng& rng, std::chrono::milliseconds timeout) {
  const SessionId sid = random_session_id(rng);
  auto [req, st] = client_blind(pp, share, c, sid, rng);
  auto ch = TcpChannel::connect(server, timeout);
  ch->send({MsgType::kDecReq, sid, serialize(pp, req, share.pub)});
  const Message m = expect(*ch, MsgType::kDecResp, sid);
  return client_finish(pp, share, decode_response(pp, m.payload), std::move(st));
}

ClientShare connect_and_keygen(const Params& pp, const Endpoint& server, Rng& rng,
                               std::chrono::milliseconds timeout) {
  const SessionId sid = random_session_id(rng);
  auto ch = TcpChannel::connect(server, timeout);
  return keygen_client(pp, rng, *ch, sid);
}

}  // namespace dvps
