#include <exception>
#include <mutex>
#include <thread>

#include "dvps/errors.hpp"
#include "dvps/harness/harness.hpp"
#include "dvps/rng.hpp"

namespace dvps::harness {

namespace {

class RecordingChannel final : public Channel {
 public:
  RecordingChannel(Channel& inner, std::vector<Message>* log, std::mutex* mu)
      : inner_(inner), log_(log), mu_(mu) {}

  void send(const Message& m) override {
    if (log_ != nullptr) {
      std::lock_guard lock(*mu_);
      log_->push_back(m);
    }
    inner_.send(m);
  }
  Message recv() override { return inner_.recv(); }

 private:
  Channel& inner_;
  std::vector<Message>* log_;
  std::mutex* mu_;
};

}  // namespace

LocalKeys local_keygen(const Params& pp, Rng& client_rng, Rng& server_rng, const SessionId& sid,
                       std::vector<Message>* transcript) {
  auto [a, b] = memory_channel_pair();
  std::mutex mu;
  RecordingChannel client_ch(*a, transcript, &mu);
  RecordingChannel server_ch(*b, transcript, &mu);

  LocalKeys keys;
  std::exception_ptr server_error;
  std::thread server([&] {
    try {
      keys.server = keygen_server(pp, server_rng, server_ch);
    } catch (...) {
      server_error = std::current_exception();
    }
  });
  std::exception_ptr client_error;
  try {
    keys.client = keygen_client(pp, client_rng, client_ch, sid);
  } catch (...) {
    client_error = std::current_exception();
  }
  server.join();
  if (client_error) std::rethrow_exception(client_error);
  if (server_error) std::rethrow_exception(server_error);
  return keys;
}

LocalKeys local_keygen(const Params& pp, const std::string& seed,
                       std::vector<Message>* transcript) {
  Rng crng(seed + "/client");
  Rng srng(seed + "/server");
  Rng sid_rng(seed + "/sid");
  return local_keygen(pp, crng, srng, random_session_id(sid_rng), transcript);
}

Bytes local_decrypt(const Params& pp, const LocalKeys& keys, ServerShare& server,
                    const Ciphertext& c, Rng& rng) {
  SessionId sid = random_session_id(rng);
  auto [req, st] = client_blind(pp, keys.client, c, sid, rng);
  ServerResponse resp = server_respond(pp, server, req, sid, rng);
  return client_finish(pp, keys.client, resp, std::move(st));
}

}  // namespace dvps::harness
