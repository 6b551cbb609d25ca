#include "dvps/channel.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>

#include "dvps/errors.hpp"

namespace dvps {

bool known_msg_type(std::uint8_t t) { return t >= 1 && t <= 9; }

Message expect(Channel& ch, MsgType type, const SessionId& sid) {
  Message m = ch.recv();
  if (m.type == MsgType::kReject) throw Error(ErrorCode::kServerRejected, "peer rejected");
  if (m.type != type) throw Error(ErrorCode::kChannelError, "unexpected message type");
  if (m.sid != sid) throw Error(ErrorCode::kChannelError, "session id mismatch");
  return m;
}

void send_reject(Channel& ch, const SessionId& sid) noexcept {
  try {
    ch.send({MsgType::kReject, sid, {}});
  } catch (...) {
  }
}

namespace {

struct Queue {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Message> items;
  bool closed = false;
};

class MemoryChannel final : public Channel {
 public:
  MemoryChannel(std::shared_ptr<Queue> in, std::shared_ptr<Queue> out,
                std::chrono::milliseconds timeout)
      : in_(std::move(in)), out_(std::move(out)), timeout_(timeout) {}

  ~MemoryChannel() override {
    std::lock_guard lock(out_->mu);
    out_->closed = true;
    out_->cv.notify_all();
  }

  void send(const Message& m) override {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw Error(ErrorCode::kChannelError, "channel closed");
    out_->items.push_back(m);
    out_->cv.notify_all();
  }

  Message recv() override {
    std::unique_lock lock(in_->mu);
    if (!in_->cv.wait_for(lock, timeout_, [&] { return !in_->items.empty() || in_->closed; })) {
      throw Error(ErrorCode::kTimeout, "no message");
    }
    if (in_->items.empty()) throw Error(ErrorCode::kChannelError, "channel closed");
    Message m = std::move(in_->items.front());
    in_->items.pop_front();
    return m;
  }

 private:
  std::shared_ptr<Queue> in_;
  std::shared_ptr<Queue> out_;
  std::chrono::milliseconds timeout_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> memory_channel_pair(
    std::chrono::milliseconds timeout) {
  auto a = std::make_shared<Queue>();
  auto b = std::make_shared<Queue>();
  return {std::make_unique<MemoryChannel>(a, b, timeout),
          std::make_unique<MemoryChannel>(b, a, timeout)};
}

}  // namespace dvps
