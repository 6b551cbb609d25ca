#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <utility>

#include "dvps/bytes.hpp"

namespace dvps {

enum class MsgType : std::uint8_t {
  kKg1 = 1,
  kKg2 = 2,
  kKg3 = 3,
  kKg4 = 4,
  kKg5 = 5,
  kKg6 = 6,
  kDecReq = 7,
  kDecResp = 8,
  kReject = 9,
};

bool known_msg_type(std::uint8_t t);

using SessionId = std::array<std::uint8_t, 16>;

struct Message {
  MsgType type = MsgType::kReject;
  SessionId sid{};
  Bytes payload;
};

/// Ordered, reliable message pipe between the two protocol parties.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const Message& m) = 0;
  /// Throws ChannelError on close and Timeout when nothing arrives in time.
  virtual Message recv() = 0;
};

/// Receives one message and checks its type and session. A REJECT from the
/// peer raises ServerRejected; anything else unexpected raises ChannelError.
Message expect(Channel& ch, MsgType type, const SessionId& sid);
/// Best-effort REJECT; never throws.
void send_reject(Channel& ch, const SessionId& sid) noexcept;

/// Connected in-process pair, for tests and the harness.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> memory_channel_pair(
    std::chrono::milliseconds timeout = std::chrono::seconds(30));

}  // namespace dvps
