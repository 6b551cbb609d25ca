#pragma once

#include <cstddef>

#include "dvps/bytes.hpp"

namespace dvps {

Bytes shake256(ByteSpan data, std::size_t out_len);
Bytes sha256(ByteSpan data);

/// expand_message_xmd with SHA-256 (RFC 9380, section 5.3.1).
Bytes expand_message_xmd_sha256(ByteSpan msg, ByteSpan dst, std::size_t len_in_bytes);

}  // namespace dvps
