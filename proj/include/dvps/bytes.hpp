#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dvps {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

Bytes to_bytes(std::string_view s);

// Big-endian, left-padded to exactly `width` bytes. Throws IntegerOutOfRange if
// the value is negative or does not fit.
Bytes int_to_bytes(const mpz_class& v, std::size_t width);
// Minimal big-endian magnitude; zero encodes as an empty string.
Bytes int_to_bytes(const mpz_class& v);
mpz_class int_from_bytes(ByteSpan data);

std::size_t byte_len(std::size_t bits);

void append(Bytes& out, ByteSpan data);
void append_u32(Bytes& out, std::uint32_t v);

}  // namespace dvps
