#pragma once

#include <cstdint>
#include <filesystem>

#include "dvps/bytes.hpp"
#include "dvps/dvps.hpp"
#include "dvps/params.hpp"

namespace dvps {

enum class KeyRole : std::uint8_t { kClient = 1, kServer = 2 };

// Key file: "DVPSKEY1", role(1), params fingerprint(32), var(share), var(pub).
// Public key file: "DVPSPUB1", params fingerprint(32), var(pub).
inline constexpr char kKeyMagic[] = "DVPSKEY1";
inline constexpr char kPubMagic[] = "DVPSPUB1";

Bytes encode_key_file(const Params& pp, const ClientShare& s);
Bytes encode_key_file(const Params& pp, const ServerShare& s);
Bytes encode_public_key_file(const Params& pp, const PublicKey& pub);

/// All loaders throw KeyFile on a wrong magic, role or parameter fingerprint.
KeyRole key_file_role(ByteSpan b);
ClientShare decode_client_key(const Params& pp, ByteSpan b);
ServerShare decode_server_key(const Params& pp, ByteSpan b);
/// Accepts a public key file or either kind of key file.
PublicKey decode_any_public_key(const Params& pp, ByteSpan b);

Bytes read_file(const std::filesystem::path& p);
/// Writes through a temporary sibling and renames it into place, so the
/// target is either absent or complete. Throws FileExists unless `force`.
void write_file_atomic(const std::filesystem::path& p, ByteSpan data, bool force,
                       bool private_mode = false);

ClientShare load_client_key(const Params& pp, const std::filesystem::path& p);
ServerShare load_server_key(const Params& pp, const std::filesystem::path& p);
PublicKey load_public_key(const Params& pp, const std::filesystem::path& p);

}  // namespace dvps
