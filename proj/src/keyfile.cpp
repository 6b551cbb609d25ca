#include "dvps/keyfile.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <string_view>

#include "dvps/errors.hpp"
#include "dvps/wire.hpp"

namespace dvps {

namespace {

constexpr std::size_t kMagicBytes = 8;
constexpr std::size_t kFingerprintBytes = 32;

[[noreturn]] void key_error(const std::string& what) { throw Error(ErrorCode::kKeyFile, what); }

bool has_magic(ByteSpan b, const char* magic) {
  return b.size() >= kMagicBytes && std::memcmp(b.data(), magic, kMagicBytes) == 0;
}

void put_magic(Writer& w, const char* magic) {
  w.raw("magic", ByteSpan(reinterpret_cast<const std::uint8_t*>(magic), kMagicBytes));
}

template <class Share>
Bytes encode_key(const Params& pp, const Share& s, KeyRole role) {
  Writer w(pp);
  put_magic(w, kKeyMagic);
  const Bytes role_byte{static_cast<std::uint8_t>(role)};
  w.raw("role", role_byte);
  w.raw("fingerprint", pp.fingerprint());
  w.var("share", serialize(pp, s));
  w.var("pub", serialize(pp, s.pub));
  return w.data();
}

/// Checks the header and returns the reader positioned at the share.
void check_key_header(Reader& r, const Params& pp, KeyRole role) {
  if (r.raw(kMagicBytes) != Bytes(kKeyMagic, kKeyMagic + kMagicBytes)) key_error("not a key file");
  const Bytes got_role = r.raw(1);
  if (got_role[0] != static_cast<std::uint8_t>(role)) key_error("key file has the wrong role");
  if (r.raw(kFingerprintBytes) != pp.fingerprint()) {
    key_error("key file was made for different parameters");
  }
}

template <class Share, class ReadShare>
Share decode_key(const Params& pp, ByteSpan b, KeyRole role, ReadShare read_share) {
  try {
    Reader r(pp, b);
    check_key_header(r, pp, role);
    const Bytes share_bytes = r.var();
    const Bytes pub_bytes = r.var();
    r.finish();
    Reader sr(pp, share_bytes);
    Share s = read_share(sr);
    sr.finish();
    if (decode_public_key(pp, pub_bytes) != s.pub) key_error("public key does not match share");
    return s;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kKeyFile) throw;
    key_error(std::string("corrupt key file: ") + e.what());
  }
}

}  // namespace

Bytes encode_key_file(const Params& pp, const ClientShare& s) {
  return encode_key(pp, s, KeyRole::kClient);
}

Bytes encode_key_file(const Params& pp, const ServerShare& s) {
  return encode_key(pp, s, KeyRole::kServer);
}

Bytes encode_public_key_file(const Params& pp, const PublicKey& pub) {
  Writer w(pp);
  put_magic(w, kPubMagic);
  w.raw("fingerprint", pp.fingerprint());
  w.var("pub", serialize(pp, pub));
  return w.data();
}

KeyRole key_file_role(ByteSpan b) {
  if (!has_magic(b, kKeyMagic) || b.size() < kMagicBytes + 1) key_error("not a key file");
  const std::uint8_t role = b[kMagicBytes];
  if (role != 1 && role != 2) key_error("unknown key role");
  return static_cast<KeyRole>(role);
}

ClientShare decode_client_key(const Params& pp, ByteSpan b) {
  return decode_key<ClientShare>(pp, b, KeyRole::kClient, read_client_share);
}

ServerShare decode_server_key(const Params& pp, ByteSpan b) {
  return decode_key<ServerShare>(pp, b, KeyRole::kServer, read_server_share);
}

PublicKey decode_any_public_key(const Params& pp, ByteSpan b) {
  if (has_magic(b, kKeyMagic)) {
    return key_file_role(b) == KeyRole::kClient ? decode_client_key(pp, b).pub
                                                : decode_server_key(pp, b).pub;
  }
  if (!has_magic(b, kPubMagic)) key_error("not a public key file");
  try {
    Reader r(pp, b);
    r.raw(kMagicBytes);
    if (r.raw(kFingerprintBytes) != pp.fingerprint()) {
      key_error("public key file was made for different parameters");
    }
    const Bytes pub_bytes = r.var();
    r.finish();
    return decode_public_key(pp, pub_bytes);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kKeyFile) throw;
    key_error(std::string("corrupt public key file: ") + e.what());
  }
}

Bytes read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) key_error("cannot read " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& p, ByteSpan data, bool force,
                       bool private_mode) {
  if (!force && std::filesystem::exists(p)) {
    throw Error(ErrorCode::kFileExists, p.string() + " exists; pass --force to replace it");
  }
  std::filesystem::path tmp = p;
  tmp += ".tmp." + std::to_string(::getpid());
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC,
                        private_mode ? 0600 : 0644);
  if (fd < 0) key_error("cannot create " + tmp.string() + ": " + std::strerror(errno));
  std::size_t off = 0;
  bool ok = true;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      ok = false;
      break;
    }
    off += static_cast<std::size_t>(n);
  }
  ok = ok && ::fsync(fd) == 0;
  ok = (::close(fd) == 0) && ok;
  if (!ok) {
    ::unlink(tmp.c_str());
    key_error("cannot write " + p.string());
  }
  // Without force, link() refuses an existing target atomically.
  if (!force) {
    const int rc = ::link(tmp.c_str(), p.c_str());
    const int err = errno;
    ::unlink(tmp.c_str());
    if (rc != 0 && err == EEXIST) {
      throw Error(ErrorCode::kFileExists, p.string() + " exists; pass --force to replace it");
    }
    if (rc != 0) key_error("cannot write " + p.string() + ": " + std::strerror(err));
    return;
  }
  if (::rename(tmp.c_str(), p.c_str()) != 0) {
    ::unlink(tmp.c_str());
    key_error("cannot write " + p.string());
  }
}

ClientShare load_client_key(const Params& pp, const std::filesystem::path& p) {
  return decode_client_key(pp, read_file(p));
}

ServerShare load_server_key(const Params& pp, const std::filesystem::path& p) {
  return decode_server_key(pp, read_file(p));
}

PublicKey load_public_key(const Params& pp, const std::filesystem::path& p) {
  return decode_any_public_key(pp, read_file(p));
}

}  // namespace dvps
