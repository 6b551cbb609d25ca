// Answers one decryption request with a valid-looking but wrong share value.
#include <iostream>

#include "dvps/keyfile.hpp"
#include "dvps/net.hpp"
#include "dvps/wire.hpp"

using namespace dvps;

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: rogue_server <params> <server key file>\n";
    return 2;
  }
  const Params pp = Params::by_name(argv[1]);
  ServerShare share = load_server_key(pp, argv[2]);
  TcpListener listener({"127.0.0.1", 0});
  std::cout << "listening 127.0.0.1:" << listener.port() << std::endl;
  Rng rng("rogue");
  auto ch = listener.accept(std::chrono::seconds(30));
  const Message m = ch->recv();
  const BlindedRequest req = decode_request(pp, m.payload, share.pub);
  ServerResponse resp = server_respond(pp, share, req, m.sid, rng);
  resp.w = pp.g().mul(resp.w, pp.g().generator());
  ch->send({MsgType::kDecResp, m.sid, serialize(pp, resp)});
  return 0;
}
