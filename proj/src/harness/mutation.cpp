#include "dvps/harness/mutation.hpp"

#include "json.hpp"

#include <deque>
#include <functional>

#include "dvps/errors.hpp"
#include "dvps/harness/harness.hpp"
#include "dvps/rng.hpp"

namespace dvps::harness {

namespace {

const char* kMessageNames[] = {"", "KG1", "KG2", "KG3", "KG4", "KG5", "KG6", "DEC_REQ",
                               "DEC_RESP", "REJECT"};

std::string message_name(MsgType t) { return kMessageNames[static_cast<int>(t)]; }

std::vector<FieldSpan> payload_spans(const Params& pp, const Message& m, const PublicKey* pub) {
  Writer w(pp);
  Reader r(pp, m.payload);
  switch (m.type) {
    case MsgType::kKg1:
    case MsgType::kKg2:
      w.raw("commitment", m.payload);
      break;
    case MsgType::kKg6:
      w.raw("confirm", m.payload);
      break;
    case MsgType::kKg3:
    case MsgType::kKg4:
      write(w, read_opening(r));
      break;
    case MsgType::kKg5:
      write(w, read_setup(r));
      break;
    case MsgType::kDecReq:
      if (pub == nullptr) throw Error(ErrorCode::kInvalidParams, "request spans need the key");
      write(w, read_request(r, *pub), *pub);
      break;
    case MsgType::kDecResp:
      write(w, read_response(r));
      break;
    case MsgType::kReject:
      break;
  }
  if (w.data() != m.payload) throw Error(ErrorCode::kMalformedEncoding, "payload not canonical");
  return w.spans();
}

/// Ciphertext file layout, mirroring encode_ciphertext_file.
std::vector<FieldSpan> ciphertext_file_spans(const Params& pp, const Ciphertext& c,
                                             const PublicKey& pub) {
  Writer w(pp);
  w.raw("magic", to_bytes("DVPSCT01"));
  w.push("c1");
  write_c1(w, c, pub);
  w.pop();
  w.push("c2");
  write_c2(w, c.c2);
  w.pop();
  if (w.data() != encode_ciphertext_file(pp, c, pub)) {
    throw Error(ErrorCode::kMalformedEncoding, "ciphertext file layout drifted");
  }
  return w.spans();
}

/// Plays back a fixed list of incoming messages and swallows everything sent.
class ScriptChannel final : public Channel {
 public:
  explicit ScriptChannel(std::deque<std::function<Message()>> script)
      : script_(std::move(script)) {}

  void send(const Message&) override {}
  Message recv() override {
    if (script_.empty()) throw Error(ErrorCode::kChannelError, "script exhausted");
    auto next = std::move(script_.front());
    script_.pop_front();
    return next();
  }

 private:
  std::deque<std::function<Message()>> script_;
};

/// Runs the receiver; returns the error name, or "" when it accepted.
std::string outcome_of(const std::function<void()>& receiver) {
  try {
    receiver();
    return "";
  } catch (const Error& e) {
    return std::string(error_name(e.code()));
  } catch (const std::exception&) {
    return "exception";
  }
}

bool from_client(MsgType t) {
  return t == MsgType::kKg1 || t == MsgType::kKg3 || t == MsgType::kKg6;
}

struct Target {
  std::string name;
  Bytes data;
  std::vector<FieldSpan> spans;
  /// Delivers `data` (possibly mutated) to the receiver.
  std::function<void(const Bytes&)> deliver;
};

void run_targets(const Params& pp, const std::vector<Target>& targets, const CampaignOptions& opts,
                 CampaignReport& report) {
  Rng rng(opts.seed + "/mutations");
  for (const Target& t : targets) {
    MessageSummary& sum = report.messages[t.name];
    sum.fields = t.spans.size();
    for (std::size_t i = 0; i < t.spans.size(); i += std::max<std::size_t>(opts.stride, 1)) {
      const FieldSpan& span = t.spans[i];
      auto run = [&](Mutation m) {
        Bytes data = mutate(pp, t.data, span, m, rng);
        MutantOutcome o{t.name, span.name, mutation_name(m), false, ""};
        o.outcome = outcome_of([&] { t.deliver(data); });
        o.accepted = o.outcome.empty();
        return o;
      };
      for (Mutation m : opts.mutations) {
        if (m == Mutation::kIdentity) continue;
        MutantOutcome o = run(m);
        ++report.mutants;
        ++sum.mutants;
        if (o.accepted) {
          report.accepted.push_back(o);
        } else {
          ++sum.rejected;
          ++report.outcomes[o.outcome];
        }
      }
    }
    // One identity control per message.
    if (!t.spans.empty()) {
      MutantOutcome o{t.name, "(none)", mutation_name(Mutation::kIdentity), false, ""};
      o.outcome = outcome_of([&] { t.deliver(t.data); });
      o.accepted = o.outcome.empty();
      ++report.controls;
      if (o.accepted) {
        ++report.controls_accepted;
      } else {
        report.control_failures.push_back(o);
      }
    }
  }
}

std::vector<Target> keygen_targets(const Params& pp, const std::string& seed) {
  std::vector<Message> msgs;
  local_keygen(pp, seed, &msgs);
  std::vector<Target> out;
  for (std::size_t k = 0; k < msgs.size(); ++k) {
    const Message& m = msgs[k];
    Target t;
    t.name = message_name(m.type);
    t.data = encode_frame(m);
    t.spans = frame_spans(pp, m, nullptr);
    const bool to_server = from_client(m.type);
    t.deliver = [&pp, msgs, k, to_server, seed](const Bytes& frame) {
      std::deque<std::function<Message()>> script;
      for (std::size_t j = 0; j < msgs.size(); ++j) {
        if (from_client(msgs[j].type) != to_server) continue;
        if (j == k) {
          script.push_back([frame] { return decode_frame(frame); });
        } else {
          Message copy = msgs[j];
          script.push_back([copy] { return copy; });
        }
      }
      ScriptChannel ch(std::move(script));
      if (to_server) {
        Rng srng(seed + "/server");
        keygen_server(pp, srng, ch);
      } else {
        Rng crng(seed + "/client");
        Rng sid_rng(seed + "/sid");
        keygen_client(pp, crng, ch, random_session_id(sid_rng));
      }
    };
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Target> decrypt_targets(const Params& pp, const std::string& seed) {
  auto keys = std::make_shared<LocalKeys>(local_keygen(pp, seed + "/keys"));
  const PublicKey& pub = keys->client.pub;
  Rng enc_rng(seed + "/encrypt");
  const Bytes plaintext = to_bytes("mutation campaign plaintext");
  Ciphertext c = encrypt(pp, pub, plaintext, enc_rng);
  Rng sid_rng(seed + "/sid");
  const SessionId sid = random_session_id(sid_rng);

  auto blind = [&pp, keys, sid, seed](const Ciphertext& ct) {
    Rng crng(seed + "/client");
    return client_blind(pp, keys->client, ct, sid, crng);
  };
  auto respond = [&pp, keys, sid, seed](const BlindedRequest& req, const SessionId& s) {
    ServerShare share = keys->server;
    share.fail_count.store(0);
    Rng srng(seed + "/server");
    return server_respond(pp, share, req, s, srng);
  };

  BlindedRequest req = blind(c).first;
  ServerResponse resp = respond(req, sid);
  Message req_msg{MsgType::kDecReq, sid, serialize(pp, req, pub)};
  Message resp_msg{MsgType::kDecResp, sid, serialize(pp, resp)};

  std::vector<Target> out;
  Target file;
  file.name = "CIPHERTEXT";
  file.data = encode_ciphertext_file(pp, c, pub);
  file.spans = ciphertext_file_spans(pp, c, pub);
  file.deliver = [&pp, keys, blind, respond, sid](const Bytes& data) {
    Ciphertext ct = decode_ciphertext_file(pp, data, keys->client.pub);
    auto [rq, st] = blind(ct);
    ServerResponse rs = respond(rq, sid);
    client_finish(pp, keys->client, rs, std::move(st));
  };
  out.push_back(std::move(file));

  Target request;
  request.name = "DEC_REQ";
  request.data = encode_frame(req_msg);
  request.spans = frame_spans(pp, req_msg, &pub);
  request.deliver = [&pp, keys, respond](const Bytes& frame) {
    Message m = decode_frame(frame);
    if (m.type != MsgType::kDecReq) throw Error(ErrorCode::kChannelError, "unexpected type");
    respond(decode_request(pp, m.payload, keys->client.pub), m.sid);
  };
  out.push_back(std::move(request));

  Target response;
  response.name = "DEC_RESP";
  response.data = encode_frame(resp_msg);
  response.spans = frame_spans(pp, resp_msg, nullptr);
  response.deliver = [&pp, keys, blind, c](const Bytes& frame) {
    auto [rq, st] = blind(c);
    Message m = decode_frame(frame);
    if (m.type != MsgType::kDecResp) throw Error(ErrorCode::kChannelError, "unexpected type");
    if (m.sid != st.sid()) throw Error(ErrorCode::kChannelError, "session id mismatch");
    client_finish(pp, keys->client, decode_response(pp, m.payload), std::move(st));
  };
  out.push_back(std::move(response));
  return out;
}

}  // namespace

std::string mutation_name(Mutation m) {
  switch (m) {
    case Mutation::kIdentity: return "identity";
    case Mutation::kFlipFirstBit: return "flip_first_bit";
    case Mutation::kFlipLastBit: return "flip_last_bit";
    case Mutation::kSubstitute: return "substitute";
  }
  return "unknown";
}

std::vector<FieldSpan> frame_spans(const Params& pp, const Message& m, const PublicKey* pub) {
  std::vector<FieldSpan> out{
      {"frame.version", FieldKind::kUint, 0, 1, 0},
      {"frame.type", FieldKind::kUint, 1, 1, 0},
      {"frame.sid", FieldKind::kBytes, 2, 16, 0},
      {"frame.length", FieldKind::kLength, 18, 4, 0},
  };
  for (FieldSpan s : payload_spans(pp, m, pub)) {
    s.offset += kFrameHeaderBytes;
    out.push_back(std::move(s));
  }
  return out;
}

Bytes mutate(const Params& pp, const Bytes& data, const FieldSpan& span, Mutation m, Rng& rng) {
  Bytes out = data;
  if (span.size == 0) return out;
  std::uint8_t* field = out.data() + span.offset;
  const ByteSpan original(data.data() + span.offset, span.size);
  auto store = [&](const mpz_class& v) {
    Bytes b = int_to_bytes(v, span.size);
    std::copy(b.begin(), b.end(), field);
  };
  switch (m) {
    case Mutation::kIdentity:
      break;
    case Mutation::kFlipFirstBit:
      field[0] ^= 0x80;
      break;
    case Mutation::kFlipLastBit:
      field[span.size - 1] ^= 0x01;
      break;
    case Mutation::kSubstitute: {
      const Group& g = pp.g();
      const mpz_class v = int_from_bytes(original);
      mpz_class cap;
      mpz_ui_pow_ui(cap.get_mpz_t(), 256, span.size);
      switch (span.kind) {
        case FieldKind::kElement: {
          Bytes e;
          do {
            e = g.encode(g.exp_g(g.random_nonzero_scalar(rng)));
          } while (ByteSpan(e).size() == original.size() &&
                   std::equal(e.begin(), e.end(), original.begin()));
          std::copy(e.begin(), e.end(), field);
          break;
        }
        case FieldKind::kScalar: {
          mpz_class s;
          do {
            s = g.random_scalar(rng).value();
          } while (s == v);
          store(s);
          break;
        }
        case FieldKind::kUint:
        case FieldKind::kLength:
          store(v + 1 < cap ? mpz_class(v + 1) : mpz_class(v - 1));
          break;
        case FieldKind::kHeCiphertext: {
          // Same ciphertext with the plaintext shifted by one.
          const mpz_class& n = span.modulus;
          store(mpz_class((v * (1 + n)) % (n * n)));
          break;
        }
        case FieldKind::kHeCoins: {
          mpz_class r;
          do {
            r = rng.range(1, span.modulus);
          } while (r == v);
          store(r);
          break;
        }
        case FieldKind::kHeModulus:
          store(v + 2 < cap ? mpz_class(v + 2) : mpz_class(v - 2));
          break;
        case FieldKind::kPrime: {
          mpz_class p;
          mpz_nextprime(p.get_mpz_t(), v.get_mpz_t());
          store(p < cap ? p : mpz_class(v - 2));
          break;
        }
        case FieldKind::kBytes: {
          Bytes b;
          do {
            b = rng.bytes(span.size);
          } while (std::equal(b.begin(), b.end(), original.begin()));
          std::copy(b.begin(), b.end(), field);
          break;
        }
      }
      break;
    }
  }
  return out;
}

CampaignReport mutation_campaign(const Params& pp, Protocol protocol,
                                 const CampaignOptions& opts) {
  CampaignReport report;
  report.protocol = protocol == Protocol::kKeygen ? "keygen" : "decrypt";
  report.profile = pp.profile;
  report.seed = opts.seed;
  std::vector<Target> targets =
      protocol == Protocol::kKeygen ? keygen_targets(pp, opts.seed) : decrypt_targets(pp, opts.seed);
  run_targets(pp, targets, opts, report);
  return report;
}

std::string CampaignReport::to_json() const {
  using nlohmann::json;
  auto outcome_json = [](const MutantOutcome& o) {
    return json{{"message", o.message}, {"field", o.field}, {"mutation", o.mutation},
                {"outcome", o.outcome.empty() ? "accepted" : o.outcome}};
  };
  json j;
  j["protocol"] = protocol;
  j["profile"] = profile;
  j["seed"] = seed;
  j["mutants"] = mutants;
  j["controls"] = controls;
  j["controls_accepted"] = controls_accepted;
  j["accepted"] = json::array();
  for (const auto& o : accepted) j["accepted"].push_back(outcome_json(o));
  j["control_failures"] = json::array();
  for (const auto& o : control_failures) j["control_failures"].push_back(outcome_json(o));
  for (const auto& [name, s] : messages) {
    j["messages"][name] = {{"fields", s.fields}, {"mutants", s.mutants}, {"rejected", s.rejected}};
  }
  j["outcomes"] = outcomes;
  return j.dump(2);
}

}  // namespace dvps::harness
