#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dvps/params.hpp"
#include "dvps/wire.hpp"

namespace dvps::harness {

enum class Protocol { kKeygen, kDecrypt };

enum class Mutation {
  kIdentity,
  kFlipFirstBit,
  kFlipLastBit,
  /// A different, well-formed value of the field's type.
  kSubstitute,
};

std::string mutation_name(Mutation m);

struct CampaignOptions {
  std::string seed = "campaign";
  std::vector<Mutation> mutations{Mutation::kFlipFirstBit, Mutation::kFlipLastBit,
                                  Mutation::kSubstitute};
  /// Mutate only every n-th field of each message (1 = exhaustive).
  std::size_t stride = 1;
};

struct MutantOutcome {
  std::string message;
  std::string field;
  std::string mutation;
  bool accepted = false;
  /// Error name raised by the receiver, empty when accepted.
  std::string outcome;
};

struct MessageSummary {
  std::size_t fields = 0;
  std::size_t mutants = 0;
  std::size_t rejected = 0;
};

struct CampaignReport {
  std::string protocol;
  std::string profile;
  std::string seed;
  std::size_t mutants = 0;
  std::size_t controls = 0;
  std::size_t controls_accepted = 0;
  /// Mutants the receiver accepted; must stay empty.
  std::vector<MutantOutcome> accepted;
  /// Identity mutants the receiver rejected; must stay empty.
  std::vector<MutantOutcome> control_failures;
  std::map<std::string, MessageSummary> messages;
  std::map<std::string, std::size_t> outcomes;

  std::string to_json() const;
};

/// Replays an honest run with every single-field mutation of every message
/// delivered to its receiver, each replay starting from the same seeds and,
/// on the server side, a zero failure counter.
CampaignReport mutation_campaign(const Params& pp, Protocol protocol,
                                 const CampaignOptions& opts = {});

/// Applies one mutation to the field at `span` inside `data`.
Bytes mutate(const Params& pp, const Bytes& data, const FieldSpan& span, Mutation m, Rng& rng);

/// Field map of a framed message, payload spans shifted past the header.
std::vector<FieldSpan> frame_spans(const Params& pp, const Message& m, const PublicKey* pub);

}  // namespace dvps::harness
