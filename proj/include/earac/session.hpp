#pragma once

// Two-party execution of a concatenated code: Alice, Bob and an entanglement
// broker exchange text records over byte streams.
//
// The broker is a trusted third component that hands out singlet outcomes.
// Two independent local samplers cannot reproduce singlet statistics, so the
// shared randomness has to live somewhere; the broker is that simulation
// device and nothing more.
//
// Wire format, one record per line, fields separated by single spaces:
//
//   earac/1 SETUP <n> <sr_seed> <tree expression>
//   earac/1 MEASURE <pair> <x> <y> <z>      axis components as %.17g
//   earac/1 OUTCOME <pair> <bit>
//   earac/1 CLASSICAL <bit>                 the single Alice -> Bob bit
//   earac/1 QUERY <leaf>                    Bob's local input, never sent
//   earac/1 GUESS <bit>                     Bob's local output, never sent
//   earac/1 ERROR <reason>                  broker refusal, then it hangs up
//
// Pair ids are the flattened node ids, one singlet per internal node.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "earac/codetree.hpp"
#include "earac/transport.hpp"

namespace earac {

inline constexpr std::string_view kWireVersion = "earac/1";

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace wire {

struct Setup {
    int n = 0;
    std::uint64_t sr_seed = 0;
    std::string tree;  // expression form
    friend bool operator==(const Setup&, const Setup&) = default;
};
struct Measure {
    int pair = 0;
    std::array<double, 3> axis{};
    friend bool operator==(const Measure&, const Measure&) = default;
};
struct Outcome {
    int pair = 0;
    Bit bit = 0;
    friend bool operator==(const Outcome&, const Outcome&) = default;
};
struct Classical {
    Bit bit = 0;
    friend bool operator==(const Classical&, const Classical&) = default;
};
struct Query {
    int leaf = 0;
    friend bool operator==(const Query&, const Query&) = default;
};
struct Guess {
    Bit bit = 0;
    friend bool operator==(const Guess&, const Guess&) = default;
};
struct Error {
    std::string reason;
    friend bool operator==(const Error&, const Error&) = default;
};

}  // namespace wire

using WireMessage =
    std::variant<wire::Setup, wire::Measure, wire::Outcome, wire::Classical, wire::Query, wire::Guess, wire::Error>;

std::string encode_message(const WireMessage& message);
WireMessage parse_message(std::string_view line);  // throws ProtocolError

enum class Direction { Sent, Received, Local };

struct WireRecord {
    Direction direction = Direction::Local;
    std::string peer;  // "alice", "bob", "broker"; empty for local records
    std::string line;
    friend bool operator==(const WireRecord&, const WireRecord&) = default;
};

using WireTranscript = std::vector<WireRecord>;

// "> broker earac/1 MEASURE ...", "< alice ...", "= earac/1 QUERY ...".
void write_transcript(std::ostream& out, const WireTranscript& transcript);

// Leaf position of input bit i under shared randomness: identity for seed 0,
// otherwise a Fisher-Yates shuffle driven by the seed.
std::vector<int> sr_permutation(int n, std::uint64_t sr_seed);

// Serves singlet measurements. Pairs are created by the first Setup it sees.
class Broker {
public:
    explicit Broker(std::uint64_t seed) : seed_(seed) {}

    // Serves one link until the peer closes it. Protocol violations (bad or
    // out-of-order records, unknown or exhausted pairs, a Setup that differs
    // from the first one) are answered with ERROR, after which the link is
    // closed and ProtocolError is thrown.
    void serve(LineChannel& link, const std::string& peer);

    const WireTranscript& transcript() const { return transcript_; }
    bool configured() const { return setup_.has_value(); }

private:
    [[noreturn]] void refuse(LineChannel& link, const std::string& peer, const std::string& reason);

    std::uint64_t seed_;
    std::optional<wire::Setup> setup_;
    std::optional<SingletSource> source_;
    WireTranscript transcript_;
};

struct SessionOptions {
    TransportKind transport = TransportKind::InProcess;
    std::uint64_t seed = 1;     // broker singlet stream
    std::uint64_t sr_seed = 0;  // 0: no shuffling
};

struct SessionResult {
    Bit guess = 0;
    Bit message = 0;
    WireTranscript alice;
    WireTranscript bob;
    WireTranscript broker;
};

// Runs Alice, Bob and the broker on their own threads over three links
// (Alice-broker, Bob-broker, Alice-Bob). The broker finishes Alice's link
// before reading Bob's, so every pair is measured by Alice first and the
// outcomes equal encode/decode over SingletSource(options.seed).
// Throws std::invalid_argument for bad bits/target and ProtocolError or
// TransportError when a party fails.
SessionResult run_session(const CodeTree& tree, std::span<const Bit> bits, int target, const SessionOptions& options);

// Number of CLASSICAL records Alice sent / Bob received.
int classical_bits_sent(const SessionResult& result);
int classical_bits_received(const SessionResult& result);

}  // namespace earac
