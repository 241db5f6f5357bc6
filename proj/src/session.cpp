#include "earac/session.hpp"

#include <charconv>
#include <cstdio>
#include <exception>
#include <numeric>
#include <ostream>
#include <thread>

#include "earac/rng.hpp"

namespace earac {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t sp = line.find(' ', pos);
        const std::size_t end = sp == std::string_view::npos ? line.size() : sp;
        out.push_back(line.substr(pos, end - pos));
        if (sp == std::string_view::npos) break;
        pos = sp + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view field, const char* what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ProtocolError(std::string("bad ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

Bit parse_bit(std::string_view field) {
    if (field == "0") return 0;
    if (field == "1") return 1;
    throw ProtocolError("bad bit '" + std::string(field) + "'");
}

// Everything after the first `skip` fields, verbatim.
std::string_view tail_after(std::string_view line, int skip) {
    std::size_t pos = 0;
    for (int i = 0; i < skip; ++i) {
        pos = line.find(' ', pos);
        if (pos == std::string_view::npos) return {};
        ++pos;
    }
    return line.substr(pos);
}

void expect_fields(const std::vector<std::string_view>& f, std::size_t count, std::string_view kind) {
    if (f.size() != count) {
        throw ProtocolError(std::string(kind) + " record needs " + std::to_string(count - 2) + " fields");
    }
}

wire::Setup make_setup(const CodeTree& tree, std::uint64_t sr_seed) {
    return {tree.leaf_count(), sr_seed, to_expression(tree)};
}

// Record-level I/O with transcript logging.
class Endpoint {
public:
    Endpoint(LineChannel& link, WireTranscript& log, std::string peer)
        : link_(link), log_(log), peer_(std::move(peer)) {}

    void send(const WireMessage& m) {
        const std::string line = encode_message(m);
        log_.push_back({Direction::Sent, peer_, line});
        link_.send(line);
    }

    WireMessage receive() {
        auto line = link_.receive();
        if (!line) throw TransportError(peer_ + " closed the link");
        log_.push_back({Direction::Received, peer_, *line});
        return parse_message(*line);
    }

    bool at_eof() { return !link_.receive().has_value(); }

private:
    LineChannel& link_;
    WireTranscript& log_;
    std::string peer_;
};

// A correlation source whose pairs live at the broker.
class RemoteSource : public CorrelationSource {
public:
    explicit RemoteSource(Endpoint& broker) : broker_(broker) {}

    Bit measure(int pair_id, const BlochVector& axis) override {
        broker_.send(wire::Measure{pair_id, axis.components()});
        const WireMessage reply = broker_.receive();
        if (const auto* e = std::get_if<wire::Error>(&reply)) throw ProtocolError("broker refused: " + e->reason);
        const auto* o = std::get_if<wire::Outcome>(&reply);
        if (!o || o->pair != pair_id) throw ProtocolError("broker answered out of order");
        return o->bit;
    }

private:
    Endpoint& broker_;
};

Bit run_alice(const Protocol& protocol, std::span<const Bit> leaf_bits, const wire::Setup& setup,
              LineChannel& broker_link, LineChannel& bob_link, WireTranscript& log) {
    Endpoint broker(broker_link, log, "broker");
    Endpoint bob(bob_link, log, "bob");
    broker.send(setup);
    RemoteSource source(broker);
    const Bit message = protocol.encode(leaf_bits, source).message;
    broker_link.close();
    bob.send(wire::Classical{message});
    bob_link.close();
    return message;
}

Bit run_bob(const Protocol& protocol, int target, int leaf, const wire::Setup& setup, LineChannel& broker_link,
            LineChannel& alice_link, WireTranscript& log) {
    Endpoint broker(broker_link, log, "broker");
    Endpoint alice(alice_link, log, "alice");
    log.push_back({Direction::Local, "", encode_message(wire::Query{target})});
    broker.send(setup);
    const WireMessage m = alice.receive();
    const auto* classical = std::get_if<wire::Classical>(&m);
    if (!classical) throw ProtocolError("expected the classical bit from alice");
    if (!alice.at_eof()) throw ProtocolError("alice sent more than one record");
    RemoteSource source(broker);
    const Bit guess = protocol.decode(classical->bit, leaf, source).guess;
    broker_link.close();
    log.push_back({Direction::Local, "", encode_message(wire::Guess{guess})});
    return guess;
}

int count_classical(const WireTranscript& t, Direction d) {
    int n = 0;
    for (const WireRecord& r : t) {
        if (r.direction != d) continue;
        const WireMessage m = parse_message(r.line);
        n += std::holds_alternative<wire::Classical>(m);
    }
    return n;
}

}  // namespace

std::string encode_message(const WireMessage& message) {
    std::string body = std::visit(
        overloaded{
            [](const wire::Setup& s) {
                return "SETUP " + std::to_string(s.n) + ' ' + std::to_string(s.sr_seed) + ' ' + s.tree;
            },
            [](const wire::Measure& m) {
                return "MEASURE " + std::to_string(m.pair) + ' ' + format_double(m.axis[0]) + ' ' +
                       format_double(m.axis[1]) + ' ' + format_double(m.axis[2]);
            },
            [](const wire::Outcome& o) { return "OUTCOME " + std::to_string(o.pair) + ' ' + char('0' + o.bit); },
            [](const wire::Classical& c) { return std::string("CLASSICAL ") + char('0' + c.bit); },
            [](const wire::Query& q) { return "QUERY " + std::to_string(q.leaf); },
            [](const wire::Guess& g) { return std::string("GUESS ") + char('0' + g.bit); },
            [](const wire::Error& e) { return "ERROR " + e.reason; },
        },
        message);
    return std::string(kWireVersion) + ' ' + body;
}

WireMessage parse_message(std::string_view line) {
    const auto f = split_fields(line);
    if (f.size() < 2) throw ProtocolError("truncated record");
    if (f[0] != kWireVersion) throw ProtocolError("unsupported version '" + std::string(f[0]) + "'");
    const std::string_view kind = f[1];
    if (kind == "SETUP") {
        if (f.size() < 5) throw ProtocolError("SETUP record needs 3 fields");
        wire::Setup s;
        s.n = parse_number<int>(f[2], "leaf count");
        s.sr_seed = parse_number<std::uint64_t>(f[3], "seed");
        s.tree = std::string(tail_after(line, 4));
        return s;
    }
    if (kind == "MEASURE") {
        expect_fields(f, 6, kind);
        wire::Measure m;
        m.pair = parse_number<int>(f[2], "pair id");
        for (int i = 0; i < 3; ++i) m.axis[i] = parse_number<double>(f[3 + i], "axis component");
        return m;
    }
    if (kind == "OUTCOME") {
        expect_fields(f, 4, kind);
        return wire::Outcome{parse_number<int>(f[2], "pair id"), parse_bit(f[3])};
    }
    if (kind == "CLASSICAL") {
        expect_fields(f, 3, kind);
        return wire::Classical{parse_bit(f[2])};
    }
    if (kind == "QUERY") {
        expect_fields(f, 3, kind);
        return wire::Query{parse_number<int>(f[2], "leaf")};
    }
    if (kind == "GUESS") {
        expect_fields(f, 3, kind);
        return wire::Guess{parse_bit(f[2])};
    }
    if (kind == "ERROR") return wire::Error{std::string(tail_after(line, 2))};
    throw ProtocolError("unknown record kind '" + std::string(kind) + "'");
}

void write_transcript(std::ostream& out, const WireTranscript& transcript) {
    for (const WireRecord& r : transcript) {
        switch (r.direction) {
            case Direction::Sent: out << "> " << r.peer << ' '; break;
            case Direction::Received: out << "< " << r.peer << ' '; break;
            case Direction::Local: out << "= "; break;
        }
        out << r.line << '\n';
    }
}

std::vector<int> sr_permutation(int n, std::uint64_t sr_seed) {
    if (n < 0) throw std::invalid_argument("sr_permutation: negative size");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    if (sr_seed == 0) return perm;
    SplitMix64 rng(sr_seed);
    for (int i = n - 1; i > 0; --i) {
        const auto bound = static_cast<std::uint64_t>(i + 1);
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t r = rng();
        while (r >= limit) r = rng();
        std::swap(perm[i], perm[static_cast<int>(r % bound)]);
    }
    return perm;
}

// --- broker ---------------------------------------------------------------

void Broker::refuse(LineChannel& link, const std::string& peer, const std::string& reason) {
    const std::string line = encode_message(wire::Error{reason});
    transcript_.push_back({Direction::Sent, peer, line});
    try {
        link.send(line);
        link.close();
    } catch (const TransportError&) {
        // the peer is gone already; the refusal still stands
    }
    throw ProtocolError("broker refused " + peer + ": " + reason);
}

void Broker::serve(LineChannel& link, const std::string& peer) {
    bool link_setup = false;
    for (;;) {
        const auto line = link.receive();
        if (!line) return;
        transcript_.push_back({Direction::Received, peer, *line});
        WireMessage m;
        try {
            m = parse_message(*line);
        } catch (const ProtocolError& e) {
            refuse(link, peer, e.what());
        }
        if (const auto* s = std::get_if<wire::Setup>(&m)) {
            if (link_setup) refuse(link, peer, "duplicate setup");
            if (!setup_) {
                CodeTree tree = CodeTree::leaf(0);
                try {
                    tree = parse_expression(s->tree);
                    validate(tree);
                } catch (const std::exception& e) {
                    refuse(link, peer, std::string("bad tree: ") + e.what());
                }
                if (tree.leaf_count() != s->n) refuse(link, peer, "leaf count does not match the tree");
                setup_ = *s;
                source_.emplace(seed_, tree.internal_count());
            } else if (!(*s == *setup_)) {
                refuse(link, peer, "setup differs from the session's");
            }
            link_setup = true;
            continue;
        }
        const auto* req = std::get_if<wire::Measure>(&m);
        if (!req) refuse(link, peer, "unexpected record");
        if (!link_setup) refuse(link, peer, "measure before setup");
        Bit bit = 0;
        try {
            bit = source_->measure(req->pair, BlochVector(req->axis[0], req->axis[1], req->axis[2]));
        } catch (const PairConsumedError&) {
            refuse(link, peer, "pair " + std::to_string(req->pair) + " exhausted");
        } catch (const std::out_of_range&) {
            refuse(link, peer, "unknown pair " + std::to_string(req->pair));
        } catch (const std::invalid_argument&) {
            refuse(link, peer, "bad axis");
        }
        const std::string out = encode_message(wire::Outcome{req->pair, bit});
        transcript_.push_back({Direction::Sent, peer, out});
        link.send(out);
    }
}

// --- session --------------------------------------------------------------

SessionResult run_session(const CodeTree& tree, std::span<const Bit> bits, int target, const SessionOptions& options) {
    validate(tree);
    const int n = tree.leaf_count();
    if (static_cast<int>(bits.size()) != n) {
        throw std::invalid_argument("session: got " + std::to_string(bits.size()) + " bits for " + std::to_string(n) +
                                    " leaves");
    }
    if (target < 0 || target >= n) throw std::invalid_argument("session: target out of range");

    const Protocol protocol(tree);
    const std::vector<int> perm = sr_permutation(n, options.sr_seed);
    std::vector<Bit> leaf_bits(n);
    for (int i = 0; i < n; ++i) leaf_bits[perm[i]] = bits[i] & 1;
    const wire::Setup setup = make_setup(tree, options.sr_seed);

    StreamPair alice_broker = make_stream_pair(options.transport);
    StreamPair bob_broker = make_stream_pair(options.transport);
    StreamPair alice_bob = make_stream_pair(options.transport);

    SessionResult result;
    std::exception_ptr alice_error, bob_error, broker_error;
    Broker broker(options.seed);

    {
        std::jthread alice([&] {
            LineChannel to_broker(std::move(alice_broker.first));
            LineChannel to_bob(std::move(alice_bob.first));
            try {
                result.message = run_alice(protocol, leaf_bits, setup, to_broker, to_bob, result.alice);
            } catch (...) {
                alice_error = std::current_exception();
            }
        });
        std::jthread bob([&] {
            LineChannel to_broker(std::move(bob_broker.first));
            LineChannel from_alice(std::move(alice_bob.second));
            try {
                result.guess = run_bob(protocol, target, perm[target], setup, to_broker, from_alice, result.bob);
            } catch (...) {
                bob_error = std::current_exception();
            }
        });
        std::jthread serve([&] {
            LineChannel alice_link(std::move(alice_broker.second));
            LineChannel bob_link(std::move(bob_broker.second));
            try {
                broker.serve(alice_link, "alice");
                alice_link.close();
                broker.serve(bob_link, "bob");
                bob_link.close();
            } catch (...) {
                broker_error = std::current_exception();
            }
        });
    }

    for (const auto& e : {broker_error, alice_error, bob_error}) {
        if (e) std::rethrow_exception(e);
    }
    result.broker = broker.transcript();
    return result;
}

int classical_bits_sent(const SessionResult& result) { return count_classical(result.alice, Direction::Sent); }

int classical_bits_received(const SessionResult& result) { return count_classical(result.bob, Direction::Received); }

}  // namespace earac
