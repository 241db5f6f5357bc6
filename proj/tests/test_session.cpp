#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "earac/montecarlo.hpp"
#include "earac/rng.hpp"
#include "earac/session.hpp"
#include "stats.hpp"

using namespace earac;

namespace {

int count_kind(const WireTranscript& t, Direction d, const std::string& kind) {
    int n = 0;
    for (const WireRecord& r : t) n += r.direction == d && r.line.rfind("earac/1 " + kind, 0) == 0;
    return n;
}

std::vector<Bit> random_bits(int n, std::uint64_t seed) { return trial_inputs(seed, n); }

// Talks to a broker over one in-process link from the test thread.
struct BrokerHarness {
    Broker broker;
    std::unique_ptr<LineChannel> client;
    std::thread server;
    std::exception_ptr error;

    explicit BrokerHarness(std::uint64_t seed = 7) : broker(seed) {
        StreamPair p = make_stream_pair(TransportKind::InProcess);
        client = std::make_unique<LineChannel>(std::move(p.first));
        server = std::thread([this, s = std::move(p.second)]() mutable {
            LineChannel link(std::move(s));
            try {
                broker.serve(link, "client");
            } catch (...) {
                error = std::current_exception();
            }
        });
    }
    ~BrokerHarness() {
        client->close();
        if (server.joinable()) server.join();
    }
    std::string ask(const WireMessage& m) {
        client->send(encode_message(m));
        auto reply = client->receive();
        return reply ? *reply : "<eof>";
    }
};

const std::string kTree5 = "E2(E2(L0,L1),E3(L2,L3,L4))";

}  // namespace

TEST(Wire, RoundTripEveryVariant) {
    const std::vector<WireMessage> all = {
        wire::Setup{5, 12345678901234567890ull, kTree5},
        wire::Measure{3, {0.57735026918962584, -0.57735026918962584, 1e-300}},
        wire::Outcome{2, 1},
        wire::Classical{0},
        wire::Query{4},
        wire::Guess{1},
        wire::Error{"pair 0 exhausted"},
    };
    for (const WireMessage& m : all) {
        const std::string line = encode_message(m);
        EXPECT_EQ(line.rfind("earac/1 ", 0), 0u) << line;
        EXPECT_EQ(parse_message(line), m) << line;
    }
    EXPECT_EQ(encode_message(wire::Outcome{2, 1}), "earac/1 OUTCOME 2 1");
    EXPECT_EQ(encode_message(wire::Measure{0, {1, 0, 0}}), "earac/1 MEASURE 0 1 0 0");
}

TEST(Wire, AxesRoundTripBitExactly) {
    SplitMix64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const BlochVector v(unit_interval(rng()) - 0.5, unit_interval(rng()) - 0.5, unit_interval(rng()) - 0.5);
        const auto m = std::get<wire::Measure>(parse_message(encode_message(wire::Measure{0, v.components()})));
        EXPECT_EQ(m.axis, v.components());
    }
}

TEST(Wire, RejectsMalformedRecords) {
    for (const char* bad : {"", "earac/2 CLASSICAL 1", "earac/1", "earac/1 CLASSICAL 2", "earac/1 CLASSICAL",
                            "earac/1 OUTCOME x 1", "earac/1 MEASURE 0 1 0", "earac/1 MEASURE 0 1 0 0 0",
                            "earac/1 PING", "earac/1 SETUP 5 -1 E2(L0,L1)", "earac/1 QUERY 1.5"}) {
        EXPECT_THROW(parse_message(bad), ProtocolError) << bad;
    }
}

TEST(Transport, BothKindsCarryBytesAndEof) {
    for (TransportKind kind : {TransportKind::InProcess, TransportKind::TcpLoopback}) {
        StreamPair p = make_stream_pair(kind);
        LineChannel a(std::move(p.first)), b(std::move(p.second));
        std::thread writer([&] {
            for (int i = 0; i < 500; ++i) a.send("line " + std::to_string(i));
            a.close();
        });
        for (int i = 0; i < 500; ++i) EXPECT_EQ(b.receive(), "line " + std::to_string(i));
        EXPECT_EQ(b.receive(), std::nullopt);
        writer.join();
        b.send("back");
        EXPECT_EQ(a.receive(), "back");
        EXPECT_THROW(a.send("after close"), TransportError);
        EXPECT_THROW(a.send("two\nlines"), std::invalid_argument);
    }
}

TEST(Transport, TruncatedRecordIsAnError) {
    StreamPair p = make_stream_pair(TransportKind::InProcess);
    p.first->write("no newline");
    p.first->close();
    LineChannel b(std::move(p.second));
    EXPECT_THROW(b.receive(), TransportError);
}

TEST(Broker, AlignedAxesAlwaysAgree) {
    long equal = 0;
    for (int s = 0; s < 200; ++s) {
        BrokerHarness h(s);
        h.client->send(encode_message(wire::Setup{2, 0, "E2(L0,L1)"}));  // no reply to setup
        const auto a = std::get<wire::Outcome>(parse_message(h.ask(wire::Measure{0, {1, 0, 0}})));
        const auto b = std::get<wire::Outcome>(parse_message(h.ask(wire::Measure{0, {1, 0, 0}})));
        equal += a.bit == b.bit;
    }
    EXPECT_EQ(equal, 200);
}

TEST(Broker, ThirdRequestRefused) {
    BrokerHarness h;
    h.client->send(encode_message(wire::Setup{2, 0, "E2(L0,L1)"}));
    h.ask(wire::Measure{0, {1, 0, 0}});
    h.ask(wire::Measure{0, {0, 1, 0}});
    const WireMessage third = parse_message(h.ask(wire::Measure{0, {0, 0, 1}}));
    ASSERT_TRUE(std::holds_alternative<wire::Error>(third));
    EXPECT_NE(std::get<wire::Error>(third).reason.find("exhausted"), std::string::npos);
    EXPECT_EQ(h.client->receive(), std::nullopt);
    h.server.join();
    EXPECT_TRUE(h.error);
}

TEST(Broker, MeasureBeforeSetupRefused) {
    BrokerHarness h;
    const WireMessage r = parse_message(h.ask(wire::Measure{0, {1, 0, 0}}));
    ASSERT_TRUE(std::holds_alternative<wire::Error>(r));
    EXPECT_NE(std::get<wire::Error>(r).reason.find("before setup"), std::string::npos);
}

TEST(Broker, UnknownPairAndBadTreeRefused) {
    {
        BrokerHarness h;
        h.client->send(encode_message(wire::Setup{2, 0, "E2(L0,L1)"}));
        const WireMessage r = parse_message(h.ask(wire::Measure{1, {1, 0, 0}}));
        EXPECT_TRUE(std::holds_alternative<wire::Error>(r));
    }
    {
        BrokerHarness h;
        const WireMessage r = parse_message(h.ask(wire::Setup{3, 0, "E2(L0,L1)"}));
        EXPECT_TRUE(std::holds_alternative<wire::Error>(r));
    }
    {
        BrokerHarness h;
        const WireMessage r = parse_message(h.ask(wire::Setup{2, 0, "E9(L0,L1)"}));
        EXPECT_TRUE(std::holds_alternative<wire::Error>(r));
    }
}

TEST(Broker, CorrelationAtInverseSqrt3) {
    // balanced E2 trees of 4096 leaves keep the SETUP record under the line limit
    std::function<CodeTree(int, int)> balanced = [&](int lo, int hi) {
        if (hi - lo == 1) return CodeTree::leaf(lo);
        const int mid = (lo + hi) / 2;
        return CodeTree::node(PrimitiveKind::E2, {balanced(lo, mid), balanced(mid, hi)});
    };
    const CodeTree t = balanced(0, 4096);
    const std::string expr = to_expression(t);
    const int pairs = t.internal_count();
    const double s3 = 1 / std::sqrt(3.0);
    long equal = 0, first_zero = 0, total = 0;
    for (std::uint64_t seed = 1; total < 100000; ++seed) {
        BrokerHarness h(seed);
        h.client->send(encode_message(wire::Setup{4096, 0, expr}));
        for (int p = 0; p < pairs; ++p) {
            const auto a = std::get<wire::Outcome>(parse_message(h.ask(wire::Measure{p, {s3, s3, s3}})));
            const auto b = std::get<wire::Outcome>(parse_message(h.ask(wire::Measure{p, {1, 0, 0}})));
            equal += a.bit == b.bit;
            first_zero += a.bit == 0;
            ++total;
        }
    }
    EXPECT_TRUE(stats::within_4_sigma(equal, total, 0.788675)) << equal << "/" << total;
    EXPECT_TRUE(stats::within_4_sigma(first_zero, total, 0.5));
}

TEST(Session, TwoBitMessageCounts) {
    const CodeTree t = build_paper_tree(2);
    const SessionResult r = run_session(t, std::vector<Bit>{1, 0}, 1, SessionOptions{});
    EXPECT_EQ(count_kind(r.alice, Direction::Sent, "SETUP"), 1);
    EXPECT_EQ(count_kind(r.bob, Direction::Sent, "SETUP"), 1);
    EXPECT_EQ(count_kind(r.broker, Direction::Received, "MEASURE"), 2);
    EXPECT_EQ(count_kind(r.broker, Direction::Sent, "OUTCOME"), 2);
    EXPECT_EQ(count_kind(r.alice, Direction::Sent, "MEASURE"), 1);
    EXPECT_EQ(count_kind(r.bob, Direction::Sent, "MEASURE"), 1);
    EXPECT_EQ(classical_bits_sent(r), 1);
    EXPECT_EQ(classical_bits_received(r), 1);
    EXPECT_EQ(count_kind(r.bob, Direction::Local, "GUESS"), 1);
    EXPECT_EQ(count_kind(r.bob, Direction::Local, "QUERY"), 1);
}

TEST(Session, FiveBitLastTargetMeasurements) {
    const SessionResult r = run_session(build_paper_tree(5), std::vector<Bit>{0, 1, 1, 0, 1}, 4, SessionOptions{});
    EXPECT_EQ(count_kind(r.alice, Direction::Sent, "MEASURE"), 3);
    EXPECT_EQ(count_kind(r.bob, Direction::Sent, "MEASURE"), 2);
    // root first (pair 2), then the E3 node (pair 1)
    std::vector<std::string> bob_measures;
    for (const auto& rec : r.bob)
        if (rec.direction == Direction::Sent && rec.line.rfind("earac/1 MEASURE", 0) == 0) bob_measures.push_back(rec.line);
    ASSERT_EQ(bob_measures.size(), 2u);
    EXPECT_EQ(bob_measures[0], "earac/1 MEASURE 2 0 1 0");
    EXPECT_EQ(bob_measures[1], "earac/1 MEASURE 1 0 0 1");
}

TEST(Session, MatchesInProcessProtocol) {
    for (int n = 1; n <= 12; ++n) {
        const CodeTree t = build_paper_tree(n);
        const Protocol proto(t);
        for (int target = 0; target < n; ++target) {
            const auto bits = random_bits(n, 1000 * n + target);
            SessionOptions o;
            o.seed = 500 + target;
            const SessionResult r = run_session(t, bits, target, o);
            SingletSource src(o.seed, t.internal_count());
            const EncodeResult enc = proto.encode(bits, src);
            const DecodeResult dec = proto.decode(enc.message, target, src);
            EXPECT_EQ(r.message, enc.message) << n << "/" << target;
            EXPECT_EQ(r.guess, dec.guess) << n << "/" << target;
            // message for message: Alice's outcomes equal the transcript entries
            std::size_t k = 0;
            for (const auto& rec : r.alice) {
                if (rec.direction != Direction::Received) continue;
                const auto o2 = std::get<wire::Outcome>(parse_message(rec.line));
                ASSERT_LT(k, enc.transcript.entries.size());
                EXPECT_EQ(o2.pair, enc.transcript.entries[k].node);
                EXPECT_EQ(o2.bit, enc.transcript.entries[k].outcome);
                ++k;
            }
            EXPECT_EQ(k, enc.transcript.entries.size());
        }
    }
}

TEST(Session, SharedRandomnessPermutesLeaves) {
    const CodeTree t = build_paper_tree(5);
    const std::vector<Bit> bits{1, 1, 0, 0, 1};
    SessionOptions o;
    o.sr_seed = 99;
    o.seed = 4;
    const auto perm = sr_permutation(5, 99);
    std::vector<Bit> leaf_bits(5);
    for (int i = 0; i < 5; ++i) leaf_bits[perm[i]] = bits[i];
    for (int target = 0; target < 5; ++target) {
        const SessionResult r = run_session(t, bits, target, o);
        SingletSource src(4, 3);
        const Protocol proto(t);
        const Bit m = proto.encode(leaf_bits, src).message;
        EXPECT_EQ(r.guess, proto.decode(m, perm[target], src).guess);
    }
}

TEST(Session, SrPermutation) {
    const auto id = sr_permutation(6, 0);
    EXPECT_EQ(id, (std::vector<int>{0, 1, 2, 3, 4, 5}));
    for (std::uint64_t s = 1; s < 50; ++s) {
        auto p = sr_permutation(9, s);
        EXPECT_EQ(p, sr_permutation(9, s));
        std::sort(p.begin(), p.end());
        EXPECT_EQ(p, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8}));
    }
}

TEST(Session, TransportTransparency) {
    for (int n : {2, 3, 4, 5}) {
        const CodeTree t = build_paper_tree(n);
        for (int target = 0; target < n; ++target) {
            const auto bits = random_bits(n, 77 * n + target);
            SessionOptions a;
            a.seed = 31 + target;
            a.sr_seed = target;
            SessionOptions b = a;
            b.transport = TransportKind::TcpLoopback;
            const SessionResult x = run_session(t, bits, target, a), y = run_session(t, bits, target, b);
            EXPECT_EQ(x.guess, y.guess);
            EXPECT_EQ(x.alice, y.alice);
            EXPECT_EQ(x.bob, y.bob);
            EXPECT_EQ(x.broker, y.broker);
        }
    }
}

TEST(Session, SuccessRateAcrossSessions) {
    const CodeTree t = build_paper_tree(3);
    constexpr long T = 3000;
    long ok = 0;
    for (long s = 0; s < T; ++s) {
        const auto bits = random_bits(3, s);
        SessionOptions o;
        o.seed = derive_key(11, s);
        ok += run_session(t, bits, 2, o).guess == bits[2];
    }
    EXPECT_TRUE(stats::within_4_sigma(ok, T, 0.5 * (1 + 1 / std::sqrt(3.0)))) << ok;
}

TEST(Session, BadArguments) {
    const CodeTree t = build_paper_tree(3);
    EXPECT_THROW(run_session(t, std::vector<Bit>{1, 0}, 0, {}), std::invalid_argument);
    EXPECT_THROW(run_session(t, std::vector<Bit>{1, 0, 1}, 3, {}), std::invalid_argument);
}

TEST(Session, TranscriptText) {
    const SessionResult r = run_session(build_paper_tree(2), std::vector<Bit>{0, 0}, 0, {});
    std::ostringstream s;
    write_transcript(s, r.bob);
    const std::string text = s.str();
    EXPECT_EQ(text.rfind("= earac/1 QUERY 0\n> broker earac/1 SETUP 2 0 E2(L0,L1)\n< alice earac/1 CLASSICAL", 0), 0u)
        << text;
}
