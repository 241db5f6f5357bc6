#pragma once

// Concatenation trees of primitive codes, protocol execution over a
// correlation source, and exact per-bit success probabilities.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "earac/bloch.hpp"
#include "earac/exactnum.hpp"
#include "earac/primitives.hpp"

namespace earac {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Leaves carry input-bit indices; internal nodes are E2/E3 primitives whose
// child 0 supplies the first input (the one xored into the node output).
class CodeTree {
public:
    static CodeTree leaf(int index);
    // Throws std::invalid_argument when children.size() != arity(kind).
    static CodeTree node(PrimitiveKind kind, std::vector<CodeTree> children);

    bool is_leaf() const { return is_leaf_; }
    int leaf_index() const;
    PrimitiveKind kind() const;
    const std::vector<CodeTree>& children() const { return children_; }

    int leaf_count() const;
    int internal_count() const;
    int depth() const;

    friend bool operator==(const CodeTree&, const CodeTree&) = default;

private:
    CodeTree() = default;
    bool is_leaf_ = true;
    int leaf_ = 0;
    PrimitiveKind kind_ = PrimitiveKind::E2;
    std::vector<CodeTree> children_;
};

// Throws std::invalid_argument unless the leaf indices are exactly
// {0, ..., n-1}.
void validate(const CodeTree& tree);

// Compact expression, e.g. "E2(E2(L0,L1),E3(L2,L3,L4))".
std::string to_expression(const CodeTree& tree);
CodeTree parse_expression(std::string_view text);  // throws FormatError

inline constexpr std::string_view kTreeFileHeader = "earac-tree v1";

// File form: header line, then the expression. Whitespace is insignificant.
void write_tree(std::ostream& out, const CodeTree& tree);
CodeTree read_tree(std::istream& in);  // throws FormatError
void save_tree(const std::string& path, const CodeTree& tree);
CodeTree load_tree(const std::string& path);

// Grouping rule: with r = m mod 3, g2 = 2r mod 3 pairs and g3 = (m - 2 g2)/3
// triples are formed left to right (pairs first); the group outputs are
// grouped again until one message bit remains.
CodeTree build_paper_tree(int n);

// Leaf i becomes leaf permutation[i].
CodeTree permute_leaves(const CodeTree& tree, std::span<const int> permutation);

// Zero-fills bits up to `width` so an m-leaf code can carry n < m bits.
std::vector<Bit> pad_bits(std::span<const Bit> bits, int width);

struct PathProfile {
    int k = 0;  // E2 nodes on the root-to-leaf path
    int j = 0;  // E3 nodes
    int length() const { return k + j; }
    friend bool operator==(const PathProfile&, const PathProfile&) = default;
    friend auto operator<=>(const PathProfile&, const PathProfile&) = default;
};

PathProfile path_profile(const CodeTree& tree, int leaf);
std::vector<PathProfile> all_path_profiles(const CodeTree& tree);
int ebit_count(const CodeTree& tree);

// (1 + 2^(-k/2) 3^(-j/2)) / 2
ExactValue exact_bit_probability(const PathProfile& profile);

enum class Parity { Even, Odd };

// Probability of an even/odd number of errors over `uses` independent runs
// of one primitive: (1 +- d^uses) / 2 with d = 1/sqrt2 or 1/sqrt3.
ExactValue error_parity_probability(PrimitiveKind kind, int uses, Parity parity);

ExactValue min_probability(const CodeTree& tree);
// Leaf-weighted mean, the figure of merit once SR shuffles bit positions.
ExactValue sr_average(const CodeTree& tree);

// --- flattened form used by the protocol and the simulators -------------

struct ChildRef {
    bool is_leaf = true;
    int index = 0;  // leaf index or node id
};

struct FlatNode {
    PrimitiveKind kind = PrimitiveKind::E2;
    std::vector<ChildRef> children;
};

struct PathStep {
    int node = 0;   // node id
    int child = 0;  // child index taken (Bob's query for that node)
};

// Internal nodes numbered in post-order; the root is the last node. The node
// id doubles as the id of the singlet consumed at that node.
struct FlatTree {
    std::vector<FlatNode> nodes;
    int leaf_count = 0;
    std::vector<std::vector<PathStep>> paths;  // per leaf, root first

    int root() const { return static_cast<int>(nodes.size()) - 1; }
};

FlatTree flatten(const CodeTree& tree);

// --- protocol -------------------------------------------------------------

// Supplies outcomes for measurements on shared pairs. The first measurement
// of a pair is Alice's (or whoever comes first), the second is conditioned on
// it; a third is an error.
class CorrelationSource {
public:
    virtual ~CorrelationSource() = default;
    virtual Bit measure(int pair_id, const BlochVector& axis) = 0;
};

class PairConsumedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Singlet statistics from a counter-addressed stream: pair p uses draws
// 2p (first outcome) and 2p + 1 (agreement test) of the keyed stream.
class SingletSource : public CorrelationSource {
public:
    SingletSource(std::uint64_t key, int pair_count);
    Bit measure(int pair_id, const BlochVector& axis) override;

    int measurements(int pair_id) const;
    std::uint64_t key() const { return key_; }

private:
    struct PairState {
        int uses = 0;
        Bit first_outcome = 0;
        std::array<double, 3> first_axis{};
    };
    std::uint64_t key_;
    std::vector<PairState> pairs_;
};

// Replays fixed outcomes in call order; for tests and hand traces.
class ScriptedSource : public CorrelationSource {
public:
    explicit ScriptedSource(std::vector<Bit> outcomes) : outcomes_(std::move(outcomes)) {}
    Bit measure(int pair_id, const BlochVector& axis) override;

    struct Call {
        int pair_id;
        BlochVector axis;
    };
    const std::vector<Call>& calls() const { return calls_; }

private:
    std::vector<Bit> outcomes_;
    size_t next_ = 0;
    std::vector<Call> calls_;
};

enum class Role { Alice, Bob };

struct TranscriptEntry {
    int node = 0;
    Role role = Role::Alice;
    BlochVector basis{1, 0, 0};
    Bit outcome = 0;
    Bit output = 0;  // Alice: node output; Bob: running guess
};

struct Transcript {
    std::vector<TranscriptEntry> entries;
};

struct EncodeResult {
    Bit message = 0;
    Transcript transcript;
};

struct DecodeResult {
    Bit guess = 0;
    Transcript transcript;
};

// Holds a flattened tree so repeated runs skip re-flattening.
class Protocol {
public:
    explicit Protocol(const CodeTree& tree);

    const FlatTree& flat() const { return flat_; }

    // Bottom-up: each node measures along alice_basis(kind, child values)
    // and outputs child0 xor A. Throws std::invalid_argument on a size
    // mismatch.
    EncodeResult encode(std::span<const Bit> bits, CorrelationSource& source) const;

    // Root-to-target walk measuring bob_basis(kind, child taken); pairs off
    // the path are never touched. Throws std::out_of_range for an unknown
    // leaf.
    DecodeResult decode(Bit message, int target, CorrelationSource& source) const;

private:
    FlatTree flat_;
};

EncodeResult encode(const CodeTree& tree, std::span<const Bit> bits, CorrelationSource& source);
DecodeResult decode(const CodeTree& tree, Bit message, int target, CorrelationSource& source);

// Independent oracle: sums the exact weight of every outcome assignment on
// the target's path. Pairs off the path are never measured by Bob, so their
// outputs enter as fair bits. Throws std::invalid_argument when the path is
// longer than kMaxOraclePath or the enumeration would exceed 2^30 terms.
inline constexpr int kMaxOraclePath = 12;
ExactValue exhaustive_success_probability(const CodeTree& tree, std::span<const Bit> bits, int target);

}  // namespace earac
