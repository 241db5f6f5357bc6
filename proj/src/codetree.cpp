#include "earac/codetree.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "earac/rng.hpp"

namespace earac {

// --- CodeTree ---------------------------------------------------------------

CodeTree CodeTree::leaf(int index) {
    if (index < 0) throw std::invalid_argument("leaf index must be non-negative");
    CodeTree t;
    t.leaf_ = index;
    return t;
}

CodeTree CodeTree::node(PrimitiveKind kind, std::vector<CodeTree> children) {
    if (static_cast<int>(children.size()) != arity(kind)) {
        throw std::invalid_argument(std::string(kind_name(kind)) + " node needs " + std::to_string(arity(kind)) +
                                    " children, got " + std::to_string(children.size()));
    }
    CodeTree t;
    t.is_leaf_ = false;
    t.kind_ = kind;
    t.children_ = std::move(children);
    return t;
}

int CodeTree::leaf_index() const {
    if (!is_leaf_) throw std::logic_error("leaf_index() on an internal node");
    return leaf_;
}

PrimitiveKind CodeTree::kind() const {
    if (is_leaf_) throw std::logic_error("kind() on a leaf");
    return kind_;
}

int CodeTree::leaf_count() const {
    if (is_leaf_) return 1;
    int total = 0;
    for (const auto& c : children_) total += c.leaf_count();
    return total;
}

int CodeTree::internal_count() const {
    if (is_leaf_) return 0;
    int total = 1;
    for (const auto& c : children_) total += c.internal_count();
    return total;
}

int CodeTree::depth() const {
    if (is_leaf_) return 0;
    int deepest = 0;
    for (const auto& c : children_) deepest = std::max(deepest, c.depth());
    return deepest + 1;
}

namespace {

void collect_leaves(const CodeTree& t, std::vector<int>& out) {
    if (t.is_leaf()) {
        out.push_back(t.leaf_index());
        return;
    }
    for (const auto& c : t.children()) collect_leaves(c, out);
}

}  // namespace

void validate(const CodeTree& tree) {
    std::vector<int> leaves;
    collect_leaves(tree, leaves);
    std::vector<char> seen(leaves.size(), 0);
    for (int idx : leaves) {
        if (idx < 0 || idx >= static_cast<int>(leaves.size())) {
            throw std::invalid_argument("leaf index " + std::to_string(idx) + " out of range for " +
                                        std::to_string(leaves.size()) + " leaves");
        }
        if (seen[idx]) throw std::invalid_argument("leaf index " + std::to_string(idx) + " appears twice");
        seen[idx] = 1;
    }
}

// --- text form --------------------------------------------------------------

namespace {

void render(const CodeTree& t, std::string& out) {
    if (t.is_leaf()) {
        out += 'L';
        out += std::to_string(t.leaf_index());
        return;
    }
    out += kind_name(t.kind());
    out += '(';
    for (size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ',';
        render(t.children()[i], out);
    }
    out += ')';
}

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : s_(text) {}

    CodeTree parse() {
        CodeTree t = parse_node();
        skip();
        if (pos_ != s_.size()) fail("trailing characters");
        validate_or_fail(t);
        return t;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw FormatError("malformed tree expression at offset " + std::to_string(pos_) + ": " + why);
    }

    void expect(char c) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    int parse_int() {
        skip();
        const size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        if (pos_ - start > 9) fail("number too large");
        return std::stoi(std::string(s_.substr(start, pos_ - start)));
    }

    CodeTree parse_node() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == 'L') {
            ++pos_;
            return CodeTree::leaf(parse_int());
        }
        if (c == 'E') {
            ++pos_;
            skip();
            if (pos_ >= s_.size()) fail("unexpected end of input");
            PrimitiveKind kind;
            if (s_[pos_] == '2') {
                kind = PrimitiveKind::E2;
            } else if (s_[pos_] == '3') {
                kind = PrimitiveKind::E3;
            } else {
                fail("unknown primitive");
            }
            ++pos_;
            expect('(');
            std::vector<CodeTree> children;
            children.push_back(parse_node());
            while (true) {
                skip();
                if (pos_ < s_.size() && s_[pos_] == ',') {
                    ++pos_;
                    children.push_back(parse_node());
                    continue;
                }
                break;
            }
            expect(')');
            if (static_cast<int>(children.size()) != arity(kind)) {
                fail(std::string(kind_name(kind)) + " takes " + std::to_string(arity(kind)) + " children");
            }
            return CodeTree::node(kind, std::move(children));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    void validate_or_fail(const CodeTree& t) const {
        try {
            validate(t);
        } catch (const std::invalid_argument& e) {
            throw FormatError(std::string("invalid tree: ") + e.what());
        }
    }

    std::string_view s_;
    size_t pos_ = 0;
};

}  // namespace

std::string to_expression(const CodeTree& tree) {
    std::string out;
    render(tree, out);
    return out;
}

CodeTree parse_expression(std::string_view text) { return ExpressionParser(text).parse(); }

void write_tree(std::ostream& out, const CodeTree& tree) {
    out << kTreeFileHeader << '\n' << to_expression(tree) << '\n';
}

CodeTree read_tree(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("empty tree file");
    while (!header.empty() && std::isspace(static_cast<unsigned char>(header.back()))) header.pop_back();
    if (header != kTreeFileHeader) throw FormatError("missing '" + std::string(kTreeFileHeader) + "' header");
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_expression(body);
}

void save_tree(const std::string& path, const CodeTree& tree) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    write_tree(out, tree);
    if (!out) throw FormatError("failed writing " + path);
}

CodeTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return read_tree(in);
}

// --- construction -----------------------------------------------------------

CodeTree build_paper_tree(int n) {
    if (n <= 0) throw std::invalid_argument("build_paper_tree: n must be positive");
    std::vector<CodeTree> level;
    level.reserve(n);
    for (int i = 0; i < n; ++i) level.push_back(CodeTree::leaf(i));

    while (level.size() > 1) {
        const int m = static_cast<int>(level.size());
        std::vector<CodeTree> next;
        if (m == 2 || m == 3) {
            next.push_back(CodeTree::node(m == 2 ? PrimitiveKind::E2 : PrimitiveKind::E3, std::move(level)));
        } else {
            const int r = m % 3;
            const int pairs = (2 * r) % 3;
            const int triples = (m - 2 * pairs) / 3;
            auto it = std::make_move_iterator(level.begin());
            for (int g = 0; g < pairs; ++g, it += 2) {
                next.push_back(CodeTree::node(PrimitiveKind::E2, std::vector<CodeTree>(it, it + 2)));
            }
            for (int g = 0; g < triples; ++g, it += 3) {
                next.push_back(CodeTree::node(PrimitiveKind::E3, std::vector<CodeTree>(it, it + 3)));
            }
        }
        level = std::move(next);
    }
    return std::move(level.front());
}

namespace {

CodeTree relabel(const CodeTree& t, std::span<const int> perm) {
    if (t.is_leaf()) return CodeTree::leaf(perm[t.leaf_index()]);
    std::vector<CodeTree> kids;
    kids.reserve(t.children().size());
    for (const auto& c : t.children()) kids.push_back(relabel(c, perm));
    return CodeTree::node(t.kind(), std::move(kids));
}

}  // namespace

CodeTree permute_leaves(const CodeTree& tree, std::span<const int> permutation) {
    validate(tree);
    const int n = tree.leaf_count();
    if (static_cast<int>(permutation.size()) != n) {
        throw std::invalid_argument("permutation size " + std::to_string(permutation.size()) + " does not match " +
                                    std::to_string(n) + " leaves");
    }
    std::vector<char> hit(n, 0);
    for (int p : permutation) {
        if (p < 0 || p >= n || hit[p]) throw std::invalid_argument("permutation is not a bijection");
        hit[p] = 1;
    }
    return relabel(tree, permutation);
}

std::vector<Bit> pad_bits(std::span<const Bit> bits, int width) {
    if (static_cast<int>(bits.size()) > width) {
        throw std::invalid_argument("cannot pad " + std::to_string(bits.size()) + " bits into width " +
                                    std::to_string(width));
    }
    std::vector<Bit> out(bits.begin(), bits.end());
    out.resize(width, 0);
    return out;
}

// --- flattening -------------------------------------------------------------

namespace {

ChildRef flatten_into(const CodeTree& t, FlatTree& flat, std::vector<std::vector<PathStep>>& reversed_paths) {
    if (t.is_leaf()) {
        return {true, t.leaf_index()};
    }
    FlatNode node{t.kind(), {}};
    for (const auto& child : t.children()) {
        node.children.push_back(flatten_into(child, flat, reversed_paths));
    }
    const int id = static_cast<int>(flat.nodes.size());
    // Every leaf below child c gets (id, c) appended; paths are built leaf
    // first and reversed at the end.
    for (size_t c = 0; c < t.children().size(); ++c) {
        std::vector<int> below;
        collect_leaves(t.children()[c], below);
        for (int leaf : below) reversed_paths[leaf].push_back({id, static_cast<int>(c)});
    }
    flat.nodes.push_back(std::move(node));
    return {false, id};
}

}  // namespace

FlatTree flatten(const CodeTree& tree) {
    validate(tree);
    FlatTree flat;
    flat.leaf_count = tree.leaf_count();
    std::vector<std::vector<PathStep>> paths(flat.leaf_count);
    flatten_into(tree, flat, paths);
    for (auto& p : paths) std::reverse(p.begin(), p.end());
    flat.paths = std::move(paths);
    return flat;
}

// --- probabilities ----------------------------------------------------------

namespace {

void profiles_into(const CodeTree& t, PathProfile acc, std::vector<PathProfile>& out) {
    if (t.is_leaf()) {
        out[t.leaf_index()] = acc;
        return;
    }
    PathProfile next = acc;
    if (t.kind() == PrimitiveKind::E2) {
        ++next.k;
    } else {
        ++next.j;
    }
    for (const auto& c : t.children()) profiles_into(c, next, out);
}

}  // namespace

std::vector<PathProfile> all_path_profiles(const CodeTree& tree) {
    validate(tree);
    std::vector<PathProfile> out(tree.leaf_count());
    profiles_into(tree, {}, out);
    return out;
}

PathProfile path_profile(const CodeTree& tree, int leaf) {
    const auto all = all_path_profiles(tree);
    if (leaf < 0 || leaf >= static_cast<int>(all.size())) {
        throw std::out_of_range("unknown leaf " + std::to_string(leaf));
    }
    return all[leaf];
}

int ebit_count(const CodeTree& tree) { return tree.internal_count(); }

ExactValue exact_bit_probability(const PathProfile& profile) { return half_one_plus(delta(profile.k, profile.j)); }

ExactValue error_parity_probability(PrimitiveKind kind, int uses, Parity parity) {
    if (uses < 0) throw std::invalid_argument("error_parity_probability: negative use count");
    const ExactValue d = kind == PrimitiveKind::E2 ? delta(uses, 0) : delta(0, uses);
    return half_one_plus(parity == Parity::Even ? d : -d);
}

ExactValue min_probability(const CodeTree& tree) {
    const auto profiles = all_path_profiles(tree);
    // Longest paths dominate, but compare exactly rather than trusting that.
    ExactValue best = exact_bit_probability(profiles.front());
    for (const auto& p : profiles) {
        ExactValue v = exact_bit_probability(p);
        if (v < best) best = std::move(v);
    }
    return best;
}

ExactValue sr_average(const CodeTree& tree) {
    const auto profiles = all_path_profiles(tree);
    ExactValue sum;
    for (const auto& p : profiles) sum += exact_bit_probability(p);
    return sum * Rational(1, static_cast<long>(profiles.size()));
}

// --- correlation sources ----------------------------------------------------

SingletSource::SingletSource(std::uint64_t key, int pair_count) : key_(key), pairs_(std::max(pair_count, 0)) {}

Bit SingletSource::measure(int pair_id, const BlochVector& axis) {
    if (pair_id < 0 || pair_id >= static_cast<int>(pairs_.size())) {
        throw std::out_of_range("unknown pair " + std::to_string(pair_id));
    }
    PairState& st = pairs_[pair_id];
    const auto id = static_cast<std::uint64_t>(pair_id);
    if (st.uses == 0) {
        st.uses = 1;
        st.first_outcome = static_cast<Bit>(stream_draw(key_, 2 * id) >> 63);
        st.first_axis = axis.components();
        return st.first_outcome;
    }
    if (st.uses == 1) {
        st.uses = 2;
        const double u = unit_interval(stream_draw(key_, 2 * id + 1));
        const auto& fa = st.first_axis;
        const double raw = fa[0] * axis.x() + fa[1] * axis.y() + fa[2] * axis.z();
        const double cosine = raw > 1.0 ? 1.0 : (raw < -1.0 ? -1.0 : raw);
        const bool agree = u < agreement_probability(cosine);
        return agree ? st.first_outcome : static_cast<Bit>(st.first_outcome ^ 1);
    }
    throw PairConsumedError("pair " + std::to_string(pair_id) + " already consumed");
}

int SingletSource::measurements(int pair_id) const { return pairs_.at(pair_id).uses; }

Bit ScriptedSource::measure(int pair_id, const BlochVector& axis) {
    if (next_ >= outcomes_.size()) throw std::out_of_range("scripted source exhausted");
    calls_.push_back({pair_id, axis});
    return outcomes_[next_++] & 1;
}

// --- protocol ---------------------------------------------------------------

Protocol::Protocol(const CodeTree& tree) : flat_(flatten(tree)) {}

EncodeResult Protocol::encode(std::span<const Bit> bits, CorrelationSource& source) const {
    if (static_cast<int>(bits.size()) != flat_.leaf_count) {
        throw std::invalid_argument("encode: got " + std::to_string(bits.size()) + " bits for " +
                                    std::to_string(flat_.leaf_count) + " leaves");
    }
    EncodeResult result;
    if (flat_.nodes.empty()) {
        result.message = bits[0] & 1;
        return result;
    }
    std::vector<Bit> outputs(flat_.nodes.size(), 0);
    Bit inputs[3];
    for (size_t id = 0; id < flat_.nodes.size(); ++id) {
        const FlatNode& node = flat_.nodes[id];
        for (size_t c = 0; c < node.children.size(); ++c) {
            const ChildRef& ref = node.children[c];
            inputs[c] = ref.is_leaf ? static_cast<Bit>(bits[ref.index] & 1) : outputs[ref.index];
        }
        const std::span<const Bit> in(inputs, node.children.size());
        const BlochVector axis = alice_basis(node.kind, in);
        const Bit a = source.measure(static_cast<int>(id), axis);
        outputs[id] = node_output(in, a);
        result.transcript.entries.push_back({static_cast<int>(id), Role::Alice, axis, a, outputs[id]});
    }
    result.message = outputs.back();
    return result;
}

DecodeResult Protocol::decode(Bit message, int target, CorrelationSource& source) const {
    if (target < 0 || target >= flat_.leaf_count) throw std::out_of_range("unknown leaf " + std::to_string(target));
    DecodeResult result;
    Bit guess = message & 1;
    for (const PathStep& step : flat_.paths[target]) {
        const BlochVector axis = bob_basis(flat_.nodes[step.node].kind, step.child);
        const Bit b = source.measure(step.node, axis);
        guess ^= b;
        result.transcript.entries.push_back({step.node, Role::Bob, axis, b, guess});
    }
    result.guess = guess;
    return result;
}

EncodeResult encode(const CodeTree& tree, std::span<const Bit> bits, CorrelationSource& source) {
    return Protocol(tree).encode(bits, source);
}

DecodeResult decode(const CodeTree& tree, Bit message, int target, CorrelationSource& source) {
    return Protocol(tree).decode(message, target, source);
}

// --- exhaustive oracle ------------------------------------------------------

ExactValue exhaustive_success_probability(const CodeTree& tree, std::span<const Bit> bits, int target) {
    const FlatTree flat = flatten(tree);
    if (static_cast<int>(bits.size()) != flat.leaf_count) {
        throw std::invalid_argument("oracle: bit vector does not match leaf count");
    }
    if (target < 0 || target >= flat.leaf_count) throw std::out_of_range("unknown leaf " + std::to_string(target));
    const auto& path = flat.paths[target];
    const int length = static_cast<int>(path.size());
    if (length > kMaxOraclePath) {
        throw std::invalid_argument("oracle: path of length " + std::to_string(length) + " is too deep");
    }

    // Free variables: (A, B) per path node, plus one fair bit per internal
    // child hanging off the path.
    int free_children = 0;
    for (const auto& step : path) {
        const auto& node = flat.nodes[step.node];
        for (size_t c = 0; c < node.children.size(); ++c) {
            if (static_cast<int>(c) != step.child && !node.children[c].is_leaf) ++free_children;
        }
    }
    const int free_bits = 2 * length + free_children;
    if (free_bits > 30) throw std::invalid_argument("oracle: enumeration too large");

    const Bit truth = bits[target] & 1;
    const Rational quarter(1, 4);
    const Rational half(1, 2);
    ExactValue total;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_bits); ++mask) {
        int cursor = 0;
        auto take = [&]() { return static_cast<Bit>((mask >> cursor++) & 1); };
        ExactValue weight(1);
        Bit carried = truth;  // value flowing up from the target
        Bit parity = 0;       // xor of Bob's outcomes
        for (int s = length - 1; s >= 0; --s) {
            const PathStep& step = path[s];
            const FlatNode& node = flat.nodes[step.node];
            Bit inputs[3];
            for (size_t c = 0; c < node.children.size(); ++c) {
                const ChildRef& ref = node.children[c];
                if (static_cast<int>(c) == step.child) {
                    inputs[c] = carried;
                } else if (ref.is_leaf) {
                    inputs[c] = bits[ref.index] & 1;
                } else {
                    inputs[c] = take();
                    weight *= half;
                }
            }
            const std::span<const Bit> in(inputs, node.children.size());
            const Bit a = take();
            const Bit b = take();
            const ExactValue cosine = exact_alignment(node.kind, in, step.child);
            // P(A, B) = (1 + (-1)^(A xor B) a.b) / 4
            weight *= ((a == b) ? ExactValue(1) + cosine : ExactValue(1) - cosine) * quarter;
            carried = node_output(in, a);
            parity ^= b;
        }
        if (static_cast<Bit>(carried ^ parity) == truth) total += weight;
    }
    return total;
}

}  // namespace earac
