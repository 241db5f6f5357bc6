#pragma once

// Optimal concatenation trees and the bounds they are measured against.
//
// Values here are advantages d = 2p - 1, not probabilities. A bit at depth
// profile (k, j) has advantage 2^(-k/2) 3^(-j/2); a root of kind E2 (E3)
// scales every advantage below it by 1/sqrt2 (1/sqrt3).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "earac/codetree.hpp"
#include "earac/exactnum.hpp"

namespace earac {

struct DpEntry {
    int n = 0;
    ExactValue value;  // advantage
    CodeTree tree = CodeTree::leaf(0);
    int internal_nodes = 0;
    std::vector<int> composition;  // subtree sizes under the root, ascending
};

enum class Objective {
    Average,  // leaf-weighted mean advantage (codes used with SR)
    Minimum,  // worst-bit advantage (codes used without SR)
};

// Memoized dynamic program over n. f(1) = g(1) = 1 and
//   f(n) = max over kind, parts: sum(n_i f(n_i)) / (n c)
//   g(n) = max over kind, parts: min(g(n_i)) / c
// with c = sqrt2 for an E2 root and sqrt3 for E3, and parts >= 1 summing to
// n. Ties go to fewer internal nodes, then to the lexicographically smallest
// ascending composition. Leaves of the returned tree are labelled left to
// right.
class TreeOptimizer {
public:
    explicit TreeOptimizer(Objective objective) : objective_(objective) {}

    // Throws std::invalid_argument for n <= 0. The reference lives as long
    // as the optimizer.
    const DpEntry& best(int n);
    Objective objective() const { return objective_; }

private:
    struct Cell {
        ExactValue value;
        int internal_nodes = 0;
        std::vector<int> parts;
        PrimitiveKind kind = PrimitiveKind::E2;
    };

    void extend_to(int n);
    CodeTree assemble(int n, int& next_leaf) const;

    Objective objective_;
    std::vector<Cell> cells_;                  // index = n, cells_[0] unused
    std::map<int, DpEntry> out_;               // materialized entries; references stay valid
};

DpEntry best_avg_tree(int n);
DpEntry best_min_tree(int n);

// True when the tree uses a primitive directly on a raw bit next to deeper
// subtrees (a size-1 part mixed with larger ones); flagged when rendering.
bool has_mixed_raw_inputs(const CodeTree& tree);

// Smallest m >= n of the form 2^k 3^j. Throws std::invalid_argument for n <= 0.
long smallest_23_smooth_geq(long n);
bool is_23_smooth(long n);

// (1 + 1/sqrt(m)) / 2 with m = smallest_23_smooth_geq(n); always exact.
ExactValue lower_bound(long n);

struct BoundValue {
    std::optional<ExactValue> exact;  // present when 1/sqrt(n) is in the ring
    std::string decimal;              // 20 significant digits
    double approx = 0.0;
    bool is_exact() const { return exact.has_value(); }
};

// (1 + 1/sqrt(n)) / 2.
BoundValue upper_bound(long n);

double binary_entropy(double p);

struct IcCheck {
    double lhs = 0.0;  // K (1 - h(p))
    bool holds = false;
};

// One bit of communication cannot carry more than one bit of information
// about a uniformly random K-bit string: K (1 - h(p)) <= 1.
IcCheck ic_check(long K, double p);

struct EntropyGap {
    double exact_side = 0.0;      // 1 - h((1 + y)/2)
    double quadratic_side = 0.0;  // y^2 / (2 ln 2)
};

EntropyGap entropy_gap(double y);

}  // namespace earac
