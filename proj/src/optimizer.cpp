#include "earac/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mpfr_util.hpp"

namespace earac {

namespace {

ExactValue inverse_root_of(PrimitiveKind kind) {
    // 1/sqrt2 = sqrt2/2, 1/sqrt3 = sqrt3/3
    return kind == PrimitiveKind::E2 ? ExactValue(0, Rational(1, 2)) : ExactValue(0, 0, Rational(1, 3));
}

// Ascending compositions of n into exactly `parts` positive integers.
void ascending_compositions(int n, int parts, int min_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        if (n >= min_part) {
            cur.push_back(n);
            out.push_back(cur);
            cur.pop_back();
        }
        return;
    }
    for (int p = min_part; p * parts <= n; ++p) {
        cur.push_back(p);
        ascending_compositions(n - p, parts - 1, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

void TreeOptimizer::extend_to(int n) {
    if (cells_.empty()) {
        cells_.resize(2);
        cells_[1] = Cell{ExactValue(1), 0, {}, PrimitiveKind::E2};
    }
    for (int m = static_cast<int>(cells_.size()); m <= n; ++m) {
        std::optional<Cell> best;
        for (PrimitiveKind kind : {PrimitiveKind::E2, PrimitiveKind::E3}) {
            std::vector<std::vector<int>> comps;
            std::vector<int> cur;
            ascending_compositions(m, arity(kind), 1, cur, comps);
            const ExactValue scale = inverse_root_of(kind);
            for (auto& parts : comps) {
                ExactValue value;
                int nodes = 1;
                if (objective_ == Objective::Average) {
                    for (int p : parts) {
                        value += cells_[p].value * Rational(p);
                        nodes += cells_[p].internal_nodes;
                    }
                    value *= Rational(1, m);
                } else {
                    value = cells_[parts.front()].value;
                    for (int p : parts) {
                        if (cells_[p].value < value) value = cells_[p].value;
                        nodes += cells_[p].internal_nodes;
                    }
                }
                value *= scale;
                Cell cand{std::move(value), nodes, std::move(parts), kind};
                bool take = !best;
                if (!take) {
                    const auto order = compare(cand.value, best->value);
                    if (order == std::strong_ordering::greater) {
                        take = true;
                    } else if (order == std::strong_ordering::equal) {
                        take = cand.internal_nodes < best->internal_nodes ||
                               (cand.internal_nodes == best->internal_nodes && cand.parts < best->parts);
                    }
                }
                if (take) best = std::move(cand);
            }
        }
        cells_.push_back(std::move(*best));
    }
}

CodeTree TreeOptimizer::assemble(int n, int& next_leaf) const {
    if (n == 1) return CodeTree::leaf(next_leaf++);
    const Cell& c = cells_[n];
    std::vector<CodeTree> kids;
    for (int p : c.parts) kids.push_back(assemble(p, next_leaf));
    return CodeTree::node(c.kind, std::move(kids));
}

const DpEntry& TreeOptimizer::best(int n) {
    if (n <= 0) throw std::invalid_argument("tree optimizer: n must be positive");
    extend_to(n);
    auto it = out_.find(n);
    if (it == out_.end()) {
        int next_leaf = 0;
        const Cell& c = cells_[n];
        it = out_.emplace(n, DpEntry{n, c.value, assemble(n, next_leaf), c.internal_nodes, c.parts}).first;
    }
    return it->second;
}

DpEntry best_avg_tree(int n) { return TreeOptimizer(Objective::Average).best(n); }
DpEntry best_min_tree(int n) { return TreeOptimizer(Objective::Minimum).best(n); }

bool has_mixed_raw_inputs(const CodeTree& tree) {
    if (tree.is_leaf()) return false;
    bool raw = false;
    bool deep = false;
    for (const auto& c : tree.children()) {
        (c.is_leaf() ? raw : deep) = true;
        if (has_mixed_raw_inputs(c)) return true;
    }
    return raw && deep;
}

bool is_23_smooth(long n) {
    if (n <= 0) return false;
    while (n % 2 == 0) n /= 2;
    while (n % 3 == 0) n /= 3;
    return n == 1;
}

long smallest_23_smooth_geq(long n) {
    if (n <= 0) throw std::invalid_argument("smallest_23_smooth_geq: n must be positive");
    long m = n;
    while (!is_23_smooth(m)) ++m;
    return m;
}

ExactValue lower_bound(long n) {
    const long m = smallest_23_smooth_geq(n);
    ExactValue inv;
    if (!inverse_sqrt_in_ring(m, inv)) throw std::logic_error("3-smooth number outside the ring");
    return half_one_plus(inv);
}

BoundValue upper_bound(long n) {
    if (n <= 0) throw std::invalid_argument("upper_bound: n must be positive");
    BoundValue out;
    ExactValue inv;
    if (inverse_sqrt_in_ring(n, inv)) {
        out.exact = half_one_plus(inv);
        out.decimal = out.exact->to_decimal(20);
        out.approx = out.exact->to_double();
        return out;
    }
    detail::BigFloat v(256);
    mpfr_set_si(v.get(), n, MPFR_RNDN);
    mpfr_rec_sqrt(v.get(), v.get(), MPFR_RNDN);
    mpfr_add_ui(v.get(), v.get(), 1, MPFR_RNDN);
    mpfr_div_ui(v.get(), v.get(), 2, MPFR_RNDN);
    out.decimal = v.to_string(20);
    out.approx = v.to_double();
    return out;
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

IcCheck ic_check(long K, double p) {
    if (K < 1) throw std::invalid_argument("ic_check: K must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ic_check: p must lie in [0, 1]");
    IcCheck out;
    out.lhs = static_cast<double>(K) * (1.0 - binary_entropy(p));
    out.holds = out.lhs <= 1.0 + 1e-12;
    return out;
}

EntropyGap entropy_gap(double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("entropy_gap: y must lie in [0, 1]");
    return {1.0 - binary_entropy((1.0 + y) / 2.0), y * y / (2.0 * std::log(2.0))};
}

}  // namespace earac
