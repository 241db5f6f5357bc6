#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's evaluation paths (path_profile, exact_bit_probability,
// TreeOptimizer); values are rebuilt from first principles.

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "earac/codetree.hpp"
#include "earac/exactnum.hpp"

namespace oracle {

using earac::CodeTree;
using earac::ExactValue;
using earac::PrimitiveKind;
using earac::Rational;

inline ExactValue inv_sqrt2() { return ExactValue(0, Rational(1, 2)); }
inline ExactValue inv_sqrt3() { return ExactValue(0, 0, Rational(1, 3)); }

// Per-leaf advantages by walking the tree and multiplying one factor per
// primitive passed on the way down.
inline void leaf_advantages(const CodeTree& t, const ExactValue& acc, std::vector<ExactValue>& out) {
    if (t.is_leaf()) {
        if (static_cast<int>(out.size()) <= t.leaf_index()) out.resize(t.leaf_index() + 1);
        out[t.leaf_index()] = acc;
        return;
    }
    const ExactValue f = t.kind() == PrimitiveKind::E2 ? inv_sqrt2() : inv_sqrt3();
    for (const auto& c : t.children()) leaf_advantages(c, acc * f, out);
}

inline std::vector<ExactValue> leaf_advantages(const CodeTree& t) {
    std::vector<ExactValue> out;
    leaf_advantages(t, ExactValue(1), out);
    return out;
}

inline ExactValue mean_advantage(const CodeTree& t) {
    const auto a = leaf_advantages(t);
    ExactValue s;
    for (const auto& v : a) s += v;
    return s * Rational(1, static_cast<long>(a.size()));
}

inline ExactValue min_advantage(const CodeTree& t) {
    const auto a = leaf_advantages(t);
    return *std::min_element(a.begin(), a.end());
}

// Relabels leaves 0..n-1 left to right.
inline CodeTree relabel(const CodeTree& t, int& next) {
    if (t.is_leaf()) return CodeTree::leaf(next++);
    std::vector<CodeTree> kids;
    for (const auto& c : t.children()) kids.push_back(relabel(c, next));
    return CodeTree::node(t.kind(), std::move(kids));
}

// Every tree shape with exactly n leaves, children in non-decreasing
// (size, shape index) order so each unordered shape appears once. Plain
// recursion, no reuse of partial optima.
inline std::vector<CodeTree> all_shapes(int n) {
    static std::map<int, std::vector<CodeTree>> cache;  // shape lists only, not optima
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    std::vector<CodeTree> out;
    if (n == 1) {
        out.push_back(CodeTree::leaf(0));
    } else {
        for (int arity : {2, 3}) {
            // choose sizes s1 <= s2 <= ... summing to n, then shapes with index order
            std::vector<std::pair<int, int>> pick;  // (size, shape idx)
            std::function<void(int, int, int)> rec = [&](int remaining, int min_size, int min_idx) {
                if (static_cast<int>(pick.size()) == arity) {
                    if (remaining != 0) return;
                    std::vector<CodeTree> kids;
                    for (auto [s, i] : pick) kids.push_back(all_shapes(s)[i]);
                    CodeTree t = CodeTree::node(arity == 2 ? PrimitiveKind::E2 : PrimitiveKind::E3, std::move(kids));
                    int next = 0;
                    out.push_back(relabel(t, next));
                    return;
                }
                const int left = arity - static_cast<int>(pick.size());
                for (int s = min_size; s * left <= remaining; ++s) {
                    const auto shapes = all_shapes(s);
                    for (int i = (s == min_size ? min_idx : 0); i < static_cast<int>(shapes.size()); ++i) {
                        pick.emplace_back(s, i);
                        rec(remaining - s, s, i);
                        pick.pop_back();
                    }
                }
            };
            rec(n, 1, 0);
        }
    }
    cache[n] = out;
    return out;
}

// Probability of an even (or odd) number of errors in `uses` independent
// runs, each correct with probability p: sum of binomial terms.
inline ExactValue parity_by_binomial(const ExactValue& p, int uses, bool even) {
    const ExactValue q = ExactValue(1) - p;
    ExactValue total;
    for (int e = 0; e <= uses; ++e) {
        if ((e % 2 == 0) != even) continue;
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), uses, e);
        ExactValue term{Rational(binom)};
        for (int i = 0; i < uses - e; ++i) term *= p;
        for (int i = 0; i < e; ++i) term *= q;
        total += term;
    }
    return total;
}

}  // namespace oracle
