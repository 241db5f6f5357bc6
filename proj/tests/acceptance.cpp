// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "earac/codetree.hpp"
#include "earac/montecarlo.hpp"
#include "earac/optimizer.hpp"
#include "earac/session.hpp"
#include "oracles.hpp"
#include "stats.hpp"

using namespace earac;

namespace {

ExactValue P(const char* text) { return ExactValue::parse(text); }

std::vector<Bit> bits_of(unsigned mask, int n) {
    std::vector<Bit> b(n);
    for (int i = 0; i < n; ++i) b[i] = (mask >> i) & 1u;
    return b;
}

// Fails the criterion with a message; collected by the runner.
struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure{what};
}

std::string show(const ExactValue& v) { return v.str() + " (" + v.to_decimal(8) + ")"; }

// smallest 2^a 3^b >= n, by direct enumeration
long smooth_at_least(long n) {
    long best = -1;
    for (long a = 1; a < 4 * n; a *= 2)
        for (long m = a; m < 4 * n; m *= 3)
            if (m >= n && (best < 0 || m < best)) best = m;
    return best;
}

std::string primitive_exactness() {
    int cases = 0;
    for (auto [kind, root] : {std::pair{PrimitiveKind::E2, oracle::inv_sqrt2()}, {PrimitiveKind::E3, oracle::inv_sqrt3()}}) {
        const int a = arity(kind);
        std::vector<CodeTree> kids;
        for (int i = 0; i < a; ++i) kids.push_back(CodeTree::leaf(i));
        const CodeTree t = CodeTree::node(kind, std::move(kids));
        const ExactValue want = ExactValue(Rational(1, 2)) + root * Rational(1, 2);
        for (unsigned m = 0; m < (1u << a); ++m)
            for (int q = 0; q < a; ++q) {
                const ExactValue got = exhaustive_success_probability(t, bits_of(m, a), q);
                require(got == want, std::string(kind_name(kind)) + " case " + std::to_string(m) + "/" +
                                         std::to_string(q) + " gave " + show(got));
                ++cases;
            }
    }
    require(cases == 32, "expected 32 cases");
    return "32 cases exact";
}

std::string table_reproduction() {
    struct Row {
        int n;
        const char* value;
        const char* delta;  // printed advantage column, empty for n = 2, 3
        double qrac;
    };
    const Row rows[] = {
        {2, "1/2 + 1/4*sqrt2", "0", 0},
        {3, "1/2 + 1/6*sqrt3", "0", 0},
        {4, "3/4", "0.00852", 0.74148},
        {5, "12/20 + 1/20*sqrt6", "0.00889", 0.71358},
        {6, "1/2 + 1/12*sqrt6", "0.01007", 0.69405},
        {7, "12/21 + 1/21*sqrt6", "0.00943", 0.67864},
        {9, "2/3", "0.00978", 0.65689},
        {10, "10/20 + 1/20*sqrt2 + 1/20*sqrt3", "0.00911", 0.64820},
        {12, "1/2 + 1/12*sqrt3", "0.00947", 0.63487},
        {15, "30/60 + 3/60*sqrt2 + 2/60*sqrt3", "0.00809", 0.62036},
        // derived values for the two flagged rows
        {8, "30/48 + 1/48*sqrt6", "", 0},
        {11, "22/44 + 1/44*sqrt2 + 3/44*sqrt3", "", 0},
    };
    for (const Row& r : rows) {
        const CodeTree t = build_paper_tree(r.n);
        const ExactValue want = P(r.value);
        const ExactValue lib = sr_average(t);
        const ExactValue independent = half_one_plus(oracle::mean_advantage(t));
        require(lib == want, "n=" + std::to_string(r.n) + " library gave " + show(lib));
        require(independent == want, "n=" + std::to_string(r.n) + " oracle gave " + show(independent));
        if (r.qrac > 0) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.5f", want.to_double() - r.qrac);
            require(std::string(buf) == r.delta, "n=" + std::to_string(r.n) + " delta " + buf);
        }
    }
    // the printed n = 8 entry exceeds the upper bound; ours does not
    require(P("52/80 + 1/80*sqrt6").to_double() > upper_bound(8).approx, "printed n=8 not above bound");
    require(P("30/48 + 1/48*sqrt6").to_double() <= upper_bound(8).approx, "derived n=8 above bound");
    return "10 rows exact, deltas to 5 places; n=8,11 asserted to derived values (erratum flagged)";
}

std::string closed_form_vs_oracle() {
    long checked = 0;
    for (int n = 1; n <= 6; ++n) {
        std::vector<CodeTree> trees = oracle::all_shapes(n);
        trees.push_back(build_paper_tree(n));
        trees.push_back(best_avg_tree(n).tree);
        trees.push_back(best_min_tree(n).tree);
        for (const CodeTree& t : trees) {
            const auto adv = oracle::leaf_advantages(t);
            for (int target = 0; target < n; ++target) {
                const ExactValue want = half_one_plus(adv[target]);
                require(exact_bit_probability(path_profile(t, target)) == want, "profile law " + to_expression(t));
                for (unsigned m = 0; m < (1u << n); ++m) {
                    const ExactValue got = exhaustive_success_probability(t, bits_of(m, n), target);
                    require(got == want, to_expression(t) + " target " + std::to_string(target) + " gave " + show(got));
                    ++checked;
                }
            }
        }
    }
    return std::to_string(checked) + " (tree, input, target) cases";
}

std::string bound_saturation() {
    for (int n : {2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 27}) {
        const ExactValue g = best_min_tree(n).value;
        // g = 1/sqrt(n) exactly  <=>  g > 0 and g^2 = 1/n
        require(g.sign() > 0 && g * g == ExactValue(Rational(1, n)), "n=" + std::to_string(n) + " gave " + show(g));
    }
    return "11 sizes saturate";
}

std::string bound_dominance() {
    TreeOptimizer avg(Objective::Average), mn(Objective::Minimum);
    for (int n = 1; n <= 30; ++n) {
        const ExactValue f = avg.best(n).value, g = mn.best(n).value;
        const long m = smooth_at_least(n);
        require(f * f <= ExactValue(Rational(1, n)), "f(" + std::to_string(n) + ") above 1/sqrt n");
        require(g.sign() > 0 && g * g >= ExactValue(Rational(1, m)), "g(" + std::to_string(n) + ") below bound");
        require(f.to_double() <= 1 / std::sqrt(double(n)) + 1e-12, "f float check");
        require(g.to_double() >= 1 / std::sqrt(double(m)) - 1e-12, "g float check");
        for (const ExactValue& a : {f, g}) {
            const double p = half_one_plus(a).to_double();
            require(ic_check(n, p).holds, "ic fails at n=" + std::to_string(n));
        }
    }
    return "n <= 30";
}

std::string dp_correctness() {
    for (int n = 1; n <= 10; ++n) {
        ExactValue best_mean, best_min;
        bool first = true;
        for (const CodeTree& t : oracle::all_shapes(n)) {
            const ExactValue a = oracle::mean_advantage(t), b = oracle::min_advantage(t);
            if (first || a > best_mean) best_mean = a;
            if (first || b > best_min) best_min = b;
            first = false;
        }
        require(best_avg_tree(n).value == best_mean, "f(" + std::to_string(n) + ")");
        require(best_min_tree(n).value == best_min, "g(" + std::to_string(n) + ")");
    }
    const ExactValue f10 = half_one_plus(best_avg_tree(10).value);
    require(best_avg_tree(10).value == P("3/15 + 1/15*sqrt3"), "f(10) value");
    require(f10 > P("10/20 + 1/20*sqrt2 + 1/20*sqrt3"), "f(10) does not beat the table");
    return "n <= 10; f(10)=(3+sqrt3)/15 gives p=" + f10.to_decimal(7) + " > table 0.6573";
}

std::string monte_carlo() {
    double worst = 0;
    int retries = 0;
    for (int n = 2; n <= 12; ++n) {
        EstimateOptions o;
        o.trials = 100000;
        const TrialReport r = estimate_with_retry(build_paper_tree(n), o);
        retries += r.label.find("retry") != std::string::npos;
        require(r.pass, "n=" + std::to_string(n) + " failed after retry");
        for (const BitStats& b : r.bits) {
            require(std::fabs(b.z) < 4.0, "n=" + std::to_string(n) + " bit " + std::to_string(b.target));
            worst = std::max(worst, std::fabs(b.z));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |z| %.2f, %d retries", worst, retries);
    return buf;
}

std::string qrac_equivalence() {
    for (int n : {2, 3}) {
        const long T = 100000;
        const QracReductionReport r = qrac_reduction_experiment(n, T, 17);
        const double p = 0.5 * (1 + 1 / std::sqrt(double(n)));
        for (int i = 0; i < n; ++i) {
            require(stats::within_4_sigma(r.direct.bits[i].successes, T, p), "direct n=" + std::to_string(n));
            require(stats::within_4_sigma(r.steering.bits[i].successes, T, p), "steering n=" + std::to_string(n));
            require(stats::agree_4_sigma(r.direct.bits[i].successes, T, r.steering.bits[i].successes, T),
                    "arms disagree n=" + std::to_string(n));
        }
    }
    return "n=2,3 at T=1e5";
}

std::string resource_accounting() {
    for (int n = 1; n <= 30; ++n)
        for (const CodeTree& t : {build_paper_tree(n), best_avg_tree(n).tree, best_min_tree(n).tree})
            require(ebit_count(t) <= n - 1, "ebits at n=" + std::to_string(n));
    int sessions = 0;
    for (int n = 1; n <= 8; ++n)
        for (int target = 0; target < n; ++target) {
            SessionOptions o;
            o.seed = 100 + n;
            const SessionResult r = run_session(build_paper_tree(n), bits_of(0x5au * n + target, n), target, o);
            require(classical_bits_sent(r) == 1 && classical_bits_received(r) == 1, "classical bits");
            ++sessions;
        }
    return "ebits <= n-1 for n <= 30; " + std::to_string(sessions) + " sessions with one classical bit";
}

std::string session_transparency() {
    int sessions = 0;
    for (int n = 2; n <= 5; ++n)
        for (int target = 0; target < n; ++target)
            for (unsigned m = 0; m < (1u << n); m += 3) {
                SessionOptions a;
                a.seed = 9000 + m;
                a.sr_seed = target;
                SessionOptions b = a;
                b.transport = TransportKind::TcpLoopback;
                const CodeTree t = build_paper_tree(n);
                const SessionResult x = run_session(t, bits_of(m, n), target, a);
                const SessionResult y = run_session(t, bits_of(m, n), target, b);
                require(x.guess == y.guess, "guess differs");
                require(x.alice == y.alice && x.bob == y.bob && x.broker == y.broker, "transcripts differ");
                ++sessions;
            }
    return std::to_string(sessions) + " session pairs identical";
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<std::string()>>> criteria = {
        {"primitive exactness", primitive_exactness},
        {"table reproduction", table_reproduction},
        {"closed form vs oracle", closed_form_vs_oracle},
        {"bound saturation", bound_saturation},
        {"bound dominance", bound_dominance},
        {"dp correctness", dp_correctness},
        {"monte carlo", monte_carlo},
        {"qrac reduction", qrac_equivalence},
        {"resource accounting", resource_accounting},
        {"session transparency", session_transparency},
    };
    int failed = 0, index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = fn();
        } catch (const Failure& f) {
            ok = false;
            detail = f.what;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %2d %-22s %7.2fs  %s\n", ok ? "PASS" : "FAIL", index, name, secs, detail.c_str());
        failed += !ok;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
