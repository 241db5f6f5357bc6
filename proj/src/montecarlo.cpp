#include "earac/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <nlohmann/json.hpp>

#include "earac/rng.hpp"

namespace earac {

namespace {

constexpr std::size_t kBlock = 4096;

std::vector<int> targets_of(const CodeTree& tree, const EstimateOptions& options) {
    const int n = tree.leaf_count();
    if (options.target) {
        if (*options.target < 0 || *options.target >= n) {
            throw std::out_of_range("unknown target leaf " + std::to_string(*options.target));
        }
        return {*options.target};
    }
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
}

void check_options(const CodeTree& tree, const EstimateOptions& options) {
    if (options.trials < 1) throw std::invalid_argument("trial count must be at least 1");
    if (options.inputs && static_cast<int>(options.inputs->size()) != tree.leaf_count()) {
        throw std::invalid_argument("fixed input vector does not match the leaf count");
    }
}

}  // namespace

TrialKeys trial_keys(std::uint64_t seed, int target, long trial) {
    const std::uint64_t per_target = derive_key(seed, static_cast<std::uint64_t>(target));
    const std::uint64_t per_trial = derive_key(per_target, static_cast<std::uint64_t>(trial));
    return {derive_key(per_trial, 1), derive_key(per_trial, 2)};
}

std::vector<Bit> trial_inputs(std::uint64_t input_key, int n) {
    std::vector<Bit> bits(n);
    std::uint64_t word = 0;
    for (int i = 0; i < n; ++i) {
        if (i % 64 == 0) word = stream_draw(input_key, static_cast<std::uint64_t>(i / 64));
        bits[i] = static_cast<Bit>((word >> (i % 64)) & 1);
    }
    return bits;
}

Bit reference_trial(const Protocol& protocol, std::uint64_t seed, int target, long trial,
                    const std::optional<std::vector<Bit>>& fixed_inputs) {
    const TrialKeys keys = trial_keys(seed, target, trial);
    const int n = protocol.flat().leaf_count;
    const std::vector<Bit> bits = fixed_inputs ? *fixed_inputs : trial_inputs(keys.inputs, n);
    SingletSource source(keys.pairs, static_cast<int>(protocol.flat().nodes.size()));
    const EncodeResult enc = protocol.encode(bits, source);
    return protocol.decode(enc.message, target, source).guess;
}

// --- batch runner -------------------------------------------------------------

BatchRunner::BatchRunner(const FlatTree& flat, const kernels::KernelTable& kernels)
    : flat_(flat),
      k_(kernels),
      inputs_(flat.leaf_count, std::vector<Bit>(kBlock)),
      outputs_(flat.nodes.size(), std::vector<Bit>(kBlock)),
      first_(kBlock),
      second_(kBlock),
      guess_(kBlock),
      ax_(kBlock),
      ay_(kBlock),
      az_(kBlock),
      u_(kBlock),
      cos_(kBlock) {}

void BatchRunner::run(std::uint64_t seed, int target, long begin, std::size_t count,
                      const std::optional<std::vector<Bit>>& fixed_inputs) {
    if (count > kBlock) throw std::invalid_argument("batch larger than the runner's block");
    if (target < 0 || target >= flat_.leaf_count) throw std::out_of_range("unknown target leaf");
    target_ = target;
    for (auto& v : inputs_) v.resize(count);
    for (auto& v : outputs_) v.resize(count);
    first_.resize(count);
    second_.resize(count);
    guess_.resize(count);
    ax_.resize(count);
    ay_.resize(count);
    az_.resize(count);
    u_.resize(count);
    cos_.resize(count);

    const int n = flat_.leaf_count;
    std::vector<std::uint64_t> pair_keys(count);
    for (std::size_t lane = 0; lane < count; ++lane) {
        const TrialKeys keys = trial_keys(seed, target, begin + static_cast<long>(lane));
        pair_keys[lane] = keys.pairs;
        if (fixed_inputs) {
            for (int i = 0; i < n; ++i) inputs_[i][lane] = (*fixed_inputs)[i] & 1;
        } else {
            std::uint64_t word = 0;
            for (int i = 0; i < n; ++i) {
                if (i % 64 == 0) word = stream_draw(keys.inputs, static_cast<std::uint64_t>(i / 64));
                inputs_[i][lane] = static_cast<Bit>((word >> (i % 64)) & 1);
            }
        }
    }

    if (flat_.nodes.empty()) {
        std::copy(inputs_[0].begin(), inputs_[0].end(), guess_.begin());
        return;
    }

    // Which nodes lie on the target's path, and with which query.
    std::vector<int> query(flat_.nodes.size(), -1);
    for (const PathStep& s : flat_.paths[target]) query[s.node] = s.child;

    std::fill(guess_.begin(), guess_.end(), Bit{0});
    for (std::size_t id = 0; id < flat_.nodes.size(); ++id) {
        const FlatNode& node = flat_.nodes[id];
        auto child_values = [&](std::size_t c) -> const std::vector<Bit>& {
            const ChildRef& ref = node.children[c];
            return ref.is_leaf ? inputs_[ref.index] : outputs_[ref.index];
        };
        const auto pair = static_cast<std::uint64_t>(id);
        for (std::size_t lane = 0; lane < count; ++lane) {
            first_[lane] = static_cast<Bit>(stream_draw(pair_keys[lane], 2 * pair) >> 63);
        }
        std::vector<Bit>& out = outputs_[id];
        const std::vector<Bit>& c0 = child_values(0);
        std::copy(c0.begin(), c0.end(), out.begin());
        k_.xor_into(out, first_);

        if (query[id] < 0) continue;

        const auto table = alice_basis_table(node.kind);
        const std::vector<Bit>& c1 = child_values(1);
        const std::vector<Bit>* c2 = node.children.size() > 2 ? &child_values(2) : nullptr;
        for (std::size_t lane = 0; lane < count; ++lane) {
            int idx = (c0[lane] ^ c1[lane]) & 1;
            if (c2) idx |= ((c0[lane] ^ (*c2)[lane]) & 1) << 1;
            const auto& v = table[idx].components();
            ax_[lane] = v[0];
            ay_[lane] = v[1];
            az_[lane] = v[2];
            u_[lane] = unit_interval(stream_draw(pair_keys[lane], 2 * pair + 1));
        }
        const BlochVector bob = bob_basis(node.kind, query[id]);
        const double b[3] = {bob.x(), bob.y(), bob.z()};
        k_.dot3(ax_, ay_, az_, b, cos_);
        k_.conditioned_bits(first_, u_, cos_, second_);
        k_.xor_into(guess_, second_);
    }
    k_.xor_into(guess_, outputs_[flat_.root()]);
}

// --- estimates ------------------------------------------------------------------

void finalize(TrialReport& report) {
    report.pass = true;
    for (BitStats& s : report.bits) {
        s.p_hat = static_cast<double>(s.successes) / static_cast<double>(s.trials);
        s.sigma = std::sqrt(s.p_exact * (1.0 - s.p_exact) / static_cast<double>(s.trials));
        if (s.sigma > 0.0) {
            s.z = (s.p_hat - s.p_exact) / s.sigma;
        } else {
            s.z = s.p_hat == s.p_exact ? 0.0 : std::numeric_limits<double>::infinity();
        }
        if (!(std::fabs(s.z) < report.z_limit)) report.pass = false;
    }
}

TrialReport estimate(const CodeTree& tree, const EstimateOptions& options) {
    check_options(tree, options);
    const kernels::KernelTable& k = options.backend ? kernels::kernels_for(*options.backend) : kernels::best_kernels();
    const FlatTree flat = flatten(tree);
    const auto profiles = all_path_profiles(tree);
    BatchRunner runner(flat, k);

    TrialReport report;
    report.label = to_expression(tree);
    report.seed = options.seed;
    report.backend = std::string(kernels::backend_name(k.backend));
    report.z_limit = options.z_limit;
    for (int target : targets_of(tree, options)) {
        BitStats s;
        s.target = target;
        s.trials = options.trials;
        s.p_exact = exact_bit_probability(profiles[target]).to_double();
        for (long begin = 0; begin < options.trials; begin += static_cast<long>(kBlock)) {
            const auto count = static_cast<std::size_t>(std::min<long>(kBlock, options.trials - begin));
            runner.run(options.seed, target, begin, count, options.inputs);
            s.successes += static_cast<long>(k.count_equal(runner.guesses(), runner.truths()));
        }
        report.bits.push_back(s);
    }
    finalize(report);
    return report;
}

TrialReport estimate_reference(const CodeTree& tree, const EstimateOptions& options) {
    check_options(tree, options);
    const Protocol protocol(tree);
    const auto profiles = all_path_profiles(tree);
    TrialReport report;
    report.label = to_expression(tree);
    report.seed = options.seed;
    report.backend = "reference";
    report.z_limit = options.z_limit;
    for (int target : targets_of(tree, options)) {
        BitStats s;
        s.target = target;
        s.trials = options.trials;
        s.p_exact = exact_bit_probability(profiles[target]).to_double();
        for (long t = 0; t < options.trials; ++t) {
            const TrialKeys keys = trial_keys(options.seed, target, t);
            const Bit truth = options.inputs ? (*options.inputs)[target] & 1
                                             : trial_inputs(keys.inputs, tree.leaf_count())[target];
            s.successes += reference_trial(protocol, options.seed, target, t, options.inputs) == truth;
        }
        report.bits.push_back(s);
    }
    finalize(report);
    return report;
}

std::uint64_t retry_seed(std::uint64_t seed) { return derive_key(seed, 0x7265747279ULL); }

TrialReport estimate_with_retry(const CodeTree& tree, const EstimateOptions& options) {
    TrialReport first = estimate(tree, options);
    if (first.pass) return first;
    EstimateOptions again = options;
    again.seed = retry_seed(options.seed);
    TrialReport second = estimate(tree, again);
    second.label += " (retry)";
    return second;
}

// --- input independence -----------------------------------------------------------

IndependenceTest input_independence(const CodeTree& tree, int target, long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trial count must be at least 1");
    const FlatTree flat = flatten(tree);
    if (target < 0 || target >= flat.leaf_count) throw std::out_of_range("unknown target leaf");
    const int tracked = std::min(flat.leaf_count, 6);
    BatchRunner runner(flat, kernels::best_kernels());

    std::map<unsigned, std::pair<long, long>> table;  // class -> (successes, failures)
    for (long begin = 0; begin < trials; begin += static_cast<long>(kBlock)) {
        const auto count = static_cast<std::size_t>(std::min<long>(kBlock, trials - begin));
        runner.run(seed, target, begin, count);
        for (std::size_t lane = 0; lane < count; ++lane) {
            unsigned cls = 0;
            for (int i = 0; i < tracked; ++i) cls |= static_cast<unsigned>(runner.inputs(i)[lane]) << i;
            cls |= static_cast<unsigned>(runner.truths()[lane]) << tracked;
            auto& cell = table[cls];
            (runner.guesses()[lane] == runner.truths()[lane] ? cell.first : cell.second) += 1;
        }
    }

    IndependenceTest out;
    out.classes = static_cast<int>(table.size());
    long total_s = 0;
    long total_f = 0;
    for (const auto& [cls, cell] : table) {
        total_s += cell.first;
        total_f += cell.second;
    }
    const double total = static_cast<double>(total_s + total_f);
    if (out.classes < 2 || total_s == 0 || total_f == 0) return out;  // nothing to test
    for (const auto& [cls, cell] : table) {
        const double row = static_cast<double>(cell.first + cell.second);
        const double es = row * static_cast<double>(total_s) / total;
        const double ef = row * static_cast<double>(total_f) / total;
        out.chi_square += (cell.first - es) * (cell.first - es) / es + (cell.second - ef) * (cell.second - ef) / ef;
    }
    out.dof = out.classes - 1;
    const boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.chi_square));
    return out;
}

// --- QRAC reduction ----------------------------------------------------------------

BlochVector qrac_codeword(PrimitiveKind kind, std::span<const Bit> inputs) {
    const BlochVector plus = alice_basis(kind, inputs);
    return (inputs[0] & 1) ? -plus : plus;
}

QracReductionReport qrac_reduction_experiment(int n, long trials, std::uint64_t seed) {
    if (n != 2 && n != 3) throw std::invalid_argument("QRAC reduction is defined for n = 2 or 3 only");
    if (trials < 1) throw std::invalid_argument("trial count must be at least 1");
    const PrimitiveKind kind = n == 2 ? PrimitiveKind::E2 : PrimitiveKind::E3;
    const double p_exact = half_one_plus(delta(n == 2 ? 1 : 0, n == 3 ? 1 : 0)).to_double();

    QracReductionReport out;
    for (TrialReport* r : {&out.direct, &out.steering}) {
        r->seed = seed;
        r->backend = "scalar";
        r->z_limit = 4.0;
    }
    out.direct.label = std::string("qrac-direct n=") + std::to_string(n);
    out.steering.label = std::string("qrac-steering n=") + std::to_string(n);

    for (int target = 0; target < n; ++target) {
        // Independent streams for the two arms.
        SplitMix64 direct_rng(derive_key(derive_key(seed, 0xD1), static_cast<std::uint64_t>(target)));
        SplitMix64 steer_rng(derive_key(derive_key(seed, 0x57), static_cast<std::uint64_t>(target)));
        BitStats d{target, trials, 0, p_exact};
        BitStats s{target, trials, 0, p_exact};
        const BlochVector bob = bob_basis(kind, target);
        std::vector<Bit> bits(n);
        for (long t = 0; t < trials; ++t) {
            for (SplitMix64* rng : {&direct_rng, &steer_rng}) {
                const std::uint64_t word = (*rng)();
                for (int i = 0; i < n; ++i) bits[i] = static_cast<Bit>((word >> i) & 1);
                const BlochVector codeword = qrac_codeword(kind, bits);
                Bit guess;
                if (rng == &direct_rng) {
                    // "+" along B_i means a_i = 0
                    guess = static_cast<Bit>(measure_state(codeword, bob, *rng) ^ 1);
                    d.successes += guess == bits[target];
                } else {
                    guess = static_cast<Bit>(steer_and_measure(codeword, bob, *rng).corrected() ^ 1);
                    s.successes += guess == bits[target];
                }
            }
        }
        out.direct.bits.push_back(d);
        out.steering.bits.push_back(s);
    }
    finalize(out.direct);
    finalize(out.steering);
    return out;
}

// --- serialization -----------------------------------------------------------------

void write_report_table(std::ostream& out, const TrialReport& report) {
    std::ostringstream s;
    s << "# " << report.label << "  seed=" << report.seed << "  backend=" << report.backend << "  z_limit="
      << report.z_limit << '\n';
    s << std::left << std::setw(6) << "bit" << std::setw(10) << "trials" << std::setw(11) << "successes"
      << std::setw(12) << "p_hat" << std::setw(12) << "p_exact" << std::setw(12) << "sigma" << "z\n";
    s << std::fixed;
    for (const BitStats& b : report.bits) {
        s << std::setw(6) << b.target << std::setw(10) << b.trials << std::setw(11) << b.successes
          << std::setprecision(6) << std::setw(12) << b.p_hat << std::setw(12) << b.p_exact << std::setw(12)
          << b.sigma << std::setprecision(3) << b.z << '\n';
    }
    s << (report.pass ? "PASS" : "FAIL") << '\n';
    out << s.str();
}

std::string report_json(const TrialReport& report) {
    nlohmann::json j;
    j["label"] = report.label;
    j["seed"] = report.seed;
    j["backend"] = report.backend;
    j["z_limit"] = report.z_limit;
    j["pass"] = report.pass;
    j["bits"] = nlohmann::json::array();
    for (const BitStats& b : report.bits) {
        j["bits"].push_back({{"bit", b.target},
                             {"trials", b.trials},
                             {"successes", b.successes},
                             {"p_hat", b.p_hat},
                             {"p_exact", b.p_exact},
                             {"sigma", b.sigma},
                             {"z", b.z}});
    }
    return j.dump(2);
}

}  // namespace earac
