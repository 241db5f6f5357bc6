#pragma once

// Statistical verification: run the full protocol many times and compare
// per-bit success frequencies with the exact values.
//
// Trial t for target bit i draws everything from streams keyed by
// (seed, i, t): one stream for the input bits, one for the singlet pairs
// (see SingletSource). The batched runner and the one-trial-at-a-time
// reference path consume exactly the same draws, so they agree trial for
// trial, and a report does not depend on evaluation order.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "earac/codetree.hpp"
#include "earac/kernels.hpp"

namespace earac {

struct BitStats {
    int target = 0;
    long trials = 0;
    long successes = 0;
    double p_exact = 0.0;
    double p_hat = 0.0;
    double sigma = 0.0;  // sqrt(p (1 - p) / T) at the exact p
    double z = 0.0;      // (p_hat - p_exact) / sigma; 0 when both are certain
};

struct TrialReport {
    std::string label;
    std::uint64_t seed = 0;
    std::string backend;
    double z_limit = 4.0;
    std::vector<BitStats> bits;
    bool pass = false;
};

struct EstimateOptions {
    long trials = 100000;
    std::uint64_t seed = 1;
    std::optional<int> target;               // all bits when empty
    std::optional<std::vector<Bit>> inputs;  // fixed inputs (debugging); uniform otherwise
    std::optional<kernels::Backend> backend;  // best available when empty
    double z_limit = 4.0;
};

struct TrialKeys {
    std::uint64_t inputs = 0;
    std::uint64_t pairs = 0;
};

TrialKeys trial_keys(std::uint64_t seed, int target, long trial);
std::vector<Bit> trial_inputs(std::uint64_t input_key, int n);

// Reference path: one full encode + decode through Protocol/SingletSource.
// Returns the guess for bits[target].
Bit reference_trial(const Protocol& protocol, std::uint64_t seed, int target, long trial,
                    const std::optional<std::vector<Bit>>& fixed_inputs = std::nullopt);

// Evaluates a block of consecutive trials for one target with the batch
// kernels. After run(), guesses()[i] and truths()[i] hold trial begin + i.
class BatchRunner {
public:
    BatchRunner(const FlatTree& flat, const kernels::KernelTable& kernels);

    void run(std::uint64_t seed, int target, long begin, std::size_t count,
             const std::optional<std::vector<Bit>>& fixed_inputs = std::nullopt);

    std::span<const Bit> guesses() const { return guess_; }
    std::span<const Bit> truths() const { return inputs_[target_]; }
    std::span<const Bit> inputs(int leaf) const { return inputs_[leaf]; }

private:
    const FlatTree& flat_;
    const kernels::KernelTable& k_;
    int target_ = 0;
    std::vector<std::vector<Bit>> inputs_;   // [leaf][lane]
    std::vector<std::vector<Bit>> outputs_;  // [node][lane]
    std::vector<Bit> first_, second_, guess_;
    std::vector<double> ax_, ay_, az_, u_, cos_;
};

// Batched estimate (deterministic in seed).
TrialReport estimate(const CodeTree& tree, const EstimateOptions& options);

// Same statistics through reference_trial; slow, for cross-checking.
TrialReport estimate_reference(const CodeTree& tree, const EstimateOptions& options);

// estimate(); if any |z| reaches the limit, one more run with a seed derived
// from the original. The second report is returned (label notes the retry).
TrialReport estimate_with_retry(const CodeTree& tree, const EstimateOptions& options);

std::uint64_t retry_seed(std::uint64_t seed);

// Fills sigma, z and the pass flags from trials/successes/p_exact.
void finalize(TrialReport& report);

struct IndependenceTest {
    int classes = 0;
    double chi_square = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Chi-square test of success versus input class for one target. Inputs are
// classed by the bits of the first min(n, 6) leaves together with the target
// bit.
IndependenceTest input_independence(const CodeTree& tree, int target, long trials, std::uint64_t seed);

struct QracReductionReport {
    TrialReport direct;    // Bob measures the qubit codeword itself
    TrialReport steering;  // singlet + one classical bit
};

// n must be 2 or 3 (std::invalid_argument otherwise). Codewords are the
// primitive codes' Alice directions signed by (-1)^a0.
QracReductionReport qrac_reduction_experiment(int n, long trials, std::uint64_t seed);

BlochVector qrac_codeword(PrimitiveKind kind, std::span<const Bit> inputs);

void write_report_table(std::ostream& out, const TrialReport& report);
std::string report_json(const TrialReport& report);

}  // namespace earac
