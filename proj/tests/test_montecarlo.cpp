#include <cmath>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "earac/montecarlo.hpp"
#include "stats.hpp"

using namespace earac;

namespace {

CodeTree single(PrimitiveKind kind) {
    std::vector<CodeTree> kids;
    for (int i = 0; i < arity(kind); ++i) kids.push_back(CodeTree::leaf(i));
    return CodeTree::node(kind, std::move(kids));
}

}  // namespace

TEST(Estimate, SingleE2) {
    EstimateOptions o;
    o.seed = 2024;
    const TrialReport r = estimate(single(PrimitiveKind::E2), o);
    ASSERT_EQ(r.bits.size(), 2u);
    for (const BitStats& b : r.bits) {
        EXPECT_NEAR(b.sigma, 0.0011180, 1e-7);
        EXPECT_LT(std::fabs(b.p_hat - 0.8535534), 4 * 0.0011180);
        EXPECT_LE(b.successes, b.trials);
    }
    EXPECT_TRUE(r.pass);
}

TEST(Estimate, FourBitPaperTree) {
    const TrialReport r = estimate(build_paper_tree(4), EstimateOptions{});
    for (const BitStats& b : r.bits) {
        EXPECT_DOUBLE_EQ(b.p_exact, 0.75);
        EXPECT_NEAR(b.sigma, 0.0013693, 1e-7);
        EXPECT_LT(std::fabs(b.p_hat - 0.75), 4 * 0.0013693);
    }
}

TEST(Estimate, LeafIsPerfect) {
    EstimateOptions o;
    o.trials = 5000;
    const TrialReport r = estimate(CodeTree::leaf(0), o);
    ASSERT_EQ(r.bits.size(), 1u);
    EXPECT_EQ(r.bits[0].successes, 5000);
    EXPECT_EQ(r.bits[0].p_hat, 1.0);
    EXPECT_EQ(r.bits[0].sigma, 0.0);
    EXPECT_EQ(r.bits[0].z, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(Estimate, Reproducible) {
    EstimateOptions o;
    o.trials = 30000;
    o.seed = 77;
    const CodeTree t = build_paper_tree(7);
    const TrialReport a = estimate(t, o), b = estimate(t, o);
    ASSERT_EQ(a.bits.size(), b.bits.size());
    for (std::size_t i = 0; i < a.bits.size(); ++i) EXPECT_EQ(a.bits[i].successes, b.bits[i].successes);
    o.seed = 78;
    const TrialReport c = estimate(t, o);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.bits.size(); ++i) any_diff |= a.bits[i].successes != c.bits[i].successes;
    EXPECT_TRUE(any_diff);
}

TEST(Estimate, BatchEqualsReferencePath) {
    EstimateOptions o;
    o.trials = 3000;
    o.seed = 3;
    for (int n : {2, 5, 9}) {
        const CodeTree t = build_paper_tree(n);
        const TrialReport a = estimate(t, o), b = estimate_reference(t, o);
        for (std::size_t i = 0; i < a.bits.size(); ++i) EXPECT_EQ(a.bits[i].successes, b.bits[i].successes) << n;
    }
}

TEST(Estimate, OrderIndependentBlocks) {
    // A single target equals the same target inside an all-bits run.
    EstimateOptions o;
    o.trials = 10000;
    o.seed = 9;
    const CodeTree t = build_paper_tree(6);
    const TrialReport all = estimate(t, o);
    o.target = 3;
    const TrialReport one = estimate(t, o);
    ASSERT_EQ(one.bits.size(), 1u);
    EXPECT_EQ(one.bits[0].successes, all.bits[3].successes);
}

TEST(Estimate, FixedInputs) {
    EstimateOptions o;
    o.trials = 40000;
    o.inputs = std::vector<Bit>{1, 0, 1, 1, 0};
    const CodeTree t = build_paper_tree(5);
    const TrialReport r = estimate(t, o);
    for (const BitStats& b : r.bits) EXPECT_TRUE(stats::within_4_sigma(b.successes, b.trials, b.p_exact));
    o.inputs = std::vector<Bit>{1, 0};
    EXPECT_THROW(estimate(t, o), std::invalid_argument);
}

TEST(Estimate, BadOptions) {
    EstimateOptions o;
    o.trials = 0;
    EXPECT_THROW(estimate(build_paper_tree(3), o), std::invalid_argument);
    o.trials = 10;
    o.target = 3;
    EXPECT_THROW(estimate(build_paper_tree(3), o), std::out_of_range);
}

TEST(Estimate, PaperTreesWithinFourSigma) {
    for (int n = 2; n <= 12; ++n) {
        const TrialReport r = estimate_with_retry(build_paper_tree(n), EstimateOptions{});
        EXPECT_TRUE(r.pass) << n;
        for (const BitStats& b : r.bits) EXPECT_LT(std::fabs(b.z), 4.0) << n << "/" << b.target;
    }
}

TEST(Retry, DerivedSeedDiffers) {
    EXPECT_NE(retry_seed(1), 1u);
    EXPECT_EQ(retry_seed(1), retry_seed(1));
}

TEST(Finalize, FailsOnLargeZ) {
    TrialReport r;
    r.z_limit = 4.0;
    r.bits.push_back({0, 1000, 500, 0.85});
    finalize(r);
    EXPECT_FALSE(r.pass);
    EXPECT_LT(r.bits[0].z, -4.0);
    TrialReport certain;
    certain.bits.push_back({0, 10, 9, 1.0});
    finalize(certain);
    EXPECT_FALSE(certain.pass);
    EXPECT_TRUE(std::isinf(certain.bits[0].z));
}

TEST(Independence, SuccessDoesNotDependOnInputs) {
    for (int n : {4, 5, 9}) {
        const CodeTree t = build_paper_tree(n);
        for (int target : {0, n - 1}) {
            const IndependenceTest r = input_independence(t, target, 100000, 31 + n);
            EXPECT_GE(r.classes, 2);
            EXPECT_EQ(r.dof, r.classes - 1);
            EXPECT_GT(r.p_value, 0.001) << n << "/" << target << " chi2 " << r.chi_square;
        }
    }
}

TEST(Independence, DegenerateCases) {
    // a leaf never fails, so there is nothing to test
    const IndependenceTest r = input_independence(CodeTree::leaf(0), 0, 1000, 1);
    EXPECT_EQ(r.p_value, 1.0);
    EXPECT_THROW(input_independence(build_paper_tree(3), 5, 10, 1), std::out_of_range);
}

TEST(Qrac, ReductionMatchesBothWays) {
    for (int n : {2, 3}) {
        const QracReductionReport r = qrac_reduction_experiment(n, 100000, 5);
        const double p = 0.5 * (1 + 1 / std::sqrt(double(n)));
        ASSERT_EQ(r.direct.bits.size(), static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            EXPECT_TRUE(stats::within_4_sigma(r.direct.bits[i].successes, 100000, p)) << n << " direct " << i;
            EXPECT_TRUE(stats::within_4_sigma(r.steering.bits[i].successes, 100000, p)) << n << " steer " << i;
        }
        EXPECT_TRUE(r.direct.pass);
        EXPECT_TRUE(r.steering.pass);
    }
    EXPECT_THROW(qrac_reduction_experiment(4, 10, 1), std::invalid_argument);
    EXPECT_THROW(qrac_reduction_experiment(2, 0, 1), std::invalid_argument);
}

TEST(Qrac, CodewordsAreSignedAliceDirections) {
    const BlochVector c = qrac_codeword(PrimitiveKind::E2, std::vector<Bit>{1, 0});
    EXPECT_NEAR(c.x(), -1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(c.y(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Serialization, TableAndJsonCarryTheSameFields) {
    EstimateOptions o;
    o.trials = 2000;
    o.seed = 4;
    const TrialReport r = estimate(build_paper_tree(3), o);
    std::ostringstream table;
    write_report_table(table, r);
    EXPECT_NE(table.str().find("p_exact"), std::string::npos);
    EXPECT_NE(table.str().find(r.pass ? "PASS" : "FAIL"), std::string::npos);
    const auto j = nlohmann::json::parse(report_json(r));
    EXPECT_EQ(j["seed"], 4);
    ASSERT_EQ(j["bits"].size(), 3u);
    EXPECT_EQ(j["bits"][1]["successes"], r.bits[1].successes);
    EXPECT_EQ(j["bits"][1]["trials"], 2000);
    EXPECT_EQ(j["pass"], r.pass);
}
