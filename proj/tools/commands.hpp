#pragma once

// Subcommands of the `earac` tool. Each cmd_* function computes a result;
// the render functions turn it into human, CSV or JSON text. run() is the
// whole program minus main(), so tests can drive it with captured streams.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "earac/codetree.hpp"
#include "earac/exactnum.hpp"
#include "earac/montecarlo.hpp"
#include "earac/optimizer.hpp"
#include "earac/session.hpp"

namespace earac::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kInternal = 4 };

enum class OutputFormat { Human, Csv, Json };

// Bad flag values that the parser itself cannot catch (exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable or malformed input files (exit code 3).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kSeedEnv = "EARAC_SEED";

// --- table ---------------------------------------------------------------

enum class Provenance { PaperMatch, ErratumFlagged, NotInTable };
const char* provenance_name(Provenance p);

struct TableRow {
    int n = 0;
    std::optional<double> qrac_p;    // published QRAC value, when there is one
    ExactValue earac_exact;          // grouping-rule tree, SR average
    std::string earac_decimal;       // 5 decimals
    std::optional<double> delta_advantage;  // earac - qrac
    Provenance provenance = Provenance::NotInTable;
    std::optional<ExactValue> printed;  // value printed in the reference table when it differs
    std::optional<ExactValue> optimal;  // best SR average from the optimizer, for flagged rows
};

// QRAC success probabilities with SR for n = 2..12 and 15. The n = 2, 3
// entries are the exact (1 + 1/sqrt n)/2; the rest are the published
// five-decimal constants.
std::optional<double> qrac_constant(int n);

// Rows n = 2..max_n. Throws UsageError for max_n < 2.
std::vector<TableRow> cmd_table(int max_n);
void render_table(std::ostream& out, const std::vector<TableRow>& rows, OutputFormat format);

// --- build / eval ---------------------------------------------------------

enum class Strategy { Paper, OptAvg, OptMin };
Strategy parse_strategy(const std::string& name);  // throws UsageError

CodeTree cmd_build(int n, Strategy strategy);

struct BitReport {
    int bit = 0;
    PathProfile profile;
    ExactValue p;
};

struct EvalReport {
    std::string expression;
    int leaves = 0;
    int ebits = 0;
    std::vector<BitReport> bits;
    ExactValue minimum;
    std::optional<ExactValue> sr_average;  // with --sr
    bool mixed_raw_inputs = false;
};

EvalReport cmd_eval(const CodeTree& tree, bool with_sr);
void render_eval(std::ostream& out, const EvalReport& report, OutputFormat format);

// --- bounds -----------------------------------------------------------------

struct BoundsReport {
    int n = 0;
    BoundValue upper;
    long smooth = 0;  // 3-smooth m >= n behind the lower bound
    ExactValue lower;
    ExactValue best_min;  // achieved worst-bit probability
    ExactValue best_avg;  // achieved SR-average probability
    IcCheck ic_min;
    IcCheck ic_avg;
};

BoundsReport cmd_bounds(int n);
void render_bounds(std::ostream& out, const BoundsReport& report, OutputFormat format);

// --- simulate / demo ---------------------------------------------------------

void render_simulation(std::ostream& out, const TrialReport& report, OutputFormat format);

struct DemoReport {
    std::string expression;
    std::string transport;
    std::vector<Bit> bits;
    int target = 0;
    SessionResult session;
};

void render_demo(std::ostream& out, const DemoReport& report, OutputFormat format);

// Parses "0110..." into bits; throws UsageError.
std::vector<Bit> parse_bit_string(const std::string& text);

// Whole command line. Never throws; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace earac::cli
