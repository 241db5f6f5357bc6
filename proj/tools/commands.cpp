#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "earac/rng.hpp"

namespace earac::cli {

namespace {

using nlohmann::json;

std::string fixed5(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    // "-0.00000" is just zero
    return std::string(buf) == "-0.00000" ? "0.00000" : buf;
}

double round5(double v) { return std::round(v * 1e5) / 1e5; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

json exact_json(const ExactValue& v) { return {{"exact", v.str()}, {"decimal", v.to_decimal(17)}}; }

// Values the reference table prints for rows the grouping rule does not
// reproduce.
std::optional<ExactValue> printed_value(int n) {
    if (n == 8) return ExactValue::parse("52/80 + 1/80*sqrt6");
    if (n == 11) return ExactValue::parse("60/120 + 3/120*sqrt2 + 8/120*sqrt3");
    return std::nullopt;
}

std::uint64_t default_seed() {
    const char* env = std::getenv(kSeedEnv);
    if (!env) return 1;
    try {
        std::size_t used = 0;
        const std::string text(env);
        const unsigned long long v = std::stoull(text, &used, 0);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
    }
}

CodeTree load_tree_file(const std::string& path) {
    try {
        return load_tree(path);
    } catch (const FormatError& e) {
        throw DataError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
    }
}

OutputFormat parse_format(const std::string& name) {
    if (name == "human") return OutputFormat::Human;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw UsageError("unknown format '" + name + "'");
}

kernels::Backend parse_backend(const std::string& name) {
    for (kernels::Backend b : {kernels::Backend::Scalar, kernels::Backend::Avx2, kernels::Backend::Neon}) {
        if (kernels::backend_name(b) == name) return b;
    }
    throw UsageError("unknown backend '" + name + "'");
}

std::string bit_string(std::span<const Bit> bits) {
    std::string s;
    for (Bit b : bits) s += static_cast<char>('0' + b);
    return s;
}

json transcript_json(const WireTranscript& t) {
    json out = json::array();
    for (const WireRecord& r : t) {
        const char* dir = r.direction == Direction::Sent ? "sent" : r.direction == Direction::Received ? "received" : "local";
        out.push_back({{"direction", dir}, {"peer", r.peer}, {"line", r.line}});
    }
    return out;
}

}  // namespace

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::PaperMatch: return "paper-match";
        case Provenance::ErratumFlagged: return "erratum-flagged";
        case Provenance::NotInTable: return "not-in-table";
    }
    return "?";
}

std::optional<double> qrac_constant(int n) {
    // Published QRAC-with-SR success probabilities (five decimals) for the
    // rows where no closed form is known.
    static const std::map<int, double> published = {
        {4, 0.74148},  {5, 0.71358},  {6, 0.69405},  {7, 0.67864},  {8, 0.66663},
        {9, 0.65689},  {10, 0.64820}, {11, 0.64105}, {12, 0.63487}, {15, 0.62036},
    };
    if (n == 2 || n == 3) return 0.5 * (1.0 + 1.0 / std::sqrt(static_cast<double>(n)));
    const auto it = published.find(n);
    if (it == published.end()) return std::nullopt;
    return it->second;
}

std::vector<TableRow> cmd_table(int max_n) {
    if (max_n < 2) throw UsageError("--max-n must be at least 2");
    std::vector<TableRow> rows;
    TreeOptimizer opt(Objective::Average);
    for (int n = 2; n <= max_n; ++n) {
        TableRow row;
        row.n = n;
        row.qrac_p = qrac_constant(n);
        row.earac_exact = sr_average(build_paper_tree(n));
        const double earac = row.earac_exact.to_double();
        row.earac_decimal = fixed5(earac);
        if (row.qrac_p) {
            row.delta_advantage = round5(earac - *row.qrac_p);
            row.printed = printed_value(n);
            row.provenance = row.printed ? Provenance::ErratumFlagged : Provenance::PaperMatch;
            if (row.printed) row.optimal = half_one_plus(opt.best(n).value);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void render_table(std::ostream& out, const std::vector<TableRow>& rows, OutputFormat format) {
    if (format == OutputFormat::Json) {
        json arr = json::array();
        for (const TableRow& r : rows) {
            json j;
            j["n"] = r.n;
            j["qrac_p"] = r.qrac_p ? json(*r.qrac_p) : json(nullptr);
            j["earac_exact"] = r.earac_exact.str();
            j["earac_decimal"] = r.earac_decimal;
            j["delta_advantage"] = r.delta_advantage ? json(fixed5(*r.delta_advantage)) : json(nullptr);
            j["provenance"] = provenance_name(r.provenance);
            if (r.printed) j["printed"] = exact_json(*r.printed);
            if (r.optimal) j["optimal"] = exact_json(*r.optimal);
            arr.push_back(j);
        }
        out << arr.dump(2) << '\n';
        return;
    }
    if (format == OutputFormat::Csv) {
        out << "n,qrac_p,earac_exact,earac_decimal,delta,provenance,printed_exact,printed_decimal\n";
        for (const TableRow& r : rows) {
            out << r.n << ',' << (r.qrac_p ? fixed5(*r.qrac_p) : "") << ',' << csv_field(r.earac_exact.str()) << ','
                << r.earac_decimal << ',' << (r.delta_advantage ? fixed5(*r.delta_advantage) : "") << ','
                << provenance_name(r.provenance) << ',' << (r.printed ? csv_field(r.printed->str()) : "") << ','
                << (r.printed ? fixed5(r.printed->to_double()) : "") << '\n';
        }
        return;
    }
    std::ostringstream s;
    s << std::left;
    s << std::setw(4) << "n" << std::setw(9) << "p_Q" << std::setw(38) << "p_E (exact)" << std::setw(9) << "p_E"
      << std::setw(9) << "delta" << "flag\n";
    for (const TableRow& r : rows) {
        s << std::setw(4) << r.n << std::setw(9) << (r.qrac_p ? fixed5(*r.qrac_p) : "-") << std::setw(38)
          << r.earac_exact.str() << std::setw(9) << r.earac_decimal << std::setw(9)
          << (r.delta_advantage ? fixed5(*r.delta_advantage) : "-") << provenance_name(r.provenance) << '\n';
        if (r.printed) {
            s << "      printed: " << r.printed->str() << " = " << fixed5(r.printed->to_double())
              << " (delta " << fixed5(round5(r.printed->to_double() - *r.qrac_p)) << ")\n";
        }
        if (r.optimal) {
            s << "      optimal: " << r.optimal->str() << " = " << fixed5(r.optimal->to_double()) << '\n';
        }
    }
    out << s.str();
}

Strategy parse_strategy(const std::string& name) {
    if (name == "paper") return Strategy::Paper;
    if (name == "opt-avg") return Strategy::OptAvg;
    if (name == "opt-min") return Strategy::OptMin;
    throw UsageError("unknown strategy '" + name + "'");
}

CodeTree cmd_build(int n, Strategy strategy) {
    if (n < 1) throw UsageError("--n must be at least 1");
    switch (strategy) {
        case Strategy::Paper: return build_paper_tree(n);
        case Strategy::OptAvg: return best_avg_tree(n).tree;
        case Strategy::OptMin: return best_min_tree(n).tree;
    }
    throw std::logic_error("unhandled strategy");
}

EvalReport cmd_eval(const CodeTree& tree, bool with_sr) {
    EvalReport r;
    r.expression = to_expression(tree);
    r.leaves = tree.leaf_count();
    r.ebits = ebit_count(tree);
    const auto profiles = all_path_profiles(tree);
    for (int i = 0; i < r.leaves; ++i) r.bits.push_back({i, profiles[i], exact_bit_probability(profiles[i])});
    r.minimum = min_probability(tree);
    if (with_sr) r.sr_average = sr_average(tree);
    r.mixed_raw_inputs = has_mixed_raw_inputs(tree);
    return r;
}

void render_eval(std::ostream& out, const EvalReport& r, OutputFormat format) {
    if (format == OutputFormat::Json) {
        json j;
        j["tree"] = r.expression;
        j["leaves"] = r.leaves;
        j["ebits"] = r.ebits;
        j["mixed_raw_inputs"] = r.mixed_raw_inputs;
        j["bits"] = json::array();
        for (const BitReport& b : r.bits) {
            json e = exact_json(b.p);
            e["bit"] = b.bit;
            e["k"] = b.profile.k;
            e["j"] = b.profile.j;
            j["bits"].push_back(e);
        }
        j["min"] = exact_json(r.minimum);
        if (r.sr_average) j["sr_average"] = exact_json(*r.sr_average);
        out << j.dump(2) << '\n';
        return;
    }
    if (format == OutputFormat::Csv) {
        out << "bit,k,j,exact,decimal\n";
        for (const BitReport& b : r.bits) {
            out << b.bit << ',' << b.profile.k << ',' << b.profile.j << ',' << csv_field(b.p.str()) << ','
                << b.p.to_decimal(10) << '\n';
        }
        out << "min,,," << csv_field(r.minimum.str()) << ',' << r.minimum.to_decimal(10) << '\n';
        if (r.sr_average) out << "sr_average,,," << csv_field(r.sr_average->str()) << ',' << r.sr_average->to_decimal(10) << '\n';
        return;
    }
    std::ostringstream s;
    s << "tree " << r.expression << "  (" << r.leaves << " bits, " << r.ebits << " ebits)\n";
    if (r.mixed_raw_inputs) s << "note: a primitive mixes raw input bits with subtree outputs\n";
    s << std::left << std::setw(5) << "bit" << std::setw(4) << "k" << std::setw(4) << "j" << std::setw(36) << "p (exact)"
      << "p\n";
    for (const BitReport& b : r.bits) {
        s << std::setw(5) << b.bit << std::setw(4) << b.profile.k << std::setw(4) << b.profile.j << std::setw(36)
          << b.p.str() << b.p.to_decimal(10) << '\n';
    }
    s << "min         " << r.minimum.str() << " = " << r.minimum.to_decimal(10) << '\n';
    if (r.sr_average) s << "SR average  " << r.sr_average->str() << " = " << r.sr_average->to_decimal(10) << '\n';
    out << s.str();
}

BoundsReport cmd_bounds(int n) {
    if (n < 1) throw UsageError("--n must be at least 1");
    BoundsReport r;
    r.n = n;
    r.upper = upper_bound(n);
    r.smooth = smallest_23_smooth_geq(n);
    r.lower = lower_bound(n);
    r.best_min = half_one_plus(best_min_tree(n).value);
    r.best_avg = half_one_plus(best_avg_tree(n).value);
    r.ic_min = ic_check(n, r.best_min.to_double());
    r.ic_avg = ic_check(n, r.best_avg.to_double());
    return r;
}

void render_bounds(std::ostream& out, const BoundsReport& r, OutputFormat format) {
    const std::string upper_exact = r.upper.exact ? r.upper.exact->str() : "";
    if (format == OutputFormat::Json) {
        json j;
        j["n"] = r.n;
        j["upper"] = {{"decimal", r.upper.decimal}, {"exact", r.upper.exact ? json(upper_exact) : json(nullptr)}};
        j["lower"] = exact_json(r.lower);
        j["lower"]["m"] = r.smooth;
        j["achieved_min"] = exact_json(r.best_min);
        j["achieved_sr_average"] = exact_json(r.best_avg);
        j["ic_check"] = {{"min", {{"lhs", r.ic_min.lhs}, {"holds", r.ic_min.holds}}},
                         {"sr_average", {{"lhs", r.ic_avg.lhs}, {"holds", r.ic_avg.holds}}}};
        out << j.dump(2) << '\n';
        return;
    }
    if (format == OutputFormat::Csv) {
        out << "quantity,exact,decimal\n";
        out << "upper," << csv_field(upper_exact) << ',' << r.upper.decimal << '\n';
        out << "lower," << csv_field(r.lower.str()) << ',' << r.lower.to_decimal(20) << '\n';
        out << "achieved_min," << csv_field(r.best_min.str()) << ',' << r.best_min.to_decimal(20) << '\n';
        out << "achieved_sr_average," << csv_field(r.best_avg.str()) << ',' << r.best_avg.to_decimal(20) << '\n';
        out << "ic_lhs_min,," << r.ic_min.lhs << '\n';
        out << "ic_lhs_sr_average,," << r.ic_avg.lhs << '\n';
        return;
    }
    std::ostringstream s;
    s << "n = " << r.n << '\n';
    s << "upper  (1 + 1/sqrt(" << r.n << "))/2 = " << r.upper.decimal;
    if (r.upper.exact) s << "  [" << upper_exact << "]";
    s << '\n';
    s << "lower  (1 + 1/sqrt(" << r.smooth << "))/2 = " << r.lower.str() << " = " << r.lower.to_decimal(20) << '\n';
    s << "achieved, worst bit   " << r.best_min.str() << " = " << r.best_min.to_decimal(20) << '\n';
    s << "achieved, SR average  " << r.best_avg.str() << " = " << r.best_avg.to_decimal(20) << '\n';
    s << std::setprecision(12);
    s << "information causality  n(1 - h(p)) <= 1:  worst bit " << r.ic_min.lhs << (r.ic_min.holds ? " ok" : " VIOLATED")
      << ", SR average " << r.ic_avg.lhs << (r.ic_avg.holds ? " ok" : " VIOLATED") << '\n';
    out << s.str();
}

void render_simulation(std::ostream& out, const TrialReport& report, OutputFormat format) {
    if (format == OutputFormat::Json) {
        out << report_json(report) << '\n';
        return;
    }
    if (format == OutputFormat::Csv) {
        out << "bit,trials,successes,p_hat,p_exact,sigma,z\n";
        std::ostringstream s;
        s << std::setprecision(10);
        for (const BitStats& b : report.bits) {
            s << b.target << ',' << b.trials << ',' << b.successes << ',' << b.p_hat << ',' << b.p_exact << ','
              << b.sigma << ',' << b.z << '\n';
        }
        out << s.str();
        return;
    }
    write_report_table(out, report);
}

void render_demo(std::ostream& out, const DemoReport& r, OutputFormat format) {
    const Bit truth = r.bits[r.target];
    if (format == OutputFormat::Json) {
        json j;
        j["tree"] = r.expression;
        j["transport"] = r.transport;
        j["bits"] = bit_string(r.bits);
        j["target"] = r.target;
        j["message"] = r.session.message;
        j["guess"] = r.session.guess;
        j["correct"] = r.session.guess == truth;
        j["classical_bits"] = classical_bits_sent(r.session);
        j["transcripts"] = {{"alice", transcript_json(r.session.alice)},
                            {"bob", transcript_json(r.session.bob)},
                            {"broker", transcript_json(r.session.broker)}};
        out << j.dump(2) << '\n';
        return;
    }
    if (format == OutputFormat::Csv) {
        out << "endpoint,direction,peer,line\n";
        for (const auto& [name, t] : {std::pair<const char*, const WireTranscript*>{"alice", &r.session.alice},
                                      {"bob", &r.session.bob},
                                      {"broker", &r.session.broker}}) {
            for (const WireRecord& rec : *t) {
                const char* dir = rec.direction == Direction::Sent ? "sent"
                                  : rec.direction == Direction::Received ? "received"
                                                                          : "local";
                out << name << ',' << dir << ',' << rec.peer << ',' << csv_field(rec.line) << '\n';
            }
        }
        return;
    }
    out << "tree " << r.expression << " over " << r.transport << '\n';
    out << "bits " << bit_string(r.bits) << ", Bob asks for bit " << r.target << '\n';
    out << "classical bits sent: " << classical_bits_sent(r.session) << '\n';
    out << "message " << int(r.session.message) << ", guess " << int(r.session.guess)
        << (r.session.guess == truth ? " (correct)" : " (wrong)") << '\n';
    out << "\n[alice]\n";
    write_transcript(out, r.session.alice);
    out << "\n[bob]\n";
    write_transcript(out, r.session.bob);
    out << "\n[broker]\n";
    write_transcript(out, r.session.broker);
}

std::vector<Bit> parse_bit_string(const std::string& text) {
    if (text.empty()) throw UsageError("empty bit string");
    std::vector<Bit> bits;
    for (char c : text) {
        if (c != '0' && c != '1') throw UsageError("bit strings may only contain 0 and 1: '" + text + "'");
        bits.push_back(static_cast<Bit>(c - '0'));
    }
    return bits;
}

// --- command line -------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement-assisted random access codes: exact evaluation, optimization and simulation", "earac"};
    app.require_subcommand(1);
    std::string format_name = "human";
    app.add_option("--format", format_name, "Output format")
        ->check(CLI::IsMember({"human", "csv", "json"}))
        ->capture_default_str();
    app.fallthrough();

    int max_n = 15;
    auto* table = app.add_subcommand("table", "Success probabilities of grouping-rule trees next to QRAC values");
    table->add_option("--max-n", max_n, "Last row")->capture_default_str();

    int n = 0;
    std::string strategy_name = "paper";
    std::string out_path;
    auto* build = app.add_subcommand("build", "Construct a concatenation tree");
    build->add_option("--n", n, "Number of input bits")->required();
    build->add_option("--strategy", strategy_name, "paper | opt-avg | opt-min")
        ->check(CLI::IsMember({"paper", "opt-avg", "opt-min"}))
        ->capture_default_str();
    build->add_option("--out", out_path, "Tree file to write (stdout when omitted)");

    std::string tree_path;
    bool with_sr = false;
    auto* eval = app.add_subcommand("eval", "Exact per-bit success probabilities of a tree file");
    eval->add_option("--tree", tree_path, "Tree file")->required();
    eval->add_flag("--sr", with_sr, "Also report the SR (leaf-averaged) probability");

    long trials = 100000;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> target_flag;
    std::string backend_name;
    double z_limit = 4.0;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of a tree file against its exact values");
    simulate->add_option("--tree", tree_path, "Tree file")->required();
    simulate->add_option("--trials", trials, "Trials per bit")->capture_default_str();
    simulate->add_option("--seed", seed_flag, std::string("Seed (default: $") + kSeedEnv + " or 1)");
    simulate->add_option("--target", target_flag, "Only this bit");
    simulate->add_option("--backend", backend_name, "scalar | avx2 | neon (default: best available)");
    simulate->add_option("--z-limit", z_limit, "Largest accepted |z|")->capture_default_str();

    auto* bounds = app.add_subcommand("bounds", "Upper and lower bounds for n bits");
    bounds->add_option("--n", n, "Number of input bits")->required();

    std::string bits_text;
    int target = 0;
    std::string transport_name = "inproc";
    std::uint64_t sr_seed = 0;
    std::string transcript_dir;
    auto* demo = app.add_subcommand("demo-session", "Run Alice, Bob and the broker as message-passing endpoints");
    demo->add_option("--n", n, "Number of input bits (grouping-rule tree)");
    demo->add_option("--tree", tree_path, "Tree file instead of --n");
    demo->add_option("--bits", bits_text, "Input bits, e.g. 01101 (random from the seed when omitted)");
    demo->add_option("--target", target, "Bit Bob wants")->capture_default_str();
    demo->add_option("--transport", transport_name, "inproc | tcp")
        ->check(CLI::IsMember({"inproc", "tcp"}))
        ->capture_default_str();
    demo->add_option("--seed", seed_flag, std::string("Broker seed (default: $") + kSeedEnv + " or 1)");
    demo->add_option("--sr-seed", sr_seed, "Shared-randomness seed, 0 for none")->capture_default_str();
    demo->add_option("--transcript-dir", transcript_dir, "Also write alice.txt, bob.txt, broker.txt here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? kOk : kUsage;
    }

    try {
        const OutputFormat format = parse_format(format_name);
        if (table->parsed()) {
            render_table(out, cmd_table(max_n), format);
        } else if (build->parsed()) {
            const CodeTree tree = cmd_build(n, parse_strategy(strategy_name));
            if (out_path.empty()) {
                write_tree(out, tree);
            } else {
                try {
                    save_tree(out_path, tree);
                } catch (const FormatError& e) {
                    throw DataError(e.what());
                }
                out << "wrote " << out_path << ": " << to_expression(tree) << '\n';
            }
            if (has_mixed_raw_inputs(tree)) err << "note: a primitive mixes raw input bits with subtree outputs\n";
        } else if (eval->parsed()) {
            render_eval(out, cmd_eval(load_tree_file(tree_path), with_sr), format);
        } else if (simulate->parsed()) {
            if (trials < 1) throw UsageError("--trials must be at least 1");
            const CodeTree tree = load_tree_file(tree_path);
            EstimateOptions options;
            options.trials = trials;
            options.seed = seed_flag ? *seed_flag : default_seed();
            options.target = target_flag;
            options.z_limit = z_limit;
            if (!backend_name.empty()) options.backend = parse_backend(backend_name);
            if (target_flag && (*target_flag < 0 || *target_flag >= tree.leaf_count())) {
                throw UsageError("--target must name one of the tree's " + std::to_string(tree.leaf_count()) + " bits");
            }
            render_simulation(out, estimate_with_retry(tree, options), format);
        } else if (bounds->parsed()) {
            render_bounds(out, cmd_bounds(n), format);
        } else if (demo->parsed()) {
            if (tree_path.empty() == (n == 0)) throw UsageError("give exactly one of --n and --tree");
            if (tree_path.empty() && n < 1) throw UsageError("--n must be at least 1");
            const CodeTree tree = tree_path.empty() ? build_paper_tree(n) : load_tree_file(tree_path);
            const int leaves = tree.leaf_count();
            SessionOptions options;
            options.transport = transport_name == "tcp" ? TransportKind::TcpLoopback : TransportKind::InProcess;
            options.seed = seed_flag ? *seed_flag : default_seed();
            options.sr_seed = sr_seed;
            DemoReport report;
            report.expression = to_expression(tree);
            report.transport = transport_name;
            if (bits_text.empty()) {
                report.bits = trial_inputs(derive_key(options.seed, 0x62697473), leaves);
            } else {
                report.bits = parse_bit_string(bits_text);
                if (static_cast<int>(report.bits.size()) != leaves) {
                    throw UsageError("--bits needs " + std::to_string(leaves) + " bits");
                }
            }
            if (target < 0 || target >= leaves) throw UsageError("--target must lie in [0, " + std::to_string(leaves) + ")");
            report.target = target;
            report.session = run_session(tree, report.bits, target, options);
            if (!transcript_dir.empty()) {
                std::error_code ec;
                std::filesystem::create_directories(transcript_dir, ec);
                for (const auto& [name, t] : {std::pair<const char*, const WireTranscript*>{"alice", &report.session.alice},
                                              {"bob", &report.session.bob},
                                              {"broker", &report.session.broker}}) {
                    const auto path = std::filesystem::path(transcript_dir) / (std::string(name) + ".txt");
                    std::ofstream f(path);
                    if (!f) throw DataError("cannot write " + path.string());
                    write_transcript(f, *t);
                }
            }
            render_demo(out, report, format);
        }
        return kOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    } catch (const TransportError& e) {
        err << "error: transport: " << e.what() << '\n';
        return kData;
    } catch (const ProtocolError& e) {
        err << "error: protocol: " << e.what() << '\n';
        return kInternal;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace earac::cli
