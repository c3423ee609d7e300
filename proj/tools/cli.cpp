#include "cli.hpp"

#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "boardsplit/analysis.hpp"
#include "boardsplit/board.hpp"
#include "boardsplit/experiments.hpp"
#include "boardsplit/search.hpp"
#include "boardsplit/validate.hpp"

namespace boardsplit::cli {

namespace {

namespace an = boardsplit::analysis;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags shared by the commands that build a GameConfig.
struct GameFlags {
    int b = 3;
    int d = 5;
    std::optional<double> p;
    bool fair = false;
    bool single_diagonal = false;

    void add_to(CLI::App& cmd, bool with_diagonal = true)
    {
        cmd.add_option("--b", b, "branching factor B")->check(CLI::PositiveNumber);
        cmd.add_option("--d", d, "number of rounds D")->check(CLI::PositiveNumber);
        auto* po = cmd.add_option("--p", p, "probability of a 1 per cell")->check(CLI::Range(0.0, 1.0));
        auto* fo = cmd.add_flag("--fair", fair, "p solving (1-x)^B = x (default when --p is absent)");
        po->excludes(fo);
        if (with_diagonal)
            cmd.add_flag("--single-diagonal", single_diagonal, "only the top-left to bottom-right diagonal is a trap");
    }

    double resolved_p() const { return p ? *p : an::fair_p(b); }

    GameConfig config() const
    {
        if (b < 2) throw UsageError("--b must be at least 2");
        return GameConfig(b, d, resolved_p(), single_diagonal ? DiagonalRule::MainOnly : DiagonalRule::Both);
    }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed)
{
    if (seed) return *seed;
    std::random_device rd;
    return (std::uint64_t{rd()} << 32) ^ rd();
}

EvaluatorKind evaluator_from(const std::string& name)
{
    if (auto e = parse_evaluator(name)) return *e;
    throw UsageError("unknown evaluator '" + name + "' (expected n, y or r)");
}

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

std::string slurp(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* const kEvalChoices = "evaluator: n (count ones), y (trap aware), r (random tips)";

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Board-splitting game engine, minimax experiments and trap-error model", "boardsplit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    // fairp
    int fair_b = 2;
    auto* fairp = app.add_subcommand("fairp", "print the fair-game p for branching factor B");
    fairp->add_option("--b", fair_b, "branching factor B")->required();

    // board dump / load
    auto* board = app.add_subcommand("board", "write or inspect boards in the text format");
    board->require_subcommand(1);
    GameFlags dump_flags;
    std::optional<std::uint64_t> dump_seed;
    std::string dump_out;
    auto* dump = board->add_subcommand("dump", "generate a board and write it");
    dump_flags.add_to(*dump, false);
    dump->add_option("--seed", dump_seed, "board seed");
    dump->add_option("--out", dump_out, "output file (default stdout)");
    std::string load_path;
    auto* load = board->add_subcommand("load", "read a board and print what it contains");
    load->add_option("file", load_path, "board file")->required();

    // play
    GameFlags play_flags;
    std::optional<std::uint64_t> play_seed;
    int h_look = 0;
    int v_look = 0;
    std::string play_eval = "n";
    std::string play_v_eval;
    std::string play_board;
    auto* play = app.add_subcommand("play", "play one game and print every decision");
    play_flags.add_to(*play);
    play->add_option("--seed", play_seed, "board/game seed");
    play->add_option("--h-look", h_look, "H lookahead")->check(CLI::NonNegativeNumber);
    play->add_option("--v-look", v_look, "V lookahead")->check(CLI::NonNegativeNumber);
    play->add_option("--eval", play_eval, kEvalChoices);
    play->add_option("--v-eval", play_v_eval, "V's evaluator when it differs from --eval");
    play->add_option("--board", play_board, "play on a board file instead of a generated board");

    // tournament
    GameFlags t_flags;
    int t_games = 100;
    std::string t_eval = "n";
    std::string t_v_eval;
    std::string t_parity = "even";
    std::vector<int> t_k_values;
    int t_v_look = 0;
    std::optional<std::uint64_t> t_seed;
    std::string t_out;
    std::string t_spec;
    unsigned t_threads = 0;
    auto* tournament = app.add_subcommand("tournament", "replay the same boards for a series of H lookaheads");
    t_flags.add_to(*tournament);
    tournament->add_option("--games", t_games, "number of boards")->check(CLI::PositiveNumber);
    tournament->add_option("--eval", t_eval, kEvalChoices);
    tournament->add_option("--v-eval", t_v_eval, "V's evaluator for heterogeneous matches");
    auto* parity_opt = tournament->add_option("--parity", t_parity, "even: k = 0..2(D-1); odd: k = 1..2D-3")
                           ->check(CLI::IsMember({"even", "odd"}));
    tournament->add_option("--k-values", t_k_values, "explicit lookahead list")->delimiter(',')->excludes(parity_opt);
    tournament->add_option("--v-look", t_v_look, "V lookahead")->check(CLI::NonNegativeNumber);
    tournament->add_option("--seed", t_seed, "master seed");
    tournament->add_option("--out", t_out, "CSV output file (default stdout)");
    tournament->add_option("--spec", t_spec, "JSON tournament spec file; replaces the game flags");
    tournament->add_option("--threads", t_threads, "worker threads (0 = all cores); output does not depend on it");

    // decision-quality
    GameFlags q_flags;
    std::string q_eval = "n";
    std::vector<int> q_k_list;
    std::string q_parity = "even";
    int q_positions = 200;
    int q_ply = 1;
    bool q_full_depth = false;
    std::optional<std::uint64_t> q_seed;
    std::string q_out;
    unsigned q_threads = 0;
    auto* quality = app.add_subcommand("decision-quality", "correct-decision rates against the exact solver and traps");
    q_flags.add_to(*quality);
    quality->add_option("--eval", q_eval, kEvalChoices);
    auto* q_par = quality->add_option("--parity", q_parity, "lookahead series parity")->check(CLI::IsMember({"even", "odd"}));
    quality->add_option("--k-list", q_k_list, "explicit lookahead list")->delimiter(',')->excludes(q_par);
    quality->add_option("--positions", q_positions, "number of sampled positions")->check(CLI::PositiveNumber);
    quality->add_option("--ply", q_ply, "ply of the sampled decision (default 1, H's first move)")
        ->check(CLI::NonNegativeNumber);
    quality->add_flag("--full-depth", q_full_depth, "let tips reach the leaves instead of stopping at 2(D-1)");
    quality->add_option("--seed", q_seed, "master seed");
    quality->add_option("--out", q_out, "CSV output file (default stdout)");
    quality->add_option("--threads", q_threads, "worker threads (0 = all cores)");

    // analyze
    GameFlags a_flags;
    std::optional<int> a_k_max;
    int a_k_min = 2;
    std::string a_out;
    auto* analyze = app.add_subcommand("analyze", "P0 curve of the arbitrary-chooser error model");
    a_flags.add_to(*analyze, false);
    analyze->add_option("--k-min", a_k_min, "smallest even k (default 2)")->check(CLI::NonNegativeNumber);
    analyze->add_option("--k-max", a_k_max, "largest even k (default 2(D-1))")->check(CLI::NonNegativeNumber);
    analyze->add_option("--out", a_out, "CSV output file (default stdout)");

    // validate
    std::string v_suite = "all";
    std::uint64_t v_seed = 1;
    std::string v_out;
    auto* validate_cmd = app.add_subcommand("validate", "run the cross-validation batteries");
    validate_cmd->add_option("--suite", v_suite, "formulas, mc, oracle or all")
        ->check(CLI::IsMember({"formulas", "mc", "oracle", "all"}));
    validate_cmd->add_option("--seed", v_seed, "seed for the randomized checks");
    validate_cmd->add_option("--out", v_out, "JSON report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*fairp) {
            if (fair_b < 1) throw UsageError("--b must be at least 1");
            out << fmt::format("{:.12f}\n", an::fair_p(fair_b));
            return kOk;
        }

        if (*dump) {
            const GameConfig cfg = dump_flags.config();
            const auto seed = resolve_seed(dump_seed);
            std::ostringstream ss;
            write_board(ss, generate_board(cfg, seed));
            emit(ss.str(), dump_out, out);
            if (!dump_out.empty()) out << fmt::format("wrote {}x{} board (seed {}, p {:.12f}) to {}\n", cfg.side(), cfg.side(), seed, cfg.p(), dump_out);
            return kOk;
        }

        if (*load) {
            std::ifstream f(load_path);
            if (!f) throw IoError("cannot open '" + load_path + "'");
            const RootBoard rb = read_board(f);
            const BoardView v = BoardView::whole(rb);
            const auto trap = detect_trap(v);
            out << fmt::format("B={} D={} side={} ones={} fraction={:.6f}\n", rb.branching(), rb.depth(), rb.side(),
                               count_ones(v), static_cast<double>(count_ones(v)) / static_cast<double>(v.area()));
            out << "root trap: " << (trap ? to_string(*trap) : "none") << '\n';
            out << "exact winner: " << to_string(exact_solve(v).winner) << '\n';
            return kOk;
        }

        if (*play) {
            const GameConfig cfg = play_flags.config();
            const auto seed = resolve_seed(play_seed);
            std::optional<RootBoard> rb;
            if (!play_board.empty()) {
                std::ifstream f(play_board);
                if (!f) throw IoError("cannot open '" + play_board + "'");
                rb.emplace(read_board(f));
                if (rb->branching() != cfg.branching() || rb->depth() != cfg.depth())
                    throw UsageError("board file geometry does not match --b/--d");
            } else {
                rb.emplace(generate_board(cfg, board_seed(seed, 0)));
            }
            const EvaluatorKind he = evaluator_from(play_eval);
            const EvaluatorKind ve = play_v_eval.empty() ? he : evaluator_from(play_v_eval);
            const auto game = play_game(*rb, cfg, {h_look, he}, {v_look, ve}, game_seed(seed, 0));
            out << fmt::format("# {} B={} D={} p={:.12f} seed={} h_look={} v_look={} eval={} v_eval={}\n",
                               kToolVersion, cfg.branching(), cfg.depth(), cfg.p(), seed, h_look, v_look,
                               short_name(he), short_name(ve));
            BoardView v = BoardView::whole(*rb);
            for (const auto& m : game.moves) {
                std::string values;
                for (std::size_t i = 0; i < m.decision.child_values.size(); ++i)
                    values += (i ? " " : "") + std::to_string(m.decision.child_values[i]);
                out << fmt::format("ply {:2} {} {}x{} -> {}  values [{}] ties {}\n", m.ply, to_string(m.mover),
                                   v.row_count, v.col_count, m.decision.chosen_index, values, m.decision.tie_count);
                v = v.child(m.decision.chosen_index);
            }
            out << "winner: " << to_string(game.winner) << '\n';
            return kOk;
        }

        if (*tournament) {
            std::optional<TournamentSpec> spec;
            if (!t_spec.empty()) {
                spec = tournament_spec_from_json(slurp(t_spec));
            } else {
                const GameConfig cfg = t_flags.config();
                spec = TournamentSpec{cfg};
                spec->n_games = t_games;
                spec->k_values = t_k_values.empty()
                                     ? lookahead_series(t_flags.d, t_parity == "odd" ? Parity::Odd : Parity::Even)
                                     : t_k_values;
                spec->evaluator = evaluator_from(t_eval);
                if (!t_v_eval.empty()) spec->v_evaluator = evaluator_from(t_v_eval);
                spec->v_lookahead = t_v_look;
                spec->master_seed = resolve_seed(t_seed);
                try {
                    validate(*spec);
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
            const auto result = run_tournament(*spec, t_threads);
            std::ostringstream csv;
            write_tournament_csv(csv, *spec, result);
            emit(csv.str(), t_out, out);
            const char* pre = t_out.empty() || t_out == "-" ? "# " : "";
            out << fmt::format("{}B={} D={} eval={} v_look={} games={} seed={}\n", pre, spec->config.branching(),
                               spec->config.depth(), short_name(spec->evaluator), spec->v_lookahead, spec->n_games,
                               spec->master_seed);
            for (const auto& pt : result.points)
                out << fmt::format("{}k={:2} H wins {:4}/{} ({:.3f})\n", pre, pt.k, pt.h_wins, pt.n_games, pt.fraction());
            if (result.points.size() >= 2) {
                const auto pi = pathology_index(result.points);
                out << fmt::format("{}pathology_index: max_drop={:.4f} z={:.3f} (k {} -> {}) pathological={}\n", pre,
                                   pi.max_drop, pi.z_score, pi.drop_from_k, pi.drop_to_k, pi.is_pathological);
            }
            return kOk;
        }

        if (*quality) {
            const GameConfig cfg = q_flags.config();
            const auto seed = resolve_seed(q_seed);
            const auto ks =
                q_k_list.empty() ? lookahead_series(q_flags.d, q_parity == "odd" ? Parity::Odd : Parity::Even) : q_k_list;
            if (q_ply >= cfg.total_plies()) throw UsageError("--ply must be below 2D");
            for (int k : ks)
                if (k < 0) throw UsageError("lookaheads must be non-negative");
            const DecisionQualityOptions opts{q_ply, q_full_depth, q_threads};
            const auto result = decision_quality(cfg, ks, q_positions, evaluator_from(q_eval), seed, opts);
            std::ostringstream csv;
            write_decision_quality_csv(csv, cfg, evaluator_from(q_eval), seed, opts, result);
            emit(csv.str(), q_out, out);
            if (!q_out.empty() && q_out != "-") {
                for (const auto& pt : result.points)
                    out << fmt::format("k={:2} exact {:.3f} trapwise {:.3f} (trap available {}, taken {})\n", pt.k,
                                       pt.correct_rate_exact(), pt.correct_rate_trapwise(), pt.trap_available,
                                       pt.trap_taken);
            }
            return kOk;
        }

        if (*analyze) {
            if (a_flags.b < 2) throw UsageError("--b must be at least 2");
            const double p = a_flags.resolved_p();
            const int k_max = a_k_max.value_or(2 * (a_flags.d - 1));
            if (a_k_min % 2 != 0 || k_max % 2 != 0) throw UsageError("--k-min and --k-max must be even");
            if (k_max > 2 * (a_flags.d - 1)) throw UsageError("--k-max exceeds 2(D-1); model_side undefined");
            std::vector<int> ks;
            for (int k = a_k_min; k <= k_max; k += 2) ks.push_back(k);
            const auto curve = an::p0_curve(a_flags.b, a_flags.d, p, ks);
            std::ostringstream csv;
            csv << "# " << kToolVersion << fmt::format(" analyze B={} D={} p={:.17g}\n", a_flags.b, a_flags.d, p);
            csv << "B,D,p,k,S,P_trap,pr_r_errs_tip,P0\n";
            for (const auto& c : curve)
                csv << fmt::format("{},{},{:.12f},{},{},{:.17g},{:.17g},{:.17g}\n", a_flags.b, a_flags.d, p,
                                   c.lookahead, c.side, c.trap_p, c.tip_error, c.p0);
            emit(csv.str(), a_out, out);
            const auto g = an::check_growth(curve);
            const char* pre = a_out.empty() || a_out == "-" ? "# " : "";
            if (g.nondecreasing) {
                out << pre << "P0 growth: " << (g.strictly_increasing ? "strictly increasing" : "nondecreasing")
                    << " over k\n";
            } else {
                out << pre << "P0 growth: not monotone; decreases at";
                for (auto [a, b] : g.decreases) out << fmt::format(" k={}->{}", a, b);
                out << '\n';
            }
            return kOk;
        }

        if (*validate_cmd) {
            std::vector<validation::Suite> suites;
            if (v_suite == "all") {
                suites = {validation::Suite::Formulas, validation::Suite::MonteCarlo, validation::Suite::Oracle};
            } else {
                suites = {*validation::parse_suite(v_suite)};
            }
            bool all_passed = true;
            std::string json = suites.size() > 1 ? "[\n" : "";
            for (std::size_t i = 0; i < suites.size(); ++i) {
                const auto report = validation::run_suite(suites[i], v_seed);
                all_passed &= report.passed();
                json += report.to_json();
                json += (i + 1 < suites.size()) ? ",\n" : "\n";
                for (const auto& c : report.checks) {
                    const char* st = c.status == validation::Status::Pass   ? "PASS"
                                     : c.status == validation::Status::Fail ? "FAIL"
                                                                            : "INFO";
                    err << fmt::format("[{}] {}: {}\n", st, c.name, c.detail);
                }
            }
            if (suites.size() > 1) json += "]\n";
            emit(json, v_out, out);
            return all_passed ? kOk : kFailure;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const an::ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const BoardFormatError& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"boardsplit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace boardsplit::cli
