#include "boardsplit/experiments.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "boardsplit/parallel.hpp"

namespace boardsplit {

namespace {

constexpr std::uint64_t kBoardTag = 0x626f617264ULL;  // "board"
constexpr std::uint64_t kGameTag = 0x67616d65ULL;     // "game"

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

const char* diagonal_name(DiagonalRule r) { return r == DiagonalRule::Both ? "both" : "main"; }

}  // namespace

std::uint64_t board_seed(std::uint64_t master_seed, std::uint64_t game_index)
{
    return derive_seed(derive_seed(master_seed, kBoardTag), game_index);
}

std::uint64_t game_seed(std::uint64_t master_seed, std::uint64_t game_index)
{
    return derive_seed(derive_seed(master_seed, kGameTag), game_index);
}

TipStream move_stream(std::uint64_t game_seed, int h_lookahead, int ply)
{
    return TipStream(game_seed).derive(static_cast<std::uint64_t>(h_lookahead)).derive(static_cast<std::uint64_t>(ply));
}

GameRecord play_game(const RootBoard& root, const GameConfig& config, const PlayerSettings& horizontal,
                     const PlayerSettings& vertical, std::uint64_t game_seed)
{
    if (root.branching() != config.branching() || root.depth() != config.depth())
        throw std::invalid_argument("board does not match the game configuration");
    GameRecord record;
    record.moves.reserve(config.total_plies());
    BoardView view = BoardView::whole(root);
    while (!view.is_terminal()) {
        const Player mover = view.mover();
        const PlayerSettings& s = mover == Player::Horizontal ? horizontal : vertical;
        auto decision = choose_move(view, s.lookahead, s.evaluator, config,
                                    move_stream(game_seed, horizontal.lookahead, view.ply));
        const int index = decision.chosen_index;
        record.moves.push_back({view.ply, mover, std::move(decision)});
        view = view.child(index);
    }
    record.winner = view.cell(0, 0) ? Player::Horizontal : Player::Vertical;
    return record;
}

Player play_game(const RootBoard& root, const GameConfig& config, int h_lookahead, int v_lookahead,
                 EvaluatorKind evaluator, std::uint64_t game_seed)
{
    return play_game(root, config, {h_lookahead, evaluator}, {v_lookahead, evaluator}, game_seed).winner;
}

std::vector<int> lookahead_series(int depth, Parity parity)
{
    std::vector<int> ks;
    if (parity == Parity::Even) {
        for (int k = 0; k <= 2 * (depth - 1); k += 2) ks.push_back(k);
    } else {
        for (int k = 1; k <= 2 * depth - 3; k += 2) ks.push_back(k);
    }
    return ks;
}

void validate(const TournamentSpec& spec)
{
    if (spec.n_games < 1) throw std::invalid_argument("n_games must be at least 1");
    if (spec.k_values.empty()) throw std::invalid_argument("k_values must not be empty");
    if (spec.v_lookahead < 0) throw std::invalid_argument("v_lookahead must be non-negative");
    for (int k : spec.k_values) {
        if (k < 0) throw std::invalid_argument("lookahead values must be non-negative");
        if ((k - spec.k_values.front()) % 2 != 0) throw std::invalid_argument("k_values must share one parity");
    }
}

std::string to_json(const TournamentSpec& spec)
{
    nlohmann::ordered_json j;
    j["config"] = {{"branching", spec.config.branching()},
                   {"depth", spec.config.depth()},
                   {"p", spec.config.p()},
                   {"diagonals", diagonal_name(spec.config.diagonals())}};
    j["n_games"] = spec.n_games;
    j["k_values"] = spec.k_values;
    j["evaluator"] = short_name(spec.evaluator);
    j["v_lookahead"] = spec.v_lookahead;
    j["master_seed"] = spec.master_seed;
    if (spec.v_evaluator) j["v_evaluator"] = short_name(*spec.v_evaluator);
    return j.dump();
}

TournamentSpec tournament_spec_from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    const auto& c = j.at("config");
    const auto diagonals = c.value("diagonals", std::string("both"));
    if (diagonals != "both" && diagonals != "main") throw std::invalid_argument("diagonals must be \"both\" or \"main\"");
    GameConfig config(c.at("branching").get<int>(), c.at("depth").get<int>(), c.at("p").get<double>(),
                      diagonals == "both" ? DiagonalRule::Both : DiagonalRule::MainOnly);
    const auto eval = parse_evaluator(j.at("evaluator").get<std::string>());
    if (!eval) throw std::invalid_argument("unknown evaluator");
    TournamentSpec spec{config};
    spec.n_games = j.at("n_games").get<int>();
    spec.k_values = j.at("k_values").get<std::vector<int>>();
    spec.evaluator = *eval;
    spec.v_lookahead = j.value("v_lookahead", 0);
    spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("v_evaluator")) {
        const auto v = parse_evaluator(j.at("v_evaluator").get<std::string>());
        if (!v) throw std::invalid_argument("unknown v_evaluator");
        spec.v_evaluator = *v;
    }
    validate(spec);
    return spec;
}

std::uint64_t spec_hash(const TournamentSpec& spec) { return fnv1a(to_json(spec)); }

TournamentResult run_tournament(const TournamentSpec& spec, unsigned workers)
{
    validate(spec);
    const auto n = static_cast<std::size_t>(spec.n_games);
    const auto nk = spec.k_values.size();
    // wins[game * nk + k] -- each game writes only its own row.
    std::vector<std::uint8_t> wins(n * nk, 0);
    const PlayerSettings v{spec.v_lookahead, spec.v_evaluator.value_or(spec.evaluator)};
    parallel_for(n, workers, [&](std::size_t g) {
        const RootBoard board = generate_board(spec.config, board_seed(spec.master_seed, g));
        const auto seed = game_seed(spec.master_seed, g);
        for (std::size_t ki = 0; ki < nk; ++ki) {
            const PlayerSettings h{spec.k_values[ki], spec.evaluator};
            wins[g * nk + ki] = play_game(board, spec.config, h, v, seed).winner == Player::Horizontal;
        }
    });

    TournamentResult result;
    result.spec_hash = spec_hash(spec);
    result.master_seed = spec.master_seed;
    for (std::size_t ki = 0; ki < nk; ++ki) {
        int h = 0;
        for (std::size_t g = 0; g < n; ++g) h += wins[g * nk + ki];
        result.points.push_back({spec.k_values[ki], h, spec.n_games});
    }
    return result;
}

void write_tournament_csv(std::ostream& out, const TournamentSpec& spec, const TournamentResult& result)
{
    out << "# " << kToolVersion << '\n';
    out << "# spec " << to_json(spec) << '\n';
    out << fmt::format("# spec_hash {:016x}\n", result.spec_hash);
    out << "B,D,p,eval,v_look,k,h_wins,n_games,master_seed\n";
    for (const auto& pt : result.points) {
        out << fmt::format("{},{},{:.12f},{},{},{},{},{},{}\n", spec.config.branching(), spec.config.depth(),
                           spec.config.p(), short_name(spec.evaluator), spec.v_lookahead, pt.k, pt.h_wins,
                           pt.n_games, result.master_seed);
    }
}

double two_proportion_z(int x1, int n1, int x2, int n2)
{
    const double p1 = static_cast<double>(x1) / n1;
    const double p2 = static_cast<double>(x2) / n2;
    const double pooled = static_cast<double>(x1 + x2) / (n1 + n2);
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
    if (se == 0.0) return 0.0;
    return (p1 - p2) / se;
}

PathologyReport pathology_index(std::span<const TournamentPoint> curve, double z_threshold)
{
    if (curve.size() < 2) throw std::invalid_argument("pathology_index needs at least two points");
    PathologyReport r{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), false,
                      curve[0].k, curve[1].k};
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const auto& a = curve[i - 1];
        const auto& b = curve[i];
        const double drop = a.fraction() - b.fraction();
        const double z = two_proportion_z(a.h_wins, a.n_games, b.h_wins, b.n_games);
        if (drop > r.max_drop) {
            r.max_drop = drop;
        }
        if (z > r.z_score) {
            r.z_score = z;
            r.drop_from_k = a.k;
            r.drop_to_k = b.k;
        }
    }
    r.is_pathological = r.max_drop > 0.0 && r.z_score >= z_threshold;
    return r;
}

DecisionQualityResult decision_quality(const GameConfig& config, std::span<const int> k_list, int n_positions,
                                       EvaluatorKind evaluator, std::uint64_t master_seed,
                                       const DecisionQualityOptions& options)
{
    if (n_positions < 1) throw std::invalid_argument("n_positions must be at least 1");
    if (options.ply < 0 || options.ply >= config.total_plies()) throw std::invalid_argument("ply out of range");
    const auto n = static_cast<std::size_t>(n_positions);
    const auto nk = k_list.size();
    struct Outcome {
        bool exact, trapwise, available, taken;
    };
    std::vector<Outcome> outcomes(n * nk);
    parallel_for(n, options.workers, [&](std::size_t i) {
        const RootBoard board = generate_board(config, board_seed(master_seed, i));
        const auto seed = game_seed(master_seed, i);
        SplitMix64 walk(seed);
        BoardView view = BoardView::whole(board);
        while (view.ply < options.ply) view = view.child(static_cast<int>(walk.below(config.branching())));

        const ExactResult exact = exact_solve(view);
        const auto traps = children_traps(view, config.diagonals());
        const Player mover = view.mover();
        std::optional<int> favorable;
        for (std::size_t c = 0; c < traps.size(); ++c)
            if (traps[c] && favors(*traps[c], mover)) favorable = static_cast<int>(c);

        for (std::size_t ki = 0; ki < nk; ++ki) {
            const SearchOptions opts{options.full_depth, false};
            const auto d = choose_move(view, k_list[ki], evaluator, config, move_stream(seed, k_list[ki], view.ply), opts);
            const bool trapwise = is_correct_trapwise(d, traps, mover);
            outcomes[i * nk + ki] = {is_correct_exact(d, exact), trapwise, favorable.has_value(),
                                     favorable.has_value() && trapwise};
        }
    });

    DecisionQualityResult result;
    for (std::size_t ki = 0; ki < nk; ++ki) {
        DecisionQualityPoint pt{k_list[ki], n_positions, 0, 0, 0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const auto& o = outcomes[i * nk + ki];
            pt.correct_exact += o.exact;
            pt.correct_trapwise += o.trapwise;
            pt.trap_available += o.available;
            pt.trap_taken += o.taken;
        }
        result.points.push_back(pt);
    }
    return result;
}

void write_decision_quality_csv(std::ostream& out, const GameConfig& config, EvaluatorKind evaluator,
                                std::uint64_t master_seed, const DecisionQualityOptions& options,
                                const DecisionQualityResult& result)
{
    out << "# " << kToolVersion << '\n';
    out << fmt::format("# decision-quality ply={} full_depth={} diagonals={}\n", options.ply, options.full_depth,
                       diagonal_name(config.diagonals()));
    out << "B,D,p,eval,k,n_positions,correct_exact,correct_trapwise,master_seed\n";
    for (const auto& pt : result.points) {
        out << fmt::format("{},{},{:.12f},{},{},{},{:.6f},{:.6f},{}\n", config.branching(), config.depth(), config.p(),
                           short_name(evaluator), pt.k, pt.n_positions, pt.correct_rate_exact(),
                           pt.correct_rate_trapwise(), master_seed);
    }
}

}  // namespace boardsplit
