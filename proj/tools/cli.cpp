#include "cli.hpp"

#include "dofkit/demand_graph.hpp"
#include "dofkit/error.hpp"
#include "dofkit/io.hpp"
#include "dofkit/linear_sim.hpp"
#include "dofkit/schemes.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dofkit::cli {

using dofkit::to_string;

namespace {

constexpr int kMaxRandomSlots = 16;
constexpr int kMaxTrials = 100000;
constexpr int kMaxRealizations = 1000;
constexpr int kSimulationMaxUsers = 16;

bool randomized(Command c) { return c == Command::lin_eval || c == Command::converse_sample || c == Command::lemma1; }

std::vector<int> parse_int_list(const std::string& text, const std::string& flag)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag + ": '" + item + "' is not an integer");
        }
    }
    return out;
}

// "a..b" or a single integer.
std::vector<int> parse_range(const std::string& text, const std::string& flag)
{
    const auto dots = text.find("..");
    if (dots == std::string::npos) return parse_int_list(text, flag);
    const auto lo = parse_int_list(text.substr(0, dots), flag);
    const auto hi = parse_int_list(text.substr(dots + 2), flag);
    if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) throw UsageError(flag + ": bad range '" + text + "'");
    std::vector<int> out;
    for (int v = lo[0]; v <= hi[0]; ++v) out.push_back(v);
    return out;
}

void require_range(int value, int lo, int hi, const std::string& flag, ExitCode code = kValidationError)
{
    if (value < lo || value > hi) {
        throw UsageError(flag + " must be in " + std::to_string(lo) + ".." + std::to_string(hi) + ", got " +
                         std::to_string(value),
                         code);
    }
}

int user_cap(Command c)
{
    switch (c) {
    case Command::topology: return Topology::kMaxUsers;
    case Command::tdma_search: return kOptimalTdmaMaxUsers;
    case Command::tdma_canonical: return Topology::kMaxUsers;
    case Command::demand_bound: return kBestAssignmentMaxUsers;
    case Command::sweep: return kOptimalTdmaMaxUsers;
    default: return kSimulationMaxUsers;
    }
}

} // namespace

std::string to_string(Command c)
{
    switch (c) {
    case Command::topology: return "topology";
    case Command::tdma_search: return "tdma-search";
    case Command::tdma_canonical: return "tdma-canonical";
    case Command::demand_bound: return "demand-bound";
    case Command::lin_eval: return "lin-eval";
    case Command::converse_sample: return "converse-sample";
    case Command::lemma1: return "lemma1";
    case Command::sweep: return "sweep";
    }
    return "?";
}

ExperimentConfig parse_args(const std::vector<std::string>& argv)
{
    CLI::App app{"Degrees-of-freedom toolkit for locally connected interference networks", "dofkit"};
    app.require_subcommand(1);
    app.set_help_flag("-h,--help");

    ExperimentConfig cfg;
    std::string mode = "cyclic";
    std::string L_text;
    std::string format = "json";
    std::string scheme = "canonical";
    std::string b_text;
    std::string assignment_text;
    std::string edges_text;
    std::uint64_t seed = 0;

    struct Sub {
        Command command;
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {Command::topology, "topology", "Describe a topology and check chordality"},
        {Command::tdma_search, "tdma-search", "Exact optimal TDMA sum DoF"},
        {Command::tdma_canonical, "tdma-canonical", "Canonical turn-off-every-other-transmitter pattern"},
        {Command::demand_bound, "demand-bound", "Demand-graph LP outer bound"},
        {Command::lin_eval, "lin-eval", "Evaluate a linear scheme by generic rank"},
        {Command::converse_sample, "converse-sample", "Random cooperation schemes against the converse"},
        {Command::lemma1, "lemma1", "Reconstruction check for a receiver set B"},
        {Command::sweep, "sweep", "Per-user DoF table over a range of L"},
    };
    std::vector<CLI::App*> apps;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        apps.push_back(sub);
        sub->add_option("--out", cfg.output, "Output file");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--decimal", cfg.decimal, "Add a decimal per-user column to CSV output");
        sub->add_flag("--strict", cfg.strict, "Exit nonzero on instability warnings");
        sub->add_option("--mode", mode, "truncated or cyclic")->check(CLI::IsMember({"truncated", "cyclic"}));
        if (s.command == Command::sweep) {
            sub->add_option("--L", L_text, "Range of L, e.g. 1..4")->required();
            sub->add_option("--K-multiple", cfg.K_multiple, "K = multiple * (L + 2)");
            sub->add_option("--M", cfg.M, "Cooperation budget");
            sub->add_flag("!--no-bound", cfg.with_bound, "Skip the demand-graph bound");
            continue;
        }
        sub->add_option("--K", cfg.K, "Number of users")->required();
        sub->add_option("--L", L_text, "Connectivity parameter");
        switch (s.command) {
        case Command::topology:
            sub->add_option("--edges", edges_text, "Hand-built edges rx:tx,rx:tx,...");
            break;
        case Command::tdma_search:
            sub->add_option("--M", cfg.M, "Cooperation budget");
            break;
        case Command::demand_bound:
            sub->add_option("--assignment", assignment_text, "Transmitters t_1,...,t_K (default: best)");
            break;
        case Command::lin_eval:
        case Command::lemma1:
            sub->add_option("--n", cfg.n, "Slots");
            sub->add_option("--trials", cfg.trials, "Channel realizations");
            sub->add_option("--seed", seed, "Base seed");
            sub->add_option("--scheme", scheme, "canonical, optimal, random or file")
                ->check(CLI::IsMember({"canonical", "optimal", "random", "file"}));
            sub->add_option("--scheme-file", cfg.scheme_file, "Linear scheme document");
            sub->add_option("--density", cfg.density, "Precoder density for random schemes");
            sub->add_option("--coherence", cfg.coherence, "time-varying or constant")
                ->check(CLI::IsMember({"time-varying", "constant"}));
            if (s.command == Command::lemma1) sub->add_option("--B", b_text, "Receiver set, comma separated");
            break;
        case Command::converse_sample:
            sub->add_option("--n", cfg.n, "Largest slot count; scheme k uses 1 + k mod n");
            sub->add_option("--trials", cfg.trials, "Random schemes");
            sub->add_option("--realizations", cfg.realizations, "Channel realizations per scheme");
            sub->add_option("--seed", seed, "Base seed");
            sub->add_option("--density", cfg.density, "Precoder density (default cycles 1, 1/2, 1/4, 1/8)");
            sub->add_option("--B", b_text, "Receiver set, comma separated");
            break;
        default:
            break;
        }
    }

    std::vector<const char*> raw;
    raw.reserve(argv.size());
    for (const auto& a : argv) raw.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (std::size_t k = 0; k < apps.size(); ++k) {
        if (apps[k]->parsed()) cfg.command = subs[k].command;
    }
    CLI::App* active = apps[static_cast<std::size_t>(cfg.command)];
    cfg.mode = parse_mode(mode);
    cfg.format = format == "csv" ? Format::csv : Format::json;
    cfg.scheme = scheme == "random"    ? SchemeSource::random
                 : scheme == "optimal" ? SchemeSource::optimal
                 : scheme == "file"    ? SchemeSource::file
                                       : SchemeSource::canonical;

    if (randomized(cfg.command)) {
        if (active->count("--seed") == 0) {
            throw UsageError("--seed is required for " + to_string(cfg.command));
        }
        cfg.seed = seed;
    }

    if (cfg.command == Command::sweep) {
        cfg.sweep_L = parse_range(L_text, "--L");
        require_range(cfg.K_multiple, 1, 64, "--K-multiple");
        require_range(cfg.M, 1, 64, "--M");
        for (int L : cfg.sweep_L) {
            require_range(L, 0, 63, "--L");
            require_range(cfg.K_multiple * (L + 2), 1, user_cap(cfg.command), "--K-multiple * (L + 2)", kResourceLimit);
        }
        return cfg;
    }

    if (!edges_text.empty()) {
        for (const auto& item : CLI::detail::split(edges_text, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw UsageError("--edges: expected rx:tx, got '" + item + "'");
            const auto rx = parse_int_list(item.substr(0, colon), "--edges");
            const auto tx = parse_int_list(item.substr(colon + 1), "--edges");
            cfg.edges.emplace_back(rx.at(0), tx.at(0));
        }
        cfg.mode = Topology::Mode::explicit_edges;
    }
    if (!L_text.empty()) {
        const auto L = parse_int_list(L_text, "--L");
        if (L.size() != 1) throw UsageError("--L takes a single integer here");
        cfg.L = L[0];
    } else if (cfg.edges.empty()) {
        throw UsageError("--L is required for " + to_string(cfg.command));
    }
    require_range(cfg.K, 1, Topology::kMaxUsers, "--K");
    require_range(cfg.K, 1, user_cap(cfg.command), "--K", kResourceLimit);
    if (cfg.edges.empty()) require_range(cfg.L, 0, cfg.K - 1, "--L");
    require_range(cfg.M, 1, 64, "--M");
    require_range(cfg.trials, 1, kMaxTrials, "--trials");
    require_range(cfg.realizations, 1, kMaxRealizations, "--realizations");
    require_range(cfg.n, 1, cfg.scheme == SchemeSource::random || cfg.command == Command::converse_sample
                                ? kMaxRandomSlots
                                : kMaxSlots,
                  "--n");
    if (cfg.density && !(*cfg.density > 0.0 && *cfg.density <= 1.0)) {
        throw UsageError("--density must lie in (0, 1]");
    }
    if (cfg.scheme == SchemeSource::file && cfg.scheme_file.empty()) {
        throw UsageError("--scheme file needs --scheme-file");
    }
    if (!cfg.scheme_file.empty()) cfg.scheme = SchemeSource::file;
    if (!b_text.empty()) cfg.receivers_b = parse_int_list(b_text, "--B");
    if (!assignment_text.empty()) {
        cfg.assignment = parse_int_list(assignment_text, "--assignment");
        if (static_cast<int>(cfg.assignment.size()) != cfg.K) {
            throw UsageError("--assignment needs exactly K transmitters");
        }
    }
    return cfg;
}

namespace {

Topology make_topology(const ExperimentConfig& cfg)
{
    if (cfg.mode == Topology::Mode::explicit_edges) return Topology::from_edges(cfg.K, cfg.edges);
    return make_locally_connected(cfg.K, cfg.L, cfg.mode);
}

std::string seed_header(const ExperimentConfig& cfg)
{
    return std::string("# dofkit ") + kVersion + " " + to_string(cfg.command) + " seed=" + std::to_string(*cfg.seed);
}

Json generator(const ExperimentConfig& cfg)
{
    Json g{{"tool", "dofkit"}, {"version", kVersion}, {"command", to_string(cfg.command)}};
    if (cfg.seed) g["seed"] = *cfg.seed;
    return g;
}

std::string verdict_name(Chordality c)
{
    switch (c) {
    case Chordality::chordal: return "chordal";
    case Chordality::not_chordal: return "not-chordal";
    case Chordality::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Output {
    std::string text;
    int status = kOk;
};

Output run_topology(const ExperimentConfig& cfg)
{
    const Topology t = make_topology(cfg);
    std::string verdict = "skipped";
    if (t.K() <= kChordalityMaxUsers) verdict = verdict_name(is_chordal_bipartite(t).verdict);
    std::ostringstream os;
    if (cfg.format == Format::csv) {
        os << "tx,receivers\n";
        for (int j = 1; j <= t.K(); ++j) {
            os << j << ',';
            const auto rx = receivers_heard_by(t, j);
            for (std::size_t k = 0; k < rx.size(); ++k) os << (k ? " " : "") << rx[k];
            os << '\n';
        }
        os << "# chordal_bipartite=" << verdict << '\n';
        return {os.str()};
    }
    Json j{{"generator", generator(cfg)}, {"topology", to_json(t)}, {"chordal_bipartite", verdict}};
    Json heard = Json::array();
    for (int tx = 1; tx <= t.K(); ++tx) heard.push_back(receivers_heard_by(t, tx));
    j["receivers_heard_by"] = std::move(heard);
    return {j.dump(2) + "\n"};
}

Output emit_plan(const ExperimentConfig& cfg, const Topology& t, const TdmaPlan& plan, int M)
{
    if (cfg.format == Format::csv) {
        return {dof_csv_header(cfg.decimal) + "\n" + dof_csv_row(t, M, plan.result.sum_dof, cfg.decimal) + "\n"};
    }
    Json j{{"generator", generator(cfg)},
           {"topology", to_json(t)},
           {"assignment", to_json(plan.assignment)},
           {"schedule", to_json(plan.schedule)},
           {"result", to_json(plan.result)}};
    return {j.dump(2) + "\n"};
}

Output run_demand_bound(const ExperimentConfig& cfg)
{
    const Topology t = make_topology(cfg);
    const DofBound bound = cfg.assignment.empty()
                               ? best_assignment_upper_bound(t)
                               : dof_upper_bound_lp(build_demand_graph(t, MessageAssignment::single(cfg.assignment)));
    if (cfg.format == Format::csv) {
        return {dof_csv_header(cfg.decimal) + "\n" + dof_csv_row(t, 1, bound.value, cfg.decimal) + "\n"};
    }
    Json j{{"generator", generator(cfg)}, {"topology", to_json(t)}, {"bound", to_json(bound)}};
    return {j.dump(2) + "\n"};
}

LinearScheme load_scheme(const ExperimentConfig& cfg, const Topology& t)
{
    switch (cfg.scheme) {
    case SchemeSource::file: {
        std::ifstream in(cfg.scheme_file);
        if (!in) throw InvalidParameter("cannot read scheme file '" + cfg.scheme_file + "'");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::exception& e) {
            throw InvalidParameter(std::string("scheme file is not valid JSON: ") + e.what());
        }
        return scheme_from_json(j);
    }
    case SchemeSource::random:
        return random_scheme(t, MessageAssignment::full_cooperation(t.K()), cfg.n, cfg.density.value_or(1.0),
                             *cfg.seed);
    case SchemeSource::optimal: {
        const auto plan = optimal_tdma(t, 1);
        return scheme_from_schedule(t, plan.assignment, plan.schedule, cfg.n);
    }
    case SchemeSource::canonical:
    default: {
        const auto plan = canonical_tdma(t);
        return scheme_from_schedule(t, plan.assignment, plan.schedule, cfg.n);
    }
    }
}

const char* kReportCsvHeader = "K,L,n,trial,sum_dof,s,r,deficiency,reconstructable";

Output run_lin_eval(const ExperimentConfig& cfg)
{
    const Topology t = make_topology(cfg);
    const LinearScheme s = load_scheme(cfg, t);
    // Channel draws use a stream separate from the scheme's.
    const std::uint64_t channel_seed = *cfg.seed + 1;
    const DofResult r = evaluate_dof(s, t, cfg.trials, channel_seed, parse_coherence(cfg.coherence));
    Output out;
    out.status = cfg.strict && r.unstable ? kUnstable : kOk;
    if (cfg.format == Format::csv) {
        std::ostringstream os;
        os << seed_header(cfg) << '\n' << kReportCsvHeader << '\n';
        for (int k = 0; k < cfg.trials; ++k) {
            const auto c = sample_channel(t, s.n(), parse_coherence(cfg.coherence), channel_seed + k);
            const auto profile = decodable_profile(s, c);
            int total = 0;
            for (int v : profile) total += v;
            os << t.K() << ',' << t.L() << ',' << s.n() << ',' << k << ',' << to_string(Rational(total, s.n()))
               << ",,,,\n";
        }
        out.text = os.str();
        return out;
    }
    Json j{{"generator", generator(cfg)}, {"topology", to_json(t)}, {"scheme", to_json(s)}, {"result", to_json(r)}};
    out.text = j.dump(2) + "\n";
    return out;
}

std::vector<int> receiver_set(const ExperimentConfig& cfg)
{
    return cfg.receivers_b.empty() ? even_receivers(cfg.K) : cfg.receivers_b;
}

Output run_lemma1(const ExperimentConfig& cfg)
{
    const Topology t = make_topology(cfg);
    const LinearScheme s = load_scheme(cfg, t);
    const auto c = sample_channel(t, s.n(), parse_coherence(cfg.coherence), *cfg.seed + 1);
    const auto report = lemma1_check(s, c, receiver_set(cfg));
    const auto dof = evaluate_dof(s, t, cfg.trials, *cfg.seed + 1, parse_coherence(cfg.coherence));
    if (cfg.format == Format::csv) {
        std::ostringstream os;
        os << seed_header(cfg) << '\n' << kReportCsvHeader << '\n';
        os << t.K() << ',' << t.L() << ',' << s.n() << ",0," << to_string(dof.sum_dof) << ',' << report.s << ','
           << report.r << ',' << report.deficiency << ',' << (report.reconstructable ? "true" : "false") << '\n';
        return {os.str()};
    }
    Json j{{"generator", generator(cfg)}, {"topology", to_json(t)}, {"scheme", to_json(s)},
           {"channel", to_json(c)}, {"report", to_json(report)}, {"result", to_json(dof)}};
    return {j.dump(2) + "\n"};
}

Output run_converse_sample(const ExperimentConfig& cfg)
{
    const Topology t = make_topology(cfg);
    const auto a = MessageAssignment::full_cooperation(t.K());
    const auto B = receiver_set(cfg);
    const Rational bound(static_cast<long>(B.size()));
    std::ostringstream csv;
    csv << seed_header(cfg) << '\n' << kReportCsvHeader << '\n';
    Json rows = Json::array();
    int above_b = 0;
    int unstable = 0;
    Rational max_dof = 0;
    for (int k = 0; k < cfg.trials; ++k) {
        const int n = 1 + k % cfg.n;
        const double density = cfg.density.value_or(1.0 / static_cast<double>(1 << (k % 4)));
        const auto s = random_scheme(t, a, n, density, *cfg.seed + static_cast<std::uint64_t>(k));
        const std::uint64_t channel_seed = *cfg.seed + 1'000'000ULL + static_cast<std::uint64_t>(k) * cfg.realizations;
        const auto dof = evaluate_dof(s, t, cfg.realizations, channel_seed);
        const auto report = lemma1_check(s, sample_channel(t, n, Coherence::time_varying, channel_seed), B);
        if (dof.sum_dof > bound) ++above_b;
        if (dof.unstable) ++unstable;
        if (dof.sum_dof > max_dof) max_dof = dof.sum_dof;
        csv << t.K() << ',' << t.L() << ',' << n << ',' << k << ',' << to_string(dof.sum_dof) << ',' << report.s << ','
            << report.r << ',' << report.deficiency << ',' << (report.reconstructable ? "true" : "false") << '\n';
        rows.push_back(Json{{"trial", k},
                            {"n", n},
                            {"density", density},
                            {"sum_dof", to_string(dof.sum_dof)},
                            {"disagreeing_realizations", dof.disagreeing_trials},
                            {"report", to_json(report)}});
    }
    Output out;
    out.status = cfg.strict && unstable > 0 ? kUnstable : kOk;
    if (cfg.format == Format::csv) {
        out.text = csv.str();
        return out;
    }
    Json j{{"generator", generator(cfg)},
           {"topology", to_json(t)},
           {"B", B},
           {"max_sum_dof", to_string(max_dof)},
           {"trials_above_abs_B", above_b},
           {"unstable_trials", unstable},
           {"trials", std::move(rows)}};
    out.text = j.dump(2) + "\n";
    return out;
}

Output run_sweep(const ExperimentConfig& cfg)
{
    std::ostringstream csv;
    csv << dof_csv_header(cfg.decimal) << ",canonical_per_user,bound_per_user,tight\n";
    Json rows = Json::array();
    for (int L : cfg.sweep_L) {
        const int K = cfg.K_multiple * (L + 2);
        const Topology t = make_locally_connected(K, L, cfg.mode);
        const auto best = optimal_tdma(t, cfg.M);
        const auto canon = canonical_tdma(t);
        std::string bound_text;
        std::string tight;
        if (cfg.with_bound && K <= kBestAssignmentMaxUsers) {
            const auto bound = best_assignment_upper_bound(t);
            Rational per_user = bound.value / K;
            per_user.canonicalize();
            bound_text = to_string(per_user);
            tight = bound.value == best.result.sum_dof ? "true" : "false";
        }
        csv << dof_csv_row(t, cfg.M, best.result.sum_dof, cfg.decimal) << ',' << to_string(canon.result.per_user)
            << ',' << bound_text << ',' << tight << '\n';
        Json row{{"K", K},
                 {"L", L},
                 {"mode", to_string(cfg.mode)},
                 {"M", cfg.M},
                 {"per_user", to_string(best.result.per_user)},
                 {"canonical_per_user", to_string(canon.result.per_user)}};
        if (!bound_text.empty()) {
            row["bound_per_user"] = bound_text;
            row["tight"] = tight == "true";
        }
        rows.push_back(std::move(row));
    }
    if (cfg.format == Format::csv) return {csv.str()};
    Json j{{"generator", generator(cfg)}, {"rows", std::move(rows)}};
    return {j.dump(2) + "\n"};
}

Output dispatch(const ExperimentConfig& cfg)
{
    switch (cfg.command) {
    case Command::topology: return run_topology(cfg);
    case Command::tdma_search: {
        const Topology t = make_topology(cfg);
        return emit_plan(cfg, t, optimal_tdma(t, cfg.M), cfg.M);
    }
    case Command::tdma_canonical: {
        const Topology t = make_topology(cfg);
        return emit_plan(cfg, t, canonical_tdma(t), 1);
    }
    case Command::demand_bound: return run_demand_bound(cfg);
    case Command::lin_eval: return run_lin_eval(cfg);
    case Command::converse_sample: return run_converse_sample(cfg);
    case Command::lemma1: return run_lemma1(cfg);
    case Command::sweep: return run_sweep(cfg);
    }
    return {};
}

} // namespace

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& diag)
{
    Output result;
    try {
        result = dispatch(cfg);
    } catch (const ResourceLimit& e) {
        diag << "dofkit: resource limit: " << e.what() << '\n';
        return kResourceLimit;
    } catch (const InvalidParameter& e) {
        diag << "dofkit: invalid input: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        diag << "dofkit: error: " << e.what() << '\n';
        return kInternalError;
    }

    std::string path = cfg.output;
    if (path.empty()) {
        if (const char* dir = std::getenv("DOFKIT_OUT_DIR"); dir && *dir) {
            path = std::string(dir) + "/" + to_string(cfg.command) + (cfg.format == Format::csv ? ".csv" : ".json");
        }
    }
    if (path.empty()) {
        out << result.text;
    } else {
        std::ofstream file(path, std::ios::binary);
        if (!file) {
            diag << "dofkit: cannot write '" << path << "'\n";
            return kInternalError;
        }
        file << result.text;
    }
    if (result.status == kUnstable) diag << "dofkit: instability warning escalated by --strict\n";
    return result.status;
}

} // namespace dofkit::cli
