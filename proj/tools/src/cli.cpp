#include "evqc_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "evqc/adversary.hpp"
#include "evqc/engine.hpp"
#include "evqc/error.hpp"
#include "evqc/funcspace.hpp"
#include "evqc/meas_structure.hpp"
#include "evqc/timedomain.hpp"

namespace evqc::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr unsigned kSurveyMaxBits = 3;
constexpr unsigned kSearchGuardBits = 3;

// Where a BoolFunc comes from: a truth-table file, or a class plus seed.
struct FunctionArgs {
    std::string path;
    std::string cls;
    unsigned n = 0;
};

struct Common {
    std::uint64_t seed = 0;
    std::string out;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json system_json(const SpinSystem &sys) {
    json couplings = json::array();
    for (const auto &c : sys.couplings()) couplings.push_back({c.i, c.j, c.J});
    return json{{"n", sys.n()}, {"omega", sys.omega()}, {"theta", sys.theta()}, {"couplings", couplings}};
}

BoolFunc random_balanced(unsigned n, std::uint64_t seed) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(size / 2);
    std::sort(idx.begin(), idx.end());
    return BoolFunc::from_ones(n, idx);
}

bool has_function(const FunctionArgs &a) { return !a.path.empty() || !a.cls.empty(); }

BoolFunc resolve_function(const FunctionArgs &a, std::uint64_t seed, json &config) {
    if (!a.path.empty() && !a.cls.empty()) {
        throw CLI::ValidationError("--fn and --class are mutually exclusive");
    }
    if (!a.path.empty()) {
        auto f = parse_truth_table(read_file(a.path));
        config["function"] = {{"source", a.path}, {"n", f.bits()}, {"hex", to_hex(f)}};
        return f;
    }
    if (a.cls.empty()) {
        throw CLI::ValidationError("give a function with --fn <path> or --class <name> --n <bits>");
    }
    if (a.n == 0) {
        throw CLI::ValidationError("--class needs --n");
    }
    std::optional<BoolFunc> f;
    if (a.cls == "constant") {
        f = BoolFunc::constant(a.n, false);
    } else if (a.cls == "balanced") {
        f = random_balanced(a.n, seed);
    } else {
        f = sample_cn(a.n, seed);
    }
    config["function"] = {{"class", a.cls}, {"n", a.n}, {"seed", seed}, {"hex", to_hex(*f)}};
    return *f;
}

SpinSystem resolve_system(const std::string &path, unsigned spins) {
    if (!path.empty()) return load_spin_system(path);
    return default_spin_system(spins);
}

void emit(const Common &common, const json &record, std::ostream &out) {
    const std::string line = record.dump() + "\n";
    if (common.out.empty()) {
        out << line;
    } else {
        write_file_atomic(common.out, line);
    }
}

Operator parse_measure(const std::string &spec, unsigned n) {
    if (spec == "fx") return total_spin(n, Axis::X);
    if (spec == "fy") return total_spin(n, Axis::Y);
    if (spec.starts_with("ixj:")) {
        unsigned i = 0;
        try {
            std::size_t used = 0;
            i = static_cast<unsigned>(std::stoul(spec.substr(4), &used));
            if (used != spec.size() - 4) throw std::invalid_argument(spec);
        } catch (const std::exception &) {
            throw CLI::ValidationError("--measure ixj:<i> needs an integer spin index");
        }
        return single_spin(n, i, Axis::X);
    }
    throw CLI::ValidationError("--measure must be fx, fy or ixj:<i>");
}

void add_function_options(CLI::App *cmd, FunctionArgs &fa) {
    cmd->add_option("--fn", fa.path, "Truth-table file (n=<bits> header, then 0/1 or 0x hex)");
    cmd->add_option("--class", fa.cls, "Function class to draw from")
        ->check(CLI::IsMember({"constant", "balanced", "cn"}));
    cmd->add_option("--n", fa.n, "Function width in bits (with --class)")->check(CLI::Range(1U, kMaxFunctionBits));
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
    FunctionArgs fn;
    std::string protocol;
    std::string sys;
    double eps = 0.0;
    double alpha = 1.0;
};

int cmd_classify(const ClassifyArgs &a, const Common &common, std::ostream &out, std::ostream &err) {
    json config{{"protocol", a.protocol}, {"eps", a.eps}, {"seed", common.seed}};
    const auto f = resolve_function(a.fn, common.seed, config);
    const Resolution eps(a.eps);
    Verdict v;
    if (a.protocol == "pseudopure") {
        if (!(a.alpha > 0.0 && a.alpha <= 1.0)) {
            err << "warning: alpha = " << a.alpha << " lies outside (0, 1]\n";
        }
        config["alpha"] = a.alpha;
        v = dj_decide_pseudopure(f, a.alpha, eps);
    } else if (a.protocol == "cn-thermal") {
        const auto sys = resolve_system(a.sys, f.bits());
        config["system"] = system_json(sys);
        v = cn_decide_thermal(f, sys, eps);
    } else {
        const auto sys = resolve_system(a.sys, f.bits() + 1);
        config["system"] = system_json(sys);
        v = dj_decide_lifted(f, sys, eps);
    }
    json record{{"command", "classify"},
                {"config", config},
                {"verdict",
                 {{"decided", std::string(to_string(v.decided))},
                  {"expectation", v.expectation},
                  {"constant_reference", v.gap_reference},
                  {"class_reference", v.class_reference},
                  {"lambda", v.lambda},
                  {"margin", v.resolution.epsilon() * v.lambda},
                  {"n", v.n}}}};
    emit(common, record, out);
    return v.decided == Decision::Inconclusive ? kExitUndecided : kExitOk;
}

// ---------------------------------------------------------------------------

struct SurveyArgs {
    unsigned n = 0;
    std::string cls = "all";
    std::string setup = "projector";
    std::string sys;
    std::string csv;
};

int cmd_survey(const SurveyArgs &a, const Common &common, std::ostream &out, std::ostream &) {
    if (a.n > kSurveyMaxBits) {
        throw Infeasible("exhaustive survey is limited to n <= " + std::to_string(kSurveyMaxBits) + " (n = " +
                         std::to_string(a.n) + " means 2^" + std::to_string(std::size_t{1} << a.n) +
                         " truth tables)");
    }
    json config{{"n", a.n}, {"class", a.cls}, {"setup", a.setup}, {"seed", common.seed}};

    std::vector<BoolFunc> fns;
    if (a.cls == "all") {
        const std::size_t size = std::size_t{1} << a.n;
        for (std::uint64_t t = 0; t < (std::uint64_t{1} << size); ++t) {
            // Same lexicographic order as the class enumerator: f(0) leads.
            fns.push_back(BoolFunc::from_predicate(a.n, [&](std::size_t j) { return (t >> (size - 1 - j)) & 1U; }));
        }
    } else {
        const auto cls = parse_function_class(a.cls);
        fns = collect_class(a.n, *cls);
    }

    std::optional<Operator> m;
    std::optional<DensityMatrix> rho;
    double constant_prediction = 0.0;
    if (a.setup == "projector") {
        m = w_projector(a.n);
        rho = pure_w(a.n);
    } else {
        const auto sys = resolve_system(a.sys, a.n);
        config["system"] = system_json(sys);
        m = total_spin(a.n, Axis::X);
        rho = pulsed_thermal(sys);
        constant_prediction =
            -sys.theta() / 4.0 * std::accumulate(sys.omega().begin(), sys.omega().end(), 0.0);
    }

    const double big_n = std::ldexp(1.0, static_cast<int>(a.n));
    std::ostringstream table;
    table << "f,imbalance,expectation,class,predicted,match\n";
    json rows = json::array();
    std::size_t checked = 0;
    std::size_t matched = 0;
    double worst = 0.0;
    for (const auto &f : fns) {
        const double e = expectation(*m, *rho, f);
        const auto imb = imbalance(f);
        const auto cls = classify(f);
        std::optional<double> predicted;
        if (a.setup == "projector") {
            predicted = 4.0 * static_cast<double>(imb * imb) / (big_n * big_n);
        } else if (cls == FunctionClass::ClassCN) {
            predicted = 0.0;
        } else if (cls == FunctionClass::Constant) {
            predicted = constant_prediction;
        }
        std::optional<bool> match;
        if (predicted) {
            const double dev = std::abs(e - *predicted);
            worst = std::max(worst, dev);
            match = dev <= 1e-10 * std::max(1.0, std::abs(*predicted));
            ++checked;
            matched += *match ? 1 : 0;
        }
        table << to_hex(f) << ',' << imb << ',' << fmt(e) << ',' << to_string(cls) << ','
              << (predicted ? fmt(*predicted) : "") << ',' << (match ? (*match ? "1" : "0") : "") << '\n';
        rows.push_back({{"f", to_hex(f)},
                        {"imbalance", imb},
                        {"expectation", e},
                        {"class", std::string(to_string(cls))},
                        {"predicted", predicted ? json(*predicted) : json(nullptr)},
                        {"match", match ? json(*match) : json(nullptr)}});
    }
    json record{{"command", "survey"},
                {"config", config},
                {"rows", fns.size()},
                {"checked", checked},
                {"matched", matched},
                {"max_deviation", worst}};
    if (a.csv.empty()) {
        record["table"] = rows;
    } else {
        write_file_atomic(a.csv, table.str());
        record["csv"] = a.csv;
    }
    emit(common, record, out);
    return matched == checked ? kExitOk : kExitUndecided;
}

// ---------------------------------------------------------------------------

struct SearchArgs {
    unsigned n = 0;
    std::size_t budget = SearchOptions{}.budget;
    std::size_t restarts = SearchOptions{}.restarts;
    unsigned threads = 0;
    bool allow_large = false;
    std::string dump;
};

int cmd_search(const SearchArgs &a, const Common &common, std::ostream &out, std::ostream &) {
    if (a.n > kSearchGuardBits && !a.allow_large) {
        throw CLI::ValidationError("search-c is guarded at n <= " + std::to_string(kSearchGuardBits) +
                                   "; pass --allow-large to go further");
    }
    SearchOptions opt;
    opt.budget = a.budget;
    opt.restarts = a.restarts;
    opt.seed = common.seed;
    opt.threads = a.threads;
    const auto r = search_max_c_ratio(a.n, opt);
    const auto m = reconstruct(r.best);
    if (!a.dump.empty()) {
        write_file_atomic(a.dump, operator_dump(m));
    }
    json record{{"command", "search-c"},
                {"config",
                 {{"n", a.n},
                  {"budget", opt.budget},
                  {"restarts", opt.restarts},
                  {"seed", opt.seed},
                  {"feasibility_tol", opt.feasibility_tol},
                  {"polish_tol", opt.polish_tol}}},
                {"feasible", r.feasible},
                {"ratio", r.ratio},
                {"c", r.best.c},
                {"lambda", spectral_range(m)},
                {"residual", r.residual},
                {"evaluations", r.evaluations},
                {"best_restart", r.best_restart},
                {"d", std::vector<double>(r.best.d.data(), r.best.d.data() + r.best.d.size())},
                {"a_upper", r.best.a_upper}};
    emit(common, record, out);
    return r.feasible ? kExitOk : kExitUndecided;
}

// ---------------------------------------------------------------------------

struct AdversaryArgs {
    unsigned n = 0;
    std::size_t trials = 1000;
};

int cmd_adversary(const AdversaryArgs &a, const Common &common, std::ostream &out, std::ostream &) {
    const auto r = verify_adversary(a.n, a.trials, common.seed);
    json failures = json::array();
    for (const auto &f : r.failures) {
        failures.push_back({{"trial", f.trial}, {"queried", f.queried}, {"reason", f.reason}});
    }
    json record{{"command", "adversary"},
                {"config", {{"n", a.n}, {"trials", a.trials}, {"seed", common.seed}}},
                {"passed", r.passed()},
                {"trials", r.trials},
                {"exhaustive", r.exhaustive},
                {"exhaustive_sets", r.exhaustive_sets},
                {"min_queries", min_queries(a.n)},
                {"failures", failures}};
    emit(common, record, out);
    return r.passed() ? kExitOk : kExitUndecided;
}

// ---------------------------------------------------------------------------

struct SignalArgs {
    FunctionArgs fn;
    std::string sys;
    unsigned n = 0;
    std::string state = "pulsed";
    std::string measure = "fx";
    double dt = 1e-4;
    std::size_t count = 1024;
    double threshold = kDefaultPeakThreshold;
    std::string trace_csv;
    std::string spectrum_csv;
};

int cmd_signal(const SignalArgs &a, const Common &common, std::ostream &out, std::ostream &) {
    if (a.sys.empty() && a.n == 0) {
        throw CLI::ValidationError("signal needs --sys <path> or --spins <n>");
    }
    const auto sys = resolve_system(a.sys, a.n);
    json config{{"system", system_json(sys)}, {"state", a.state}, {"measure", a.measure},
                {"dt", a.dt},           {"count", a.count},   {"seed", common.seed}};
    const auto m = parse_measure(a.measure, sys.n());
    DensityMatrix rho = a.state == "pulsed" ? pulsed_thermal(sys) : thermal_state(sys);
    if (has_function(a.fn)) {
        FunctionArgs fa = a.fn;
        if (fa.path.empty() && fa.n == 0) fa.n = sys.n();
        const auto f = resolve_function(fa, common.seed, config);
        if (f.bits() != sys.n()) {
            throw DimensionMismatch("function has " + std::to_string(f.bits()) + " bits but the system has " +
                                    std::to_string(sys.n()) + " spins");
        }
        const auto u = oracle(f);
        rho = DensityMatrix(u * rho.op() * u);
    }

    const auto trace = signal(rho, hamiltonian(sys), m, a.dt, a.count);
    const auto spec = spectrum(trace);
    const auto peaks = find_peaks(spec, a.threshold);

    double max_imag = 0.0;
    std::ostringstream tcsv;
    tcsv << "k,t,value\n";
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        max_imag = std::max(max_imag, std::abs(trace.samples[k].imag()));
        tcsv << k << ',' << fmt(trace.t_start + static_cast<double>(k) * trace.dt) << ','
             << fmt(trace.samples[k].real()) << '\n';
    }
    std::ostringstream scsv;
    scsv << "omega,magnitude\n";
    for (const auto &p : spec) scsv << fmt(p.omega) << ',' << fmt(p.magnitude) << '\n';
    if (!a.trace_csv.empty()) write_file_atomic(a.trace_csv, tcsv.str());
    if (!a.spectrum_csv.empty()) write_file_atomic(a.spectrum_csv, scsv.str());

    json jpeaks = json::array();
    for (const auto &p : peaks) jpeaks.push_back({{"omega", p.omega}, {"magnitude", p.magnitude}});
    json record{{"command", "signal"},
                {"config", config},
                {"samples", trace.samples.size()},
                {"first_sample", trace.samples.front().real()},
                {"max_imag", max_imag},
                {"peak_threshold", a.threshold},
                {"peaks", jpeaks}};
    if (!a.trace_csv.empty()) record["trace_csv"] = a.trace_csv;
    if (!a.spectrum_csv.empty()) record["spectrum_csv"] = a.spectrum_csv;
    emit(common, record, out);
    return kExitOk;
}

void add_common(CLI::App *cmd, Common &common) {
    cmd->add_option("--seed", common.seed, "64-bit seed for every random choice");
    cmd->add_option("--out", common.out, "Write the JSON report here instead of stdout");
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Expectation-value quantum computer simulator", "evqc"};
    app.require_subcommand(1);

    Common common;

    ClassifyArgs ca;
    auto *classify = app.add_subcommand("classify", "Run a classification protocol on one function");
    classify->add_option("--protocol", ca.protocol, "Protocol")
        ->required()
        ->check(CLI::IsMember({"pseudopure", "cn-thermal", "lifted"}));
    add_function_options(classify, ca.fn);
    classify->add_option("--sys", ca.sys, "Spin system JSON (default: built-in demo system)");
    classify->add_option("--eps", ca.eps, "Resolution epsilon")->required()->check(CLI::PositiveNumber);
    classify->add_option("--alpha", ca.alpha, "Pseudopure polarization (pseudopure protocol)");
    add_common(classify, common);

    SurveyArgs sa;
    auto *survey = app.add_subcommand("survey", "Tabulate E(f) over every function of a class");
    survey->add_option("--n", sa.n, "Function width in bits")->required()->check(CLI::Range(1U, kMaxFunctionBits));
    survey->add_option("--class", sa.cls, "Class filter")
        ->check(CLI::IsMember({"all", "constant", "balanced", "cn", "other"}));
    survey->add_option("--setup", sa.setup, "projector: M = rho = |w><w|; fx: M = F_x on the pulsed thermal state")
        ->check(CLI::IsMember({"projector", "fx"}));
    survey->add_option("--sys", sa.sys, "Spin system JSON for --setup fx");
    survey->add_option("--csv", sa.csv, "Write the table as CSV instead of embedding it");
    add_common(survey, common);

    SearchArgs sc;
    auto *search = app.add_subcommand("search-c", "Search for the largest |c|/Lambda isospectral with F_x");
    search->add_option("--n", sc.n, "Spin count")->required()->check(CLI::Range(1U, kMaxDenseSpins));
    search->add_option("--budget", sc.budget, "Eigen-decomposition budget")->check(CLI::PositiveNumber);
    search->add_option("--restarts", sc.restarts, "Independent restarts")->check(CLI::PositiveNumber);
    search->add_option("--threads", sc.threads, "Worker threads (0: hardware concurrency)");
    search->add_flag("--allow-large", sc.allow_large, "Lift the n <= 3 guard");
    search->add_option("--dump-op", sc.dump, "Write the best M as an operator dump");
    add_common(search, common);

    AdversaryArgs aa;
    auto *adversary = app.add_subcommand("adversary", "Check the classical query lower bound construction");
    adversary->add_option("--n", aa.n, "Function width in bits")->required()->check(CLI::Range(2U, 20U));
    adversary->add_option("--trials", aa.trials, "Random query sets");
    add_common(adversary, common);

    SignalArgs sg;
    auto *sig = app.add_subcommand("signal", "Time-domain signal and spectrum");
    sig->add_option("--sys", sg.sys, "Spin system JSON");
    sig->add_option("--spins", sg.n, "Use the built-in demo system with this many spins")
        ->check(CLI::Range(1U, kMaxDenseSpins));
    sig->add_option("--state", sg.state, "Initial state")->check(CLI::IsMember({"pulsed", "thermal"}));
    sig->add_option("--measure", sg.measure, "fx, fy or ixj:<i>");
    sig->add_option("--dt", sg.dt, "Sampling interval")->check(CLI::PositiveNumber);
    sig->add_option("--count", sg.count, "Number of samples")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
    sig->add_option("--peak-threshold", sg.threshold, "Relative peak threshold")->check(CLI::Range(0.0, 1.0));
    sig->add_option("--trace", sg.trace_csv, "Trace CSV path (k,t,value)");
    sig->add_option("--spectrum", sg.spectrum_csv, "Spectrum CSV path (omega,magnitude)");
    add_function_options(sig, sg.fn);
    add_common(sig, common);

    std::vector<std::string> argv_store{"evqc"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (classify->parsed()) return cmd_classify(ca, common, out, err);
        if (survey->parsed()) return cmd_survey(sa, common, out, err);
        if (search->parsed()) return cmd_search(sc, common, out, err);
        if (adversary->parsed()) return cmd_adversary(aa, common, out, err);
        if (sig->parsed()) return cmd_signal(sg, common, out, err);
    } catch (const CLI::Error &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Infeasible &e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitUndecided;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace evqc::cli
