#include "sigbound/cli.hpp"

#include "sigbound/dftlayer.hpp"
#include "sigbound/error.hpp"
#include "sigbound/labelspace.hpp"
#include "sigbound/linalg.hpp"
#include "sigbound/metrics.hpp"
#include "sigbound/oracle.hpp"
#include "sigbound/reportio.hpp"
#include "sigbound/verifier.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sigbound::cli {
namespace {

using io::json;

struct Usage : Error {
    using Error::Error;
};

std::uint64_t as_count(double value, const std::string& flag) {
    if (!(value >= 0.0) || value != std::floor(value) || value > 1.8e19) {
        throw Usage(flag + " must be a nonnegative integer");
    }
    return static_cast<std::uint64_t>(value);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot write " + path);
    file << text;
}

io::ReportEnvelope envelope(const std::string& command, json config, bool deterministic) {
    io::ReportEnvelope r;
    r.command = command;
    r.config = std::move(config);
    if (!deterministic) r.timestamp = io::utc_timestamp();
    return r;
}

struct CountArgs {
    std::uint64_t n = 0;
    std::uint64_t d = 0;
    std::uint64_t k = 0;
    std::string kind;
};

struct DftArgs {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t s = 0;
    std::uint64_t seed = 0;
    std::string preset;
    std::string out = "-";
};

struct LpArgs {
    double eps = 1e-8;
    double box = 1e4;
    double feas_tol = 1e-9;

    LpConfig config() const { return LpConfig{box, eps, feas_tol}; }
};

struct CheckArgs {
    std::string matrix;
    double tau_det = kDefaultDetTolerance;
    double budget = static_cast<double>(kDefaultMinorBudget);
    std::string out = "-";
    bool deterministic = false;
};

struct VerifyArgs {
    std::string matrix;
    std::string labels;
    LpArgs lp;
    std::size_t jobs = 1;
    std::string out = "-";
    bool deterministic = false;
};

struct EnumerateArgs {
    std::string matrix;
    double budget = static_cast<double>(kDefaultSampleBudget);
    std::uint64_t seed = 0;
    std::string method = "auto";
    std::size_t jobs = 1;
    std::string out = "-";
    bool deterministic = false;
};

struct RadiiArgs {
    std::string matrix;
    std::size_t k = 1;
    std::string kind = "active";
    std::vector<double> percentiles{1.0, 5.0, 50.0, 100.0};
    LpArgs lp;
    std::size_t jobs = 1;
    double budget = static_cast<double>(kDefaultEnumerationBudget);
    std::string out = "-";
    bool deterministic = false;
};

struct MetricsArgs {
    std::string scores;
    std::string gold;
    std::vector<std::size_t> ks{8, 10};
    double threshold = 0.5;
    std::string averaging = "pr";
    std::string out = "-";
    bool deterministic = false;
};

void add_lp_flags(CLI::App* cmd, LpArgs& lp) {
    cmd->add_option("--eps", lp.eps, "Smallest certified Chebyshev radius")->capture_default_str();
    cmd->add_option("--box", lp.box, "Box bound on every feature |x_j|")->capture_default_str();
    cmd->add_option("--feas-tol", lp.feas_tol, "Solver feasibility tolerance")
        ->capture_default_str();
}

int do_count(const CountArgs& a, std::ostream& out) {
    BigInt value;
    if (a.kind.empty()) {
        if (a.d == 0) throw Usage("count needs --d (cover count) or --k with --kind");
        value = cover_count(a.n, a.d);
    } else {
        const auto kind = parse_family_kind(a.kind);
        if (!kind) throw Usage("--kind must be 'active' or 'alternating'");
        try {
            value = count_family(FamilySpec{a.n, a.k, *kind});
        } catch (const DomainError& e) {
            throw Usage(e.what());
        }
    }
    out << value.str() << "\n";
    return kSuccess;
}

int do_dft(DftArgs a, std::ostream& out) {
    if (!a.preset.empty()) {
        const auto presets = dft_presets();
        const auto it = std::find_if(presets.begin(), presets.end(),
                                     [&](const DftPreset& p) { return p.name == a.preset; });
        if (it == presets.end()) throw Usage("unknown preset '" + a.preset + "'");
        if (a.k == 0) a.k = it->k;
        if (a.n == 0) a.n = it->n;
    }
    if (a.n == 0 || a.k == 0) throw Usage("dft needs --n and --k (or a preset supplying them)");
    const DftSpec spec{a.n, a.k, a.s, a.seed};
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw Usage(e.what());
    }
    const WeightMatrix w = build_layer_matrix(spec);
    if (a.out.empty() || a.out == "-") {
        out << io::matrix_to_csv(w.values());
    } else {
        io::write_matrix(a.out, w);
    }
    return kSuccess;
}

int do_check(const CheckArgs& a, std::ostream& out) {
    const WeightMatrix w = io::parse_matrix(a.matrix);
    const std::uint64_t budget = as_count(a.budget, "--budget");
    const GrStatus status = gr_plus_status(w, a.tau_det, budget);
    const bool gp = is_general_position(w, a.tau_det, budget);
    auto report = envelope("check", {{"tau_det", a.tau_det}, {"minor_budget", budget}},
                           a.deterministic);
    report.payload["matrix"] = io::matrix_summary_json(w);
    report.payload["gr_plus"] = io::gr_status_json(status, gp, a.tau_det);
    emit(io::serialize(report), a.out, out);
    return kSuccess;
}

int do_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    const WeightMatrix w = io::parse_matrix(a.matrix);
    const auto ys = io::parse_labels(a.labels);
    const LpConfig cfg = a.lp.config();
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw Usage(e.what());
    }
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i].size() != w.n()) {
            throw ParseError(a.labels, 0, 0,
                             "assignment " + std::to_string(i + 1) + " has " +
                                 std::to_string(ys[i].size()) + " labels, matrix has " +
                                 std::to_string(w.n()) + " rows");
        }
    }
    const BatchResult batch = verify_batch(w, ys, cfg, a.jobs);

    json config = io::lp_config_to_json(cfg);
    config["jobs"] = a.jobs;
    config["matrix_path"] = a.matrix;
    config["labels_path"] = a.labels;
    auto report = envelope("verify", config, a.deterministic);
    report.payload["matrix"] = io::matrix_summary_json(w);
    json results = json::array();
    for (std::size_t i = 0; i < batch.results.size(); ++i) {
        results.push_back(io::verify_result_json(i, batch.results[i], !a.deterministic));
    }
    report.payload["results"] = std::move(results);
    report.payload["summary"] = io::batch_summary_json(batch.summary);
    emit(io::serialize(report), a.out, out);

    const auto& s = batch.summary;
    err << "verified " << ys.size() << " assignments: " << s.argmaxable << " argmaxable, "
        << s.not_eps << " not eps-argmaxable, " << s.indeterminate << " indeterminate\n";
    if (s.not_eps > 0) return kUnargmaxableFound;
    if (s.indeterminate > 0) return kIndeterminateFound;
    return kSuccess;
}

int do_enumerate(const EnumerateArgs& a, std::ostream& out) {
    const WeightMatrix w = io::parse_matrix(a.matrix);
    const std::uint64_t budget = as_count(a.budget, "--budget");
    RegionSet regions;
    std::string method = a.method;
    if (method == "auto") method = w.d() == 2 ? "exact2d" : "sampled";
    if (method == "exact2d") {
        try {
            regions = enumerate_regions_2d(w);
        } catch (const DegeneracyError& e) {
            throw ParseError(a.matrix, 0, 0, e.what());
        } catch (const DomainError& e) {
            throw Usage(e.what());
        }
    } else if (method == "sampled") {
        if (w.n() > 64) throw Usage("sampled enumeration supports n <= 64");
        regions = enumerate_regions_sampled(w, budget, a.seed, a.jobs);
    } else {
        throw Usage("--method must be auto, exact2d or sampled");
    }
    auto report = envelope("enumerate",
                           {{"method", method}, {"budget", budget}, {"seed", a.seed},
                            {"jobs", a.jobs}, {"matrix_path", a.matrix}},
                           a.deterministic);
    json payload = io::region_set_json(regions);
    // Sample counts from racing workers are not reproducible.
    if (a.deterministic && a.jobs > 1) payload["samples_used"] = nullptr;
    for (auto& [key, value] : payload.items()) report.payload[key] = value;
    emit(io::serialize(report), a.out, out);
    return kSuccess;
}

int do_radii(const RadiiArgs& a, std::ostream& out) {
    const WeightMatrix w = io::parse_matrix(a.matrix);
    const auto kind = parse_family_kind(a.kind);
    if (!kind) throw Usage("--kind must be 'active' or 'alternating'");
    const FamilySpec family{w.n(), a.k, *kind};
    try {
        family.validate();
        a.lp.config().validate();
        for (double p : a.percentiles) {
            if (!(p >= 0.0 && p <= 100.0)) throw DomainError("percentiles must lie in [0, 100]");
        }
    } catch (const DomainError& e) {
        throw Usage(e.what());
    }
    const RadiusReport rr = radius_report(w, family, a.lp.config(), a.percentiles, a.jobs,
                                          as_count(a.budget, "--budget"));
    json config = io::lp_config_to_json(a.lp.config());
    config["family"] = {{"n", family.n}, {"k", family.k}, {"kind", a.kind}};
    config["percentiles"] = a.percentiles;
    config["jobs"] = a.jobs;
    auto report = envelope("radii", config, a.deterministic);
    report.payload["matrix"] = io::matrix_summary_json(w);
    json table = json::array();
    for (const auto& row : rr.rows) table.push_back({{"percentile", row.percentile}, {"radius", row.radius}});
    report.payload["table"] = std::move(table);
    report.payload["members"] = rr.sorted_radii.size();
    report.payload["summary"] = io::batch_summary_json(rr.summary);
    emit(io::serialize(report), a.out, out);
    return kSuccess;
}

int do_metrics(const MetricsArgs& a, std::ostream& out) {
    const Matrix scores = io::parse_scores(a.scores);
    const auto gold = io::parse_labels(a.gold);
    std::vector<PredictionRecord> records;
    try {
        records = io::make_records(scores, gold);
    } catch (const Error& e) {
        throw ParseError(a.scores, 0, 0, e.what());
    }
    if (records.empty()) throw ParseError(a.scores, 0, 0, "no records");
    if (a.averaging != "pr" && a.averaging != "record") {
        throw Usage("--averaging must be 'pr' or 'record'");
    }
    json at_k = json::array();
    for (std::size_t k : a.ks) {
        if (k == 0 || k > records.front().gold.size()) {
            throw Usage("--k values must lie in [1, n]");
        }
        const AtKMetrics m = prec_rec_f1_at_k(records, k);
        const NdcgMetrics nd = ndcg_at_k(records, k);
        at_k.push_back({{"k", k},
                        {"precision", m.precision},
                        {"recall", m.recall},
                        {"f1", a.averaging == "pr" ? m.f1 : m.f1_per_record},
                        {"f1_averaged_pr", m.f1},
                        {"f1_per_record", m.f1_per_record},
                        {"empty_gold", m.empty_gold},
                        {"ndcg", nd.value},
                        {"ndcg_skipped", nd.skipped}});
    }
    const F1Metrics f1 = micro_macro_f1(records, a.threshold);
    auto report = envelope("metrics",
                           {{"ks", a.ks}, {"threshold", a.threshold}, {"averaging", a.averaging},
                            {"scores_path", a.scores}, {"gold_path", a.gold}},
                           a.deterministic);
    report.payload["records"] = records.size();
    report.payload["at_k"] = std::move(at_k);
    report.payload["micro_f1"] = f1.micro;
    report.payload["macro_f1"] = f1.macro;
    report.payload["zero_support_labels"] = f1.zero_support_labels;
    emit(io::serialize(report), a.out, out);
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sigbound: argmaxability certificates and DFT output layers for sigmoid "
                 "multi-label classifiers"};
    app.require_subcommand(1);

    CountArgs count_args;
    auto* count = app.add_subcommand("count", "Count argmaxable regions or family members");
    count->add_option("--n", count_args.n, "Number of labels")->required();
    count->add_option("--d", count_args.d, "Feature dimension (region count of a general-position W)");
    count->add_option("--k", count_args.k, "Family bound k")->capture_default_str();
    count->add_option("--kind", count_args.kind, "Family kind: active | alternating");

    DftArgs dft_args;
    auto* dft = app.add_subcommand("dft", "Build a truncated DFT weight matrix (+ slack)");
    dft->add_option("--n", dft_args.n, "Number of labels");
    dft->add_option("--k", dft_args.k, "Highest frequency / max active labels");
    dft->add_option("--s", dft_args.s, "Slack columns")->capture_default_str();
    dft->add_option("--seed", dft_args.seed, "Slack RNG seed")->capture_default_str();
    dft->add_option("--preset", dft_args.preset, "Preset: mimic3 | bioasq | openimages");
    dft->add_option("--out", dft_args.out, "CSV path (sidecar written to <path>.json); - for stdout")
        ->capture_default_str();

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "General position and Gr+ status of a matrix");
    check->add_option("--matrix", check_args.matrix, "Matrix CSV")->required();
    check->add_option("--tau-det", check_args.tau_det, "Relative minor tolerance")
        ->capture_default_str();
    check->add_option("--budget", check_args.budget, "Maximum number of minors")
        ->capture_default_str();
    check->add_option("--out", check_args.out, "Report path; - for stdout")->capture_default_str();
    check->add_flag("--deterministic", check_args.deterministic, "Omit timestamps");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Certify label assignments with the Chebyshev LP");
    verify->add_option("--matrix", verify_args.matrix, "Matrix CSV")->required();
    verify->add_option("--labels", verify_args.labels, "Label file")->required();
    add_lp_flags(verify, verify_args.lp);
    verify->add_option("--jobs", verify_args.jobs, "Worker threads (0 = all cores)")
        ->capture_default_str();
    verify->add_option("--out", verify_args.out, "Report path; - for stdout")->capture_default_str();
    verify->add_flag("--deterministic", verify_args.deterministic, "Omit timestamps and timings");

    EnumerateArgs enum_args;
    auto* enumerate = app.add_subcommand("enumerate", "Enumerate achievable sign vectors");
    enumerate->add_option("--matrix", enum_args.matrix, "Matrix CSV")->required();
    enumerate->add_option("--budget", enum_args.budget, "Sample budget")->capture_default_str();
    enumerate->add_option("--seed", enum_args.seed, "Sampling seed")->capture_default_str();
    enumerate->add_option("--method", enum_args.method, "auto | exact2d | sampled")
        ->capture_default_str();
    enumerate->add_option("--jobs", enum_args.jobs, "Sampling workers")->capture_default_str();
    enumerate->add_option("--out", enum_args.out, "Report path; - for stdout")->capture_default_str();
    enumerate->add_flag("--deterministic", enum_args.deterministic, "Omit timestamps");

    RadiiArgs radii_args;
    auto* radii = app.add_subcommand("radii", "Chebyshev radius percentiles over a label family");
    radii->add_option("--matrix", radii_args.matrix, "Matrix CSV")->required();
    radii->add_option("--k", radii_args.k, "Family bound k")->capture_default_str();
    radii->add_option("--kind", radii_args.kind, "active | alternating")->capture_default_str();
    radii->add_option("--percentiles", radii_args.percentiles, "Percentiles in [0,100]")
        ->delimiter(',')
        ->capture_default_str();
    add_lp_flags(radii, radii_args.lp);
    radii->add_option("--jobs", radii_args.jobs, "Worker threads")->capture_default_str();
    radii->add_option("--budget", radii_args.budget, "Maximum family size")->capture_default_str();
    radii->add_option("--out", radii_args.out, "Report path; - for stdout")->capture_default_str();
    radii->add_flag("--deterministic", radii_args.deterministic, "Omit timestamps");

    MetricsArgs metrics_args;
    auto* metrics = app.add_subcommand("metrics", "Multi-label metrics over a score file");
    metrics->add_option("--scores", metrics_args.scores, "Score CSV, one record per line")
        ->required();
    metrics->add_option("--gold", metrics_args.gold, "Gold label file")->required();
    metrics->add_option("--k", metrics_args.ks, "Cutoffs")->delimiter(',')->capture_default_str();
    metrics->add_option("--threshold", metrics_args.threshold, "Decision threshold for micro/macro F1")
        ->capture_default_str();
    metrics->add_option("--averaging", metrics_args.averaging,
                        "F1@k from averaged P/R (pr) or mean per-record F1 (record)")
        ->capture_default_str();
    metrics->add_option("--out", metrics_args.out, "Report path; - for stdout")->capture_default_str();
    metrics->add_flag("--deterministic", metrics_args.deterministic, "Omit timestamps");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) target = sub;
        out << target->help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) target = sub;
        err << "error: " << e.what() << "\n\n" << target->help();
        return kUsageError;
    }

    try {
        if (*count) return do_count(count_args, out);
        if (*dft) return do_dft(dft_args, out);
        if (*check) return do_check(check_args, out);
        if (*verify) return do_verify(verify_args, out, err);
        if (*enumerate) return do_enumerate(enum_args, out);
        if (*radii) return do_radii(radii_args, out);
        if (*metrics) return do_metrics(metrics_args, out);
    } catch (const Usage& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kUsageError;
}

}  // namespace sigbound::cli
