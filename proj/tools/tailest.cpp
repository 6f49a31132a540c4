// tailest command line: tail index / scale / extreme quantile estimation,
// asymptotic planning (optimal level, AMSE curves, relative efficiencies),
// and the seeded Monte Carlo harness.
//
// Data rows go to --output (default stdout) in TSV (one '#' header line) or
// JSON; human-readable summaries, diagnostics, and warnings go to stderr
// only, so piped output stays machine-clean. Floats in machine output carry
// 17 significant digits (binary64 round-trip); summaries use 3 decimals.
//
// Exit codes: 0 success; 2 domain error (bad parameter, level, or sample);
// 3 I/O or parse error; other non-zero codes come from flag parsing.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tailest/tailest.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using tailest::Convention;
using tailest::EstimatorKind;
using tailest::format_full;

// Writes either to a file or to stdout ("-").
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (path == "-") {
            out_ = &std::cout;
        } else {
            file_.open(path);
            if (!file_)
                throw tailest::error("cannot open output file: " + path);
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

tailest::Sample load_sample(const std::string& path) {
    if (path == "-")
        return tailest::read_sample_stream(std::cin, "<stdin>", &std::cerr);
    return tailest::read_sample(path, &std::cerr);
}

std::string human(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

const std::map<std::string, EstimatorKind> kTailEstimators{
    {"hill", EstimatorKind::hill}, {"plpwm", EstimatorKind::plpwm}};
const std::map<std::string, EstimatorKind> kAllEstimators{
    {"hill", EstimatorKind::hill},
    {"plpwm", EstimatorKind::plpwm},
    {"ppwm", EstimatorKind::ppwm}};
const std::map<std::string, Convention> kConventions{
    {"topk", Convention::topk},
    {"topk_plus_1", Convention::topk_plus_1},
    {"topk+1", Convention::topk_plus_1}};
const std::map<std::string, tailest::Family> kFamilies{
    {"pareto", tailest::Family::strict_pareto},
    {"strict_pareto", tailest::Family::strict_pareto},
    {"burr", tailest::Family::burr},
    {"frechet", tailest::Family::frechet},
    {"gpd", tailest::Family::gpd}};

// Options shared by the sample-reading subcommands.
struct SampleArgs {
    std::string input;
    std::string output = "-";
    std::string format = "tsv";
    EstimatorKind estimator = EstimatorKind::hill;
    Convention convention = Convention::topk;
};

void add_sample_args(CLI::App* cmd, SampleArgs& args, bool with_estimator = true) {
    cmd->add_option("--input,-i", args.input,
                    "input file, one value per line ('-' for stdin)")
        ->required();
    if (with_estimator)
        cmd->add_option("--estimator,-e", args.estimator, "tail estimator")
            ->transform(CLI::CheckedTransformer(kTailEstimators))
            ->required();
    cmd->add_option("--convention", args.convention,
                    "order statistics a plpwm level refers to")
        ->transform(CLI::CheckedTransformer(kConventions));
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"tsv", "json"}));
    cmd->add_option("--output,-o", args.output, "output file ('-' for stdout)");
}

// --- estimate -------------------------------------------------------------

void run_estimate(const SampleArgs& args, std::size_t k) {
    const tailest::Sample sample = load_sample(args.input);
    double gamma, scale;
    if (args.estimator == EstimatorKind::hill) {
        gamma = tailest::hill_evi(sample, k);
        scale = tailest::hill_scale(sample, k);
    } else {
        gamma = tailest::plpwm_evi(sample, k, args.convention);
        scale = tailest::plpwm_scale(sample, k, args.convention);
    }
    OutputTarget out(args.output);
    if (args.format == "tsv") {
        out.stream() << "# estimator\tk\tgamma\tscale\n"
                     << tailest::to_string(args.estimator) << '\t' << k << '\t'
                     << format_full(gamma) << '\t' << format_full(scale) << '\n';
    } else {
        tailest::ordered_json j{{"command", "estimate"},
                                {"estimator", tailest::to_string(args.estimator)},
                                {"convention", tailest::to_string(args.convention)},
                                {"k", k},
                                {"n", sample.size()},
                                {"gamma", gamma},
                                {"scale", scale}};
        out.stream() << j.dump(2) << '\n';
    }
    std::cerr << tailest::to_string(args.estimator) << " k=" << k
              << " (n=" << sample.size() << "): gamma=" << human(gamma)
              << " scale=" << human(scale) << "\n";
}

// --- kpath ----------------------------------------------------------------

void run_kpath(const SampleArgs& args, std::size_t k_min, std::size_t k_max,
               std::optional<double> p) {
    const tailest::Sample sample = load_sample(args.input);
    std::optional<tailest::QuantileSpec> spec;
    if (p) spec.emplace(*p);
    const tailest::EstimatePath path = tailest::estimate_path(
        sample, args.estimator, k_min, k_max, spec, args.convention);
    OutputTarget out(args.output);
    if (args.format == "tsv") {
        out.stream() << (spec ? "# k\testimate\tquantile\n" : "# k\testimate\n");
        for (const tailest::PathPoint& pt : path.points) {
            out.stream() << pt.k << '\t' << format_full(pt.estimate);
            if (pt.quantile) out.stream() << '\t' << format_full(*pt.quantile);
            out.stream() << '\n';
        }
    } else {
        tailest::ordered_json points = tailest::ordered_json::array();
        for (const tailest::PathPoint& pt : path.points) {
            tailest::ordered_json jp{{"k", pt.k}, {"estimate", pt.estimate}};
            if (pt.quantile) {
                jp["quantile"] = *pt.quantile;
                jp["interpolates"] = pt.interpolates;
            }
            points.push_back(jp);
        }
        tailest::ordered_json j{{"command", "kpath"},
                                {"estimator", tailest::to_string(args.estimator)},
                                {"convention", tailest::to_string(args.convention)},
                                {"n", sample.size()},
                                {"k_min", k_min},
                                {"k_max", k_max}};
        if (p) j["p"] = *p;
        j["points"] = points;
        out.stream() << j.dump(2) << '\n';
    }
    std::cerr << tailest::to_string(args.estimator) << " path k=" << k_min
              << ".." << k_max << " (n=" << sample.size() << "), "
              << path.points.size() << " levels\n";
}

// --- quantile -------------------------------------------------------------

void run_quantile(const SampleArgs& args, std::size_t k, double p) {
    const tailest::Sample sample = load_sample(args.input);
    const tailest::QuantileSpec spec(p);
    const tailest::QuantileEstimate q =
        args.estimator == EstimatorKind::hill
            ? tailest::weissman_hill_quantile(sample, k, spec)
            : tailest::plpwm_quantile(sample, k, spec, args.convention);
    const std::size_t k_eff =
        args.estimator == EstimatorKind::plpwm
            ? tailest::detail::effective_plpwm_level(k, args.convention)
            : k;
    const double cn = spec.c_n(k_eff, sample.size());
    if (q.interpolates)
        std::cerr << "warning: c_n = " << human(cn)
                  << " < 1: the target quantile lies inside the sample; "
                     "extrapolation is not the natural tool here\n";
    OutputTarget out(args.output);
    if (args.format == "tsv") {
        out.stream() << "# estimator\tk\tp\tquantile\tinterpolates\n"
                     << tailest::to_string(args.estimator) << '\t' << k << '\t'
                     << format_full(p) << '\t' << format_full(q.value) << '\t'
                     << (q.interpolates ? 1 : 0) << '\n';
    } else {
        tailest::ordered_json j{{"command", "quantile"},
                                {"estimator", tailest::to_string(args.estimator)},
                                {"convention", tailest::to_string(args.convention)},
                                {"k", k},
                                {"n", sample.size()},
                                {"p", p},
                                {"c_n", cn},
                                {"quantile", q.value},
                                {"interpolates", q.interpolates}};
        out.stream() << j.dump(2) << '\n';
    }
    std::cerr << tailest::to_string(args.estimator) << " k=" << k
              << " p=" << format_full(p) << ": quantile=" << human(q.value)
              << "\n";
}

// --- optimal-k ------------------------------------------------------------

void run_optimal_k(std::size_t n, EstimatorKind kind, double gamma, double rho,
                   double beta, const std::string& format,
                   const std::string& output) {
    const tailest::OptimalLevel lvl =
        tailest::optimal_k0(n, gamma, {rho, beta}, kind);
    if (lvl.clamped)
        std::cerr << "warning: optimal level " << human(lvl.k_real)
                  << " exceeds the largest admissible k; clamped to " << lvl.k
                  << "\n";
    OutputTarget out(output);
    if (format == "tsv") {
        // Bare integer: the number a pipeline wants, nothing else.
        out.stream() << lvl.k << '\n';
    } else {
        tailest::ordered_json j{{"command", "optimal_k"},
                                {"estimator", tailest::to_string(kind)},
                                {"n", n},
                                {"gamma", gamma},
                                {"rho", rho},
                                {"beta", beta},
                                {"k0", lvl.k},
                                {"k0_real", lvl.k_real},
                                {"clamped", lvl.clamped}};
        out.stream() << j.dump(2) << '\n';
    }
    std::cerr << "optimal k for " << tailest::to_string(kind) << " at n=" << n
              << ": " << lvl.k << " (un-floored " << human(lvl.k_real) << ")\n";
}

// --- areff ----------------------------------------------------------------

struct GridArgs {
    double single = 0.0;
    double min = 0.0, max = 0.0, step = 0.0;
    bool has_range = false;
};

void run_areff(EstimatorKind first, EstimatorKind second, const GridArgs& gamma,
               const GridArgs& rho, const std::string& format,
               const std::string& output) {
    const tailest::GridSpec gamma_grid =
        gamma.has_range ? tailest::GridSpec{gamma.min, gamma.max, gamma.step}
                        : tailest::GridSpec{gamma.single, gamma.single, 1.0};
    const tailest::GridSpec rho_grid =
        rho.has_range ? tailest::GridSpec{rho.min, rho.max, rho.step}
                      : tailest::GridSpec{rho.single, rho.single, 1.0};
    const std::vector<tailest::AreffPoint> points =
        tailest::areff_grid(first, second, gamma_grid, rho_grid);
    const bool with_gamma = gamma.has_range;
    OutputTarget out(output);
    if (format == "tsv") {
        out.stream() << (with_gamma ? "# gamma\trho\tareff\n" : "# rho\tareff\n");
        for (const tailest::AreffPoint& pt : points) {
            if (with_gamma) out.stream() << format_full(pt.gamma) << '\t';
            out.stream() << format_full(pt.rho) << '\t' << format_full(pt.value)
                         << '\n';
        }
    } else {
        tailest::ordered_json rows = tailest::ordered_json::array();
        for (const tailest::AreffPoint& pt : points) {
            tailest::ordered_json jp;
            if (with_gamma) jp["gamma"] = pt.gamma;
            jp["rho"] = pt.rho;
            jp["areff"] = pt.value;
            rows.push_back(jp);
        }
        tailest::ordered_json j{{"command", "areff"},
                                {"first", tailest::to_string(first)},
                                {"second", tailest::to_string(second)},
                                {"points", rows}};
        out.stream() << j.dump(2) << '\n';
    }
    std::cerr << "areff " << tailest::to_string(first) << " over "
              << tailest::to_string(second) << ": " << points.size()
              << " points\n";
}

// --- amse-curve -----------------------------------------------------------

void run_amse_curve(EstimatorKind kind, std::size_t n, double gamma, double rho,
                    double beta, std::size_t k_min, std::size_t k_max,
                    const std::string& format, const std::string& output) {
    if (k_min < 1 || k_min > k_max)
        throw tailest::level_error("amse-curve needs 1 <= k-min <= k-max");
    const tailest::SecondOrderParams so{rho, beta};
    const tailest::AsymptoticConstants c =
        tailest::constants_for(kind, gamma, so);
    OutputTarget out(output);
    tailest::ordered_json rows = tailest::ordered_json::array();
    if (format == "tsv") out.stream() << "# k\tvariance\tbias_sq\ttotal\n";
    for (std::size_t k = k_min; k <= k_max; ++k) {
        const double a = tailest::a_function(
            static_cast<double>(n) / static_cast<double>(k), gamma, so);
        const tailest::AmseParts parts = tailest::amse(c, k, a);
        if (format == "tsv")
            out.stream() << k << '\t' << format_full(parts.variance) << '\t'
                         << format_full(parts.bias_sq) << '\t'
                         << format_full(parts.total) << '\n';
        else
            rows.push_back({{"k", k},
                            {"variance", parts.variance},
                            {"bias_sq", parts.bias_sq},
                            {"total", parts.total}});
    }
    if (format == "json") {
        tailest::ordered_json j{{"command", "amse_curve"},
                                {"estimator", tailest::to_string(kind)},
                                {"n", n},
                                {"gamma", gamma},
                                {"rho", rho},
                                {"beta", beta},
                                {"points", rows}};
        out.stream() << j.dump(2) << '\n';
    }
    std::cerr << "amse curve for " << tailest::to_string(kind) << ", k=" << k_min
              << ".." << k_max << " at n=" << n << "\n";
}

// --- simulate -------------------------------------------------------------

void run_simulate(tailest::MonteCarloConfig config, unsigned threads,
                  bool strict_rate, const std::string& output) {
    const tailest::MonteCarloReport report =
        strict_rate ? tailest::quantile_rate_check(std::move(config), threads)
                    : tailest::run_monte_carlo(std::move(config), threads);
    OutputTarget out(output);
    out.stream() << tailest::to_json(report).dump(2) << '\n';
    for (const tailest::EstimateCell& cell : report.cells)
        std::cerr << tailest::to_string(cell.kind) << " k=" << cell.k
                  << ": bias=" << human(cell.bias)
                  << " var=" << human(cell.variance)
                  << " mse=" << human(cell.mse) << "\n";
    for (const tailest::QuantileCell& qc : report.quantile_cells)
        std::cerr << tailest::to_string(qc.kind) << " k=" << qc.k
                  << ": var(e_Q)/var(e_gamma)=" << human(qc.variance_ratio)
                  << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tail index, scale, and extreme quantile estimation"};
    app.set_version_flag("--version", std::string("tailest ") + kVersion);
    app.require_subcommand(1);

    // estimate
    SampleArgs est_args;
    std::size_t est_k = 0;
    CLI::App* est = app.add_subcommand(
        "estimate", "tail index and scale at one level k");
    add_sample_args(est, est_args);
    est->add_option("--k,-k", est_k, "number of top order statistics")
        ->required();

    // kpath
    SampleArgs kp_args;
    std::size_t kp_min = 0, kp_max = 0;
    std::optional<double> kp_p;
    CLI::App* kp = app.add_subcommand(
        "kpath", "estimates swept over a range of levels");
    add_sample_args(kp, kp_args);
    kp->add_option("--k-min", kp_min, "first level")->required();
    kp->add_option("--k-max", kp_max, "last level")->required();
    kp->add_option("--p", kp_p, "also estimate the p-tail quantile per level");

    // quantile
    SampleArgs q_args;
    std::size_t q_k = 0;
    double q_p = 0.0;
    CLI::App* qc = app.add_subcommand(
        "quantile", "extreme quantile at tail probability p");
    add_sample_args(qc, q_args);
    qc->add_option("--k,-k", q_k, "number of top order statistics")->required();
    qc->add_option("--p", q_p, "tail probability")->required();

    // optimal-k
    std::size_t ok_n = 0;
    double ok_gamma = 1.0, ok_rho = 0.0, ok_beta = 0.0;
    EstimatorKind ok_kind = EstimatorKind::hill;
    std::string ok_format = "tsv", ok_output = "-";
    CLI::App* ok = app.add_subcommand(
        "optimal-k", "AMSE-optimal number of top order statistics");
    ok->add_option("--n", ok_n, "sample size")->required();
    ok->add_option("--estimator,-e", ok_kind, "estimator")
        ->transform(CLI::CheckedTransformer(kAllEstimators))
        ->required();
    ok->add_option("--rho", ok_rho, "second-order rho (< 0)")->required();
    ok->add_option("--beta", ok_beta, "second-order beta (non-zero)")->required();
    ok->add_option("--gamma", ok_gamma,
                   "extreme value index (needed by ppwm constants)");
    ok->add_option("--format", ok_format)->check(CLI::IsMember({"tsv", "json"}));
    ok->add_option("--output,-o", ok_output);

    // areff
    EstimatorKind ar_first = EstimatorKind::plpwm;
    EstimatorKind ar_second = EstimatorKind::hill;
    GridArgs ar_gamma, ar_rho;
    ar_gamma.single = 1.0;
    std::string ar_format = "tsv", ar_output = "-";
    CLI::App* ar = app.add_subcommand(
        "areff", "asymptotic relative efficiency of one estimator over another");
    ar->add_option("--first", ar_first, "numerator estimator")
        ->transform(CLI::CheckedTransformer(kAllEstimators));
    ar->add_option("--second", ar_second, "reference estimator")
        ->transform(CLI::CheckedTransformer(kAllEstimators));
    ar->add_option("--rho", ar_rho.single, "single rho (< 0)");
    ar->add_option("--rho-min", ar_rho.min);
    ar->add_option("--rho-max", ar_rho.max);
    ar->add_option("--rho-step", ar_rho.step);
    ar->add_option("--gamma", ar_gamma.single, "single gamma");
    ar->add_option("--gamma-min", ar_gamma.min);
    ar->add_option("--gamma-max", ar_gamma.max);
    ar->add_option("--gamma-step", ar_gamma.step);
    ar->add_option("--format", ar_format)->check(CLI::IsMember({"tsv", "json"}));
    ar->add_option("--output,-o", ar_output);

    // amse-curve
    EstimatorKind am_kind = EstimatorKind::hill;
    std::size_t am_n = 0, am_kmin = 0, am_kmax = 0;
    double am_gamma = 0.0, am_rho = 0.0, am_beta = 0.0;
    std::string am_format = "tsv", am_output = "-";
    CLI::App* am = app.add_subcommand(
        "amse-curve", "asymptotic MSE decomposition over a level range");
    am->add_option("--estimator,-e", am_kind)
        ->transform(CLI::CheckedTransformer(kAllEstimators))
        ->required();
    am->add_option("--n", am_n, "sample size")->required();
    am->add_option("--gamma", am_gamma, "extreme value index")->required();
    am->add_option("--rho", am_rho, "second-order rho (< 0)")->required();
    am->add_option("--beta", am_beta, "second-order beta (non-zero)")->required();
    am->add_option("--k-min", am_kmin)->required();
    am->add_option("--k-max", am_kmax)->required();
    am->add_option("--format", am_format)->check(CLI::IsMember({"tsv", "json"}));
    am->add_option("--output,-o", am_output);

    // simulate
    std::string sim_family = "pareto";
    double sim_gamma = 1.0, sim_scale = 1.0, sim_burr_rho = 0.0;
    std::size_t sim_n = 0, sim_reps = 1000;
    std::uint64_t sim_seed = 42;
    std::vector<std::size_t> sim_k;
    std::size_t sim_kmin = 0, sim_kmax = 0, sim_kstep = 1;
    std::vector<std::string> sim_estimators{"hill", "plpwm"};
    std::optional<double> sim_p;
    unsigned sim_threads = 0;
    bool sim_strict_rate = false;
    std::string sim_output = "-", sim_format = "json";
    CLI::App* sim = app.add_subcommand(
        "simulate", "seeded Monte Carlo study of the estimators");
    sim->add_option("--family", sim_family, "model family")
        ->check(CLI::IsMember({"pareto", "strict_pareto", "burr", "frechet",
                               "gpd"}));
    sim->add_option("--gamma", sim_gamma, "extreme value index")->required();
    sim->add_option("--scale", sim_scale, "pareto scale constant");
    sim->add_option("--burr-rho", sim_burr_rho, "burr second-order rho (< 0)");
    sim->add_option("--n", sim_n, "sample size per replicate")->required();
    sim->add_option("--k", sim_k, "levels, comma separated")->delimiter(',');
    sim->add_option("--k-min", sim_kmin, "level range start");
    sim->add_option("--k-max", sim_kmax, "level range end");
    sim->add_option("--k-step", sim_kstep, "level range stride");
    sim->add_option("--replications,-R", sim_reps, "number of replicates");
    sim->add_option("--seed", sim_seed, "base seed");
    sim->add_option("--estimators", sim_estimators, "hill,plpwm subset")
        ->delimiter(',');
    sim->add_option("--p", sim_p, "tail probability for the quantile harness");
    sim->add_option("--threads", sim_threads, "worker threads (0 = all cores)");
    sim->add_flag("--strict-rate", sim_strict_rate,
                  "require c_n > e at every level (rate-check regime)");
    sim->add_option("--format", sim_format, "json only")
        ->check(CLI::IsMember({"json"}));
    sim->add_option("--output,-o", sim_output);

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) {
            run_estimate(est_args, est_k);
        } else if (kp->parsed()) {
            run_kpath(kp_args, kp_min, kp_max, kp_p);
        } else if (qc->parsed()) {
            run_quantile(q_args, q_k, q_p);
        } else if (ok->parsed()) {
            run_optimal_k(ok_n, ok_kind, ok_gamma, ok_rho, ok_beta, ok_format,
                          ok_output);
        } else if (ar->parsed()) {
            ar_gamma.has_range = ar->count("--gamma-min") != 0;
            ar_rho.has_range = ar->count("--rho-min") != 0;
            if (ar_rho.has_range &&
                (ar->count("--rho-max") == 0 || ar->count("--rho-step") == 0))
                throw tailest::param_error(
                    "--rho-min needs --rho-max and --rho-step");
            if (ar_gamma.has_range && (ar->count("--gamma-max") == 0 ||
                                       ar->count("--gamma-step") == 0))
                throw tailest::param_error(
                    "--gamma-min needs --gamma-max and --gamma-step");
            if (!ar_rho.has_range && ar->count("--rho") == 0)
                throw tailest::param_error("give --rho or a --rho-min range");
            run_areff(ar_first, ar_second, ar_gamma, ar_rho, ar_format,
                      ar_output);
        } else if (am->parsed()) {
            run_amse_curve(am_kind, am_n, am_gamma, am_rho, am_beta, am_kmin,
                           am_kmax, am_format, am_output);
        } else if (sim->parsed()) {
            tailest::MonteCarloConfig config;
            config.model.family = kFamilies.at(sim_family);
            config.model.gamma = sim_gamma;
            config.model.scale = sim_scale;
            config.model.burr_rho = sim_burr_rho;
            config.n = sim_n;
            config.k_set = sim_k;
            if (sim->count("--k-min") != 0) {
                if (sim->count("--k-max") == 0)
                    throw tailest::param_error("--k-min needs --k-max");
                if (sim_kstep < 1)
                    throw tailest::param_error("--k-step must be >= 1");
                for (std::size_t k = sim_kmin; k <= sim_kmax; k += sim_kstep)
                    config.k_set.push_back(k);
            }
            config.replications = sim_reps;
            config.base_seed = sim_seed;
            config.estimators.clear();
            for (const std::string& name : sim_estimators) {
                auto it = kTailEstimators.find(name);
                if (it == kTailEstimators.end())
                    throw tailest::param_error("unknown estimator: " + name);
                config.estimators.push_back(it->second);
            }
            config.quantile_p = sim_p;
            run_simulate(std::move(config), sim_threads, sim_strict_rate,
                         sim_output);
        }
    } catch (const tailest::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const tailest::sample_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tailest::level_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tailest::param_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tailest::error& e) {
        // Remaining library errors are I/O (unopenable files and friends).
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
