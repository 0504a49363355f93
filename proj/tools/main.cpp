// intervalkit command-line front end: hpd, lrci, invariance, coverage,
// compare. Emits one machine-readable record per invocation on stdout;
// diagnostics go to stderr. Exit codes: 0 result produced, 2 argument
// error, 3 numeric failure.
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "intervalkit/intervalkit.hpp"

namespace ik = intervalkit;
using json = nlohmann::ordered_json;

namespace {

struct OutputRecord {
    std::string command;
    json inputs = json::object();
    json result = json::object();
    std::vector<std::string> warnings;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void flatten_json(const json& node, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& rows) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items())
            flatten_json(value, prefix.empty() ? key : prefix + "." + key, rows);
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i)
            flatten_json(node[i], prefix + "." + std::to_string(i), rows);
    } else if (node.is_number_float()) {
        rows.emplace_back(prefix, format_number(node.get<double>()));
    } else {
        rows.emplace_back(prefix, node.dump());
    }
}

void emit(const OutputRecord& out, const std::string& format) {
    json record;
    record["command"] = out.command;
    record["inputs"] = out.inputs;
    record["result"] = out.result;
    record["warnings"] = out.warnings;
    record["version"] = ik::version;

    if (format == "json") {
        std::cout << record.dump(2) << "\n";
        return;
    }
    // csv: flat key,value rows; a grid table, when present, follows the
    // scalars with its own header
    json grid;
    if (record["result"].contains("grid")) {
        grid = record["result"]["grid"];
        record["result"].erase("grid");
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten_json(record, "", rows);
    std::cout << "key,value\n";
    for (const auto& [k, v] : rows)
        std::cout << k << "," << v << "\n";
    if (!grid.is_null()) {
        std::cout << "theta,profile_deviance,normalized_density\n";
        for (const auto& row : grid)
            std::cout << format_number(row[0].get<double>()) << ","
                      << format_number(row[1].get<double>()) << ","
                      << format_number(row[2].get<double>()) << "\n";
    }
}

json interval_conditions(const ik::ConditionReport& c) {
    return {{"coverage_ok", c.coverage_ok},
            {"endpoint_density_equal", c.endpoint_density_equal},
            {"mode_interior", c.mode_interior},
            {"theorem_applies", c.theorem_applies}};
}

json hpd_to_json(const ik::HpdInterval& h) {
    return {{"lower", h.lower},       {"upper", h.upper}, {"level", h.level},
            {"coverage", h.coverage}, {"alpha", h.alpha},
            {"conditions", interval_conditions(h.conditions)}};
}

const char* status_name(ik::EndpointStatus s) {
    return s == ik::EndpointStatus::Solved ? "solved" : "at_parameter_bound";
}

json lrci_to_json(const ik::LrciInterval& ci) {
    return {{"lower", ci.lower},
            {"upper", ci.upper},
            {"theta_hat", ci.theta_hat},
            {"deviance_at_lower", ci.deviance_at_lower},
            {"deviance_at_upper", ci.deviance_at_upper},
            {"alpha", ci.alpha},
            {"lower_status", status_name(ci.lower_status)},
            {"upper_status", status_name(ci.upper_status)}};
}

double env_tolerance(const char* name, double fallback) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return fallback;
    double v = 0.0;
    const char* end = raw + std::string_view(raw).size();
    const auto res = std::from_chars(raw, end, v);
    if (res.ec != std::errc{} || res.ptr != end || !(v > 0.0))
        throw ik::DomainError(std::string(name) + ": expected a positive number, got '" + raw +
                              "'");
    return v;
}

ik::Tolerances tolerances_from_env() {
    ik::Tolerances tol;
    tol.abs_x = env_tolerance("INTERVALKIT_TOL_X", tol.abs_x);
    tol.quad_tol = env_tolerance("INTERVALKIT_TOL_QUAD", tol.quad_tol);
    return tol;
}

std::vector<double> read_data_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ik::DomainError("cannot open data file '" + path + "'");
    std::vector<double> data;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(b, e - b + 1);
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw ik::DomainError(path + ":" + std::to_string(lineno) +
                                  ": expected one number per line, got '" + tok + "'");
        data.push_back(v);
    }
    if (data.empty())
        throw ik::DomainError("data file '" + path + "' holds no observations");
    return data;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> data;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        const std::string tok = csv.substr(pos, comma - pos);
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw ik::DomainError("--values: bad number '" + tok + "'");
        data.push_back(v);
        pos = comma + 1;
        if (comma == csv.size()) break;
    }
    return data;
}

// --- density options (hpd, invariance) -------------------------------------

struct DensityOptions {
    std::string family;
    std::string config;
    double mu = 0.0, sigma = 1.0;
    double shape = 1.0, rate = 1.0;
    double a = 1.0, b = 1.0;
    std::string logpdf;
    double lower = -ik::infinity;
    double upper = ik::infinity;
    bool unnormalized = false;
};

void add_density_options(CLI::App* cmd, DensityOptions& o) {
    cmd->add_option("--family", o.family,
                    "Density family: normal|lognormal|gamma|beta|exponential|custom");
    cmd->add_option("--density", o.config,
                    "One-string density config, e.g. 'family=lognormal mu=0 sigma=1' "
                    "(alternative to --family and parameter flags)");
    cmd->add_option("--mu", o.mu, "Location parameter (normal, lognormal; default 0)");
    cmd->add_option("--sigma", o.sigma, "Scale parameter > 0 (normal, lognormal; default 1)");
    cmd->add_option("--shape", o.shape, "Shape parameter > 0 (gamma)");
    cmd->add_option("--rate", o.rate, "Rate parameter > 0 (gamma, exponential; default 1)");
    cmd->add_option("--a", o.a, "First shape parameter > 0 (beta)");
    cmd->add_option("--b", o.b, "Second shape parameter > 0 (beta)");
    cmd->add_option("--logpdf", o.logpdf,
                    "custom family: log-density expression in x (operators + - * / ^, "
                    "functions exp/log/sqrt, constants pi and e)");
    cmd->add_option("--lower", o.lower, "custom family: support lower bound (default -inf)");
    cmd->add_option("--upper", o.upper, "custom family: support upper bound (default +inf)");
    cmd->add_flag("--unnormalized", o.unnormalized,
                  "custom family: normalize the supplied log-density by quadrature");
}

ik::UnimodalDensity build_density(const DensityOptions& o, const ik::Tolerances& tol,
                                  json& echo) {
    if (!o.config.empty()) {
        echo["density"] = o.config;
        return ik::parse_density_config(o.config);
    }
    if (o.family.empty())
        throw ik::DomainError("specify --family or --density");
    echo["family"] = o.family;
    if (o.family == "normal") {
        echo["mu"] = o.mu;
        echo["sigma"] = o.sigma;
        return ik::UnimodalDensity::normal(o.mu, o.sigma);
    }
    if (o.family == "lognormal") {
        echo["mu"] = o.mu;
        echo["sigma"] = o.sigma;
        return ik::UnimodalDensity::lognormal(o.mu, o.sigma);
    }
    if (o.family == "gamma") {
        echo["shape"] = o.shape;
        echo["rate"] = o.rate;
        return ik::UnimodalDensity::gamma(o.shape, o.rate);
    }
    if (o.family == "beta") {
        echo["a"] = o.a;
        echo["b"] = o.b;
        return ik::UnimodalDensity::beta(o.a, o.b);
    }
    if (o.family == "exponential") {
        echo["rate"] = o.rate;
        return ik::UnimodalDensity::exponential(o.rate);
    }
    if (o.family == "custom") {
        if (o.logpdf.empty())
            throw ik::DomainError("custom family requires --logpdf");
        echo["logpdf"] = o.logpdf;
        echo["lower"] = o.lower;
        echo["upper"] = o.upper;
        echo["unnormalized"] = o.unnormalized;
        const ik::Expression expr = ik::Expression::parse(o.logpdf);
        ik::CustomDensitySpec spec;
        spec.log_pdf = [expr](double x) { return expr(x); };
        spec.support = ik::Support{o.lower, o.upper, true, true};
        spec.normalization =
            o.unnormalized ? ik::Normalization::Unnormalized : ik::Normalization::Normalized;
        return ik::UnimodalDensity::custom(spec, tol);
    }
    throw ik::DomainError("unknown family '" + o.family + "'");
}

// --- model options (lrci, compare) ------------------------------------------

struct ModelOptions {
    std::string model;
    long n = 0;
    long x = 0;
    double sigma = 1.0;
    std::string data_file;
    std::string values;
};

void add_model_options(CLI::App* cmd, ModelOptions& o) {
    cmd->add_option("--model", o.model,
                    "Likelihood model: binomial|normal-mean|normal-mean-profile|"
                    "normal-sigma|poisson|lognormal-mu")
        ->required();
    cmd->add_option("--n", o.n, "binomial: number of trials");
    cmd->add_option("--x", o.x, "binomial: observed successes");
    cmd->add_option("--sigma", o.sigma, "normal-mean: known sigma > 0");
    cmd->add_option("--data", o.data_file,
                    "Observations file: one number per line, '#' starts a comment, "
                    "'.' is the decimal separator regardless of locale");
    cmd->add_option("--values", o.values, "Inline observations, comma-separated");
}

ik::LikelihoodModel build_model(const ModelOptions& o, json& echo) {
    echo["model"] = o.model;
    if (o.model == "binomial") {
        echo["n"] = o.n;
        echo["x"] = o.x;
        return ik::LikelihoodModel::binomial_proportion(o.n, o.x);
    }
    std::vector<double> data;
    if (!o.data_file.empty()) {
        data = read_data_file(o.data_file);
        echo["data"] = o.data_file;
    } else if (!o.values.empty()) {
        data = parse_values(o.values);
        echo["values"] = o.values;
    } else {
        throw ik::DomainError("model '" + o.model + "' requires --data or --values");
    }
    echo["n_observations"] = static_cast<long>(data.size());
    if (o.model == "normal-mean") {
        echo["sigma"] = o.sigma;
        return ik::LikelihoodModel::normal_mean_known_sigma(std::move(data), o.sigma);
    }
    if (o.model == "normal-mean-profile")
        return ik::LikelihoodModel::normal_mean_profile_sigma(std::move(data));
    if (o.model == "normal-sigma")
        return ik::LikelihoodModel::normal_sigma_profile_mean(std::move(data));
    if (o.model == "poisson")
        return ik::LikelihoodModel::poisson_rate(std::move(data));
    if (o.model == "lognormal-mu")
        return ik::LikelihoodModel::lognormal_mu_profile_sigma(std::move(data));
    throw ik::DomainError("unknown model '" + o.model + "'");
}

void warn_small_sample(const ik::LikelihoodModel& m, OutputRecord& out) {
    if (m.n_observations() == 1)
        out.warnings.push_back("asymptotic approximation: n=1");
}

// --- subcommands -------------------------------------------------------------

int run_hpd(const DensityOptions& dopt, double alpha, const std::string& format,
            const ik::Tolerances& tol) {
    OutputRecord out;
    out.command = "hpd";
    out.inputs["alpha"] = alpha;
    out.inputs["tolerances"] = {{"abs_x", tol.abs_x}, {"quad_tol", tol.quad_tol}};
    const ik::UnimodalDensity d = build_density(dopt, tol, out.inputs);

    ik::HpdInterval h;
    std::string method = "levelset";
    try {
        h = ik::hpd_levelset(d, alpha, tol);
    } catch (const ik::ModeAtBoundary&) {
        h = ik::hpd_one_sided(d, alpha, tol);
        method = "one-sided";
        out.warnings.push_back("mode at support boundary; equal-density interval conditions not met");
    }
    out.result = hpd_to_json(h);
    out.result["method"] = method;
    out.result["mode"] = d.mode();
    if (std::isfinite(d.log_modal_density())) {
        out.result["density_ratio_lower"] = ik::density_ratio_to_mode(d, h.lower);
        out.result["density_ratio_upper"] = ik::density_ratio_to_mode(d, h.upper);
    }
    emit(out, format);
    return 0;
}

int run_lrci(const ModelOptions& mopt, double alpha, const std::string& format,
             const ik::Tolerances& tol) {
    OutputRecord out;
    out.command = "lrci";
    out.inputs["alpha"] = alpha;
    const ik::LikelihoodModel m = build_model(mopt, out.inputs);
    warn_small_sample(m, out);

    const ik::MleResult fit = ik::mle(m);
    const ik::LrciInterval ci = ik::wilks_lrci(m, alpha, tol);
    out.result = lrci_to_json(ci);
    out.result["chi_square_threshold"] = ik::chi_square_quantile(1, 1.0 - alpha);
    out.result["log_lik_at_max"] = fit.log_lik_at_max;
    out.result["eta_hat"] = fit.eta_hat;
    emit(out, format);
    return 0;
}

int run_invariance(const DensityOptions& dopt, const std::string& transform, double alpha,
                   const std::string& format, const ik::Tolerances& tol) {
    OutputRecord out;
    out.command = "invariance";
    out.inputs["alpha"] = alpha;
    out.inputs["transform"] = transform;
    const ik::UnimodalDensity d = build_density(dopt, tol, out.inputs);
    const ik::MonotoneTransform g = ik::builtin_transform(transform);
    const ik::InvarianceReport rep = ik::invariance_report(d, g, alpha, tol);
    out.result["original_hpd"] = hpd_to_json(rep.original_hpd);
    out.result["mapped_interval"] = {{"lower", rep.mapped_interval.first},
                                     {"upper", rep.mapped_interval.second}};
    out.result["pushforward_hpd"] = hpd_to_json(rep.pushforward_hpd);
    out.result["mode_mapped"] = rep.mode_mapped;
    out.result["mode_of_pushforward"] = rep.mode_of_pushforward;
    out.result["ratio_original"] = {{"lower", rep.ratio_original.first},
                                    {"upper", rep.ratio_original.second}};
    out.result["ratio_reparam"] = {{"lower", rep.ratio_reparam.first},
                                   {"upper", rep.ratio_reparam.second}};
    out.result["widths"] = {{"mapped", rep.widths.mapped},
                            {"recomputed", rep.widths.recomputed}};
    emit(out, format);
    return 0;
}

struct CoverageOptions {
    std::string model;
    double theta = 0.0, mu = 0.0, sigma = 1.0, lambda = 0.0;
    int n = 0;
    int reps = 0;
    std::uint64_t seed = 0;
    int jobs = 1;
};

int run_coverage(const CoverageOptions& o, double alpha, const std::string& format) {
    ik::CoverageSpec spec;
    OutputRecord out;
    out.command = "coverage";
    out.inputs["model"] = o.model;
    if (o.model == "binomial") {
        spec.family = ik::CoverageFamily::BinomialProportion;
        spec.true_params = {o.theta};
        out.inputs["theta"] = o.theta;
    } else if (o.model == "normal-mean" || o.model == "normal-mean-profile" ||
               o.model == "lognormal-mu") {
        spec.family = o.model == "normal-mean" ? ik::CoverageFamily::NormalMeanKnownSigma
                      : o.model == "normal-mean-profile"
                          ? ik::CoverageFamily::NormalMeanProfileSigma
                          : ik::CoverageFamily::LogNormalMuProfileSigma;
        spec.true_params = {o.mu, o.sigma};
        out.inputs["mu"] = o.mu;
        out.inputs["sigma"] = o.sigma;
    } else if (o.model == "normal-sigma") {
        spec.family = ik::CoverageFamily::NormalSigmaProfileMean;
        spec.true_params = {o.sigma, o.mu};
        out.inputs["sigma"] = o.sigma;
        out.inputs["mu"] = o.mu;
    } else if (o.model == "poisson") {
        spec.family = ik::CoverageFamily::PoissonRate;
        spec.true_params = {o.lambda};
        out.inputs["lambda"] = o.lambda;
    } else {
        throw ik::DomainError("unknown model '" + o.model + "'");
    }
    spec.n_obs = o.n;
    spec.replications = o.reps;
    spec.alpha = alpha;
    spec.seed = o.seed;
    out.inputs["n"] = o.n;
    out.inputs["reps"] = o.reps;
    out.inputs["alpha"] = alpha;
    out.inputs["seed"] = o.seed;
    // --jobs changes scheduling only, never the result, so it is not echoed

    const ik::CoverageResult r = ik::simulate_lrci_coverage(spec, o.jobs);
    out.result["empirical_coverage"] = r.empirical_coverage;
    out.result["mc_stderr"] = r.mc_stderr;
    out.result["n_boundary_skips"] = r.n_boundary_skips;
    out.result["replications_used"] = r.replications_used;
    emit(out, format);
    return 0;
}

int run_compare(const ModelOptions& mopt, double alpha, int grid, const std::string& format,
                const ik::Tolerances& tol) {
    if (grid < 2)
        throw ik::DomainError("--grid must be >= 2");
    OutputRecord out;
    out.command = "compare";
    out.inputs["alpha"] = alpha;
    out.inputs["grid"] = grid;
    const ik::LikelihoodModel m = build_model(mopt, out.inputs);
    warn_small_sample(m, out);

    const ik::HpdLrciComparison c = ik::compare_hpd_lrci(m, alpha, tol);
    out.result["hpd"] = hpd_to_json(c.hpd);
    out.result["lrci"] = lrci_to_json(c.lrci);
    out.result["widths"] = {{"hpd", c.hpd_width}, {"lrci", c.lrci_width}};
    out.result["surrogate_mode"] = c.surrogate_mode;
    out.result["theta_hat"] = c.theta_hat;
    out.result["deviance_threshold"] = c.deviance_threshold;
    out.result["hpd_density_level"] = c.hpd_density_level;

    // plottable (theta, profile deviance, normalized density) table
    double lo = std::min(c.hpd.lower, c.lrci.lower);
    double hi = std::max(c.hpd.upper, c.lrci.upper);
    const double pad = 0.25 * (hi - lo);
    const ik::ParamBounds b = m.interest_bounds();
    lo = std::max(lo - pad, b.lower);
    hi = std::min(hi + pad, b.upper);
    const double inset = 1e-6 * (hi - lo);
    if (lo == b.lower && std::isfinite(b.lower)) lo += inset;
    if (hi == b.upper && std::isfinite(b.upper)) hi -= inset;
    json table = json::array();
    for (int i = 0; i < grid; ++i) {
        const double theta = lo + (hi - lo) * i / (grid - 1);
        table.push_back({theta, ik::profile_deviance(m, theta), c.surrogate.pdf(theta)});
    }
    out.result["grid"] = std::move(table);
    emit(out, format);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "intervalkit: highest-density intervals for closed-form unimodal densities, "
        "profile likelihood ratio confidence intervals, and monotone-transform "
        "invariance reports.\n"
        "Environment: INTERVALKIT_TOL_X overrides the abscissa tolerance "
        "(default 1e-10), INTERVALKIT_TOL_QUAD the quadrature tolerance "
        "(default 1e-9)."};
    app.require_subcommand(1);

    std::string format = "json";
    double alpha = 0.05;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format: json|csv (default json)")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--alpha", alpha, "Miscoverage level in (0,1) (default 0.05)");
    };

    DensityOptions dopt;
    CLI::App* hpd = app.add_subcommand(
        "hpd", "Highest-density interval of a unimodal density (level-set solver; "
               "falls back to the flagged one-sided interval for boundary modes)");
    add_common(hpd);
    add_density_options(hpd, dopt);

    ModelOptions lrci_opt;
    CLI::App* lrci = app.add_subcommand(
        "lrci", "Profile likelihood ratio confidence interval (Wilks inversion, 1 df)");
    add_common(lrci);
    add_model_options(lrci, lrci_opt);

    DensityOptions inv_d;
    std::string transform;
    CLI::App* inv = app.add_subcommand(
        "invariance", "HPD transformation-invariance report for a monotone transform");
    add_common(inv);
    add_density_options(inv, inv_d);
    inv->add_option("--transform", transform,
                    "Transform: identity|log|exp|logit|affine:a,b|power:k")
        ->required();

    CoverageOptions cov;
    CLI::App* coverage = app.add_subcommand(
        "coverage", "Monte Carlo coverage of the Wilks LRCI (deterministic for a "
                    "fixed --seed, independent of --jobs)");
    add_common(coverage);
    coverage->add_option("--model", cov.model,
                         "binomial|normal-mean|normal-mean-profile|normal-sigma|"
                         "poisson|lognormal-mu")
        ->required();
    coverage->add_option("--theta", cov.theta, "binomial: true success probability");
    coverage->add_option("--mu", cov.mu, "normal: true mean");
    coverage->add_option("--sigma", cov.sigma, "normal: true sigma (default 1)");
    coverage->add_option("--lambda", cov.lambda, "poisson: true rate");
    coverage->add_option("--n", cov.n, "Observations per replication (binomial: trials)")
        ->required();
    coverage->add_option("--reps", cov.reps, "Replications (>= 100)")->required();
    coverage->add_option("--seed", cov.seed, "Master RNG seed (64-bit)")->required();
    coverage->add_option("--jobs", cov.jobs,
                         "Worker threads; affects scheduling only, never results "
                         "(default 1, not echoed in the output record)");

    ModelOptions cmp_opt;
    int grid = 201;
    CLI::App* compare = app.add_subcommand(
        "compare", "Side-by-side HPD (flat-prior profile surrogate) vs Wilks LRCI, "
                   "plus a plottable (theta, deviance, density) grid");
    add_common(compare);
    add_model_options(compare, cmp_opt);
    compare->add_option("--grid", grid, "Grid rows in the output table (default 201)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        const ik::Tolerances tol = tolerances_from_env();
        if (!(alpha > 0.0 && alpha < 1.0))
            throw ik::DomainError("--alpha must lie strictly in (0, 1)");
        if (hpd->parsed()) return run_hpd(dopt, alpha, format, tol);
        if (lrci->parsed()) return run_lrci(lrci_opt, alpha, format, tol);
        if (inv->parsed()) return run_invariance(inv_d, transform, alpha, format, tol);
        if (coverage->parsed()) return run_coverage(cov, alpha, format);
        if (compare->parsed()) return run_compare(cmp_opt, alpha, grid, format, tol);
        return 2;
    } catch (const ik::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ik::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
