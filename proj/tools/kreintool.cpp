// Command line front end: reads an operator spec (JSON), runs one analysis
// command and emits a deterministic JSON report on stdout or --out.
// Exit codes: 0 clean, 1 error (JSON diagnostics on stderr), 2 when the
// report carries violations.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "krein/family.hpp"
#include "krein/io.hpp"
#include "krein/numerics.hpp"
#include "krein/products.hpp"
#include "krein/signtype.hpp"
#include "krein/space.hpp"

namespace {

using krein::Complex;
using krein::OrderedJson;

double parse_double(const std::string& text, const std::string& flag) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw krein::ValidationError("cannot parse number \"" + text + "\" for " + flag);
    }
}

std::vector<double> split_doubles(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    size_t begin = 0;
    while (begin <= text.size()) {
        size_t end = text.find(',', begin);
        if (end == std::string::npos) end = text.size();
        out.push_back(parse_double(text.substr(begin, end - begin), flag));
        begin = end + 1;
    }
    return out;
}

Complex parse_complex_arg(const std::string& text, const std::string& flag) {
    const auto parts = split_doubles(text, flag);
    if (parts.size() == 1) return Complex(parts[0], 0.0);
    if (parts.size() == 2) return Complex(parts[0], parts[1]);
    throw krein::ValidationError(flag + " expects \"re\" or \"re,im\"");
}

krein::Interval parse_interval_arg(const std::string& text, const std::string& flag) {
    const auto parts = split_doubles(text, flag);
    if (parts.size() != 2 || !(parts[0] < parts[1]))
        throw krein::ValidationError(flag + " expects \"lo,hi\" with lo < hi");
    return {parts[0], parts[1]};
}

krein::Rectangle parse_rect_arg(const std::string& text, const std::string& flag) {
    const auto parts = split_doubles(text, flag);
    if (parts.size() != 4)
        throw krein::ValidationError(flag + " expects \"re_lo,re_hi,im_lo,im_hi\"");
    return {parts[0], parts[1], parts[2], parts[3]};
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    for (double v : split_doubles(text, flag)) {
        const int n = static_cast<int>(v);
        if (static_cast<double>(n) != v || n <= 0)
            throw krein::ValidationError(flag + " expects positive integers");
        out.push_back(n);
    }
    return out;
}

OrderedJson inertia_json(const krein::Inertia& in) {
    OrderedJson out;
    out["plus"] = in.n_plus;
    out["zero"] = in.n_zero;
    out["minus"] = in.n_minus;
    return out;
}

OrderedJson cluster_json(const krein::EigenCluster& c) {
    OrderedJson out;
    out["value"] = krein::complex_to_json(c.value);
    out["algebraic_mult"] = c.algebraic_mult;
    out["geometric_mult"] = c.geometric_mult();
    out["weyr"] = c.weyr;
    return out;
}

OrderedJson classification_json(const krein::SignClassification& c) {
    OrderedJson out;
    out["eigenvalue"] = c.eigenvalue;
    out["sign_type"] = krein::to_string(c.sign_type);
    out["eigenspace_inertia"] = inertia_json(c.eigenspace_inertia);
    out["semisimple"] = c.semisimple;
    out["algebraic_mult"] = c.algebraic_mult;
    out["weyr"] = c.weyr;
    OrderedJson sc = OrderedJson::array();
    for (const auto& [mult, sign] : c.sign_characteristic) sc.push_back({mult, sign});
    out["sign_characteristic"] = sc;
    return out;
}

OrderedJson growth_fit_json(const krein::GrowthFit& fit) {
    OrderedJson out;
    out["samples"] = fit.samples.size();
    out["slope_raw"] = fit.slope_raw;
    out["m_hat"] = fit.m_hat;
    out["m_int"] = fit.m_int;
    out["big_m"] = fit.big_m;
    out["fit_residual"] = fit.fit_residual;
    out["window"] = {fit.window_begin, fit.window_end};
    out["window_stable"] = fit.window_stable;
    return out;
}

struct Context {
    std::string input_path;
    krein::Tolerances tol;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string grid_out_path;
    bool emit_normalized = false;

    int truncation = 8; // family payload truncation for operator commands
    std::string lambda_text, mu_text, interval_text, rect_text, n_list_text;
    int power = 1;
    int max_degree = 6;
    int restarts = 32;
    double x0 = 0.0;
    std::optional<double> lambda_real;
    double y_max = 1e-1, y_min = 1e-6;
    int y_points = 24;
    int nx = 40, ny = 40;
};

krein::EigenstructureOptions eig_options(const Context& ctx) {
    return {ctx.tol.cluster, ctx.tol.rank};
}

/// The factor pair a command operates on: the explicit factors, or the pair
/// (T, T^[*]) whose products are T T^[*] and T^[*] T.
krein::FactorPair factors_of(const krein::OperatorSpec& spec) {
    if (spec.has_factors()) return spec.factors();
    if (spec.has_operator())
        return krein::FactorPair(spec.operator_matrix(),
                                 krein::krein_adjoint(spec.operator_matrix(), spec.J));
    throw krein::ValidationError("this command needs a \"T\" or \"factors\" payload");
}

/// The J-selfadjoint operator a command analyses: T itself, or the family
/// truncation's analysis operator.
krein::KreinOperator operator_of(const krein::OperatorSpec& spec, const Context& ctx) {
    if (spec.has_operator()) return krein::KreinOperator(spec.operator_matrix(), spec.J);
    if (spec.has_family()) return krein::analysis_operator(spec.family(), ctx.truncation);
    throw krein::ValidationError("this command needs a \"T\" or \"family\" payload");
}

OrderedJson run_adjoint(const krein::OperatorSpec& spec, const Context& ctx, OrderedJson&,
                        OrderedJson&) {
    const auto op = operator_of(spec, ctx);
    OrderedJson results;
    results["adjoint"] = krein::matrix_to_json(krein::krein_adjoint(op.T, op.J));
    results["j_selfadjoint"] = krein::is_j_selfadjoint(op.T, op.J);
    return results;
}

OrderedJson run_products(const krein::OperatorSpec& spec, const Context& ctx, OrderedJson&,
                         OrderedJson&) {
    const auto op = operator_of(spec, ctx);
    const auto pair = krein::product_pair(op);
    OrderedJson results;
    results["left"] = krein::matrix_to_json(pair.left);
    results["right"] = krein::matrix_to_json(pair.right);
    return results;
}

OrderedJson run_compare_spectra(const krein::OperatorSpec& spec, const Context& ctx,
                                OrderedJson&, OrderedJson& violations) {
    krein::SpectrumCompareOptions opt;
    opt.eig = eig_options(ctx);
    const auto report = krein::compare_nonzero_spectra(factors_of(spec), opt);
    OrderedJson results;
    results["nonzero_ab"] = OrderedJson::array();
    for (const auto& c : report.nonzero_ab) results["nonzero_ab"].push_back(cluster_json(c));
    results["nonzero_ba"] = OrderedJson::array();
    for (const auto& c : report.nonzero_ba) results["nonzero_ba"].push_back(cluster_json(c));
    results["matched"] = report.matched;
    results["weyr_match"] = report.weyr_match;
    // +inf (cluster counts differ) has no JSON representation; emit null.
    if (std::isfinite(report.max_value_discrepancy))
        results["max_value_discrepancy"] = report.max_value_discrepancy;
    else
        results["max_value_discrepancy"] = nullptr;
    results["match_tolerance"] = report.match_tolerance;
    if (!report.matched)
        violations.push_back("nonzero spectra of AB and BA do not match within tolerance");
    else if (!report.weyr_match)
        violations.push_back("matched eigenvalues disagree in their Weyr characteristics");
    return results;
}

OrderedJson run_transport(const krein::OperatorSpec& spec, const Context& ctx, OrderedJson&,
                          OrderedJson&) {
    if (ctx.lambda_text.empty()) throw krein::ValidationError("--lambda is required");
    const Complex lambda = parse_complex_arg(ctx.lambda_text, "--lambda");
    krein::TransportOptions opt;
    opt.rank_tol = ctx.tol.rank;
    opt.cluster_tol = ctx.tol.cluster;
    const auto report = krein::eigenspace_transport(factors_of(spec), lambda, ctx.power, opt);
    OrderedJson results;
    results["lambda"] = krein::complex_to_json(lambda);
    results["power"] = ctx.power;
    results["dim"] = report.dim;
    results["forward"] = krein::matrix_to_json(report.forward);
    results["inverse"] = krein::matrix_to_json(report.inverse);
    results["span_residual"] = report.span_residual;
    if (report.roundtrip_residual)
        results["roundtrip_residual"] = *report.roundtrip_residual;
    return results;
}

OrderedJson run_resolvent_identities(const krein::OperatorSpec& spec, const Context& ctx,
                                     OrderedJson&, OrderedJson& violations) {
    if (ctx.lambda_text.empty() || ctx.mu_text.empty())
        throw krein::ValidationError("--lambda and --mu are required");
    const Complex lambda = parse_complex_arg(ctx.lambda_text, "--lambda");
    const Complex mu = parse_complex_arg(ctx.mu_text, "--mu");
    const auto pair = factors_of(spec);
    const krein::ResolventOptions ropt{ctx.tol.guard};
    const auto res = krein::resolvent_identity_residuals(pair, lambda, mu, ropt);
    const double scale = krein::resolvent_norm(pair.ba(), lambda, ropt);
    OrderedJson results;
    results["lambda"] = krein::complex_to_json(lambda);
    results["mu"] = krein::complex_to_json(mu);
    results["one_param_residual"] = res.one_param;
    results["two_param_residual"] = res.two_param;
    results["resolvent_norm_ba"] = scale;
    if (res.one_param > 1e-8 * scale)
        violations.push_back("one-parameter resolvent identity residual exceeds 1e-8 x scale");
    if (res.two_param > 1e-8 * scale)
        violations.push_back("two-parameter resolvent identity residual exceeds 1e-8 x scale");
    return results;
}

OrderedJson run_resolvent_bound(const krein::OperatorSpec& spec, const Context& ctx,
                                OrderedJson&, OrderedJson& violations) {
    if (ctx.lambda_text.empty() || ctx.mu_text.empty())
        throw krein::ValidationError("--lambda and --mu are required");
    const Complex lambda = parse_complex_arg(ctx.lambda_text, "--lambda");
    const Complex mu = parse_complex_arg(ctx.mu_text, "--mu");
    const auto pair = factors_of(spec);
    krein::DominationOptions dopt;
    dopt.seed = ctx.seed;
    const auto dom = krein::domination_constants(pair, dopt);
    const auto check =
        krein::resolvent_bound_check(pair, lambda, mu, dom, krein::ResolventOptions{ctx.tol.guard});
    OrderedJson results;
    results["lambda"] = krein::complex_to_json(lambda);
    results["mu"] = krein::complex_to_json(mu);
    results["c1"] = dom.c1;
    results["c2"] = dom.c2;
    results["C"] = dom.C;
    results["m1"] = check.m1;
    results["m2"] = check.m2;
    results["lhs"] = check.lhs;
    results["rhs"] = check.rhs;
    results["holds"] = check.holds;
    if (!check.holds) violations.push_back("resolvent norm exceeds the two-parameter envelope");
    return results;
}

OrderedJson run_pole_order(const krein::OperatorSpec& spec, const Context& ctx, OrderedJson&,
                           OrderedJson& violations) {
    krein::SpectrumCompareOptions opt;
    opt.eig = eig_options(ctx);
    const auto report = krein::zero_pole_order(factors_of(spec), opt);
    OrderedJson results;
    results["order_ab"] = report.order_ab;
    results["order_ba"] = report.order_ba;
    results["zero_in_resolvent_set_ab"] = report.zero_in_resolvent_set_ab;
    results["zero_in_spectrum_ba"] = report.zero_in_spectrum_ba;
    results["semisimple_zero_expected"] = report.semisimple_zero_expected;
    if (report.semisimple_zero_expected && report.order_ba != 1)
        violations.push_back("zero of BA is not semisimple although 0 lies in rho(AB)");
    return results;
}

krein::ClassifyOptions classify_options(const Context& ctx) {
    krein::ClassifyOptions opt;
    opt.cluster_tol = ctx.tol.cluster;
    opt.rank_tol = ctx.tol.rank;
    return opt;
}

OrderedJson run_classify(const krein::OperatorSpec& spec, const Context& ctx, OrderedJson&,
                         OrderedJson&) {
    const auto op = operator_of(spec, ctx);
    OrderedJson results;
    results["classifications"] = OrderedJson::array();
    if (ctx.lambda_real) {
        results["classifications"].push_back(classification_json(
            krein::classify_real_eigenvalue(op.T, op.J, *ctx.lambda_real, classify_options(ctx))));
    } else {
        for (const auto& c : krein::classify_real_spectrum(op.T, op.J, classify_options(ctx)))
            results["classifications"].push_back(classification_json(c));
    }
    return results;
}

OrderedJson run_critical(const krein::OperatorSpec& spec, const Context& ctx, OrderedJson&,
                         OrderedJson&) {
    const auto op = operator_of(spec, ctx);
    OrderedJson results;
    results["critical_points"] = krein::critical_points(op.T, op.J, classify_options(ctx));
    return results;
}

OrderedJson run_projection(const krein::OperatorSpec& spec, const Context& ctx, OrderedJson&,
                           OrderedJson&) {
    if (ctx.interval_text.empty()) throw krein::ValidationError("--interval is required");
    const auto delta = parse_interval_arg(ctx.interval_text, "--interval");
    const auto op = operator_of(spec, ctx);
    krein::ProjectionOptions opt;
    opt.rank_tol = ctx.tol.rank;
    const auto proj = krein::interval_spectral_projection(op.T, op.J, delta, opt);
    OrderedJson results;
    results["interval"] = {delta.lo, delta.hi};
    results["projection"] = krein::matrix_to_json(proj.projection);
    results["norm"] = proj.norm;
    results["rank"] = proj.inertia_on_range.total();
    results["inertia_on_range"] = inertia_json(proj.inertia_on_range);
    return results;
}

OrderedJson run_definitize(const krein::OperatorSpec& spec, const Context& ctx,
                           OrderedJson& warnings, OrderedJson& violations) {
    const auto op = operator_of(spec, ctx);
    krein::DefinitizeOptions opt;
    opt.max_degree = ctx.max_degree;
    opt.restarts = ctx.restarts;
    opt.seed = ctx.seed;
    opt.eig = eig_options(ctx);
    const auto poly = krein::definitize(op.T, op.J, opt);
    const bool verified = krein::is_definitizing(poly.coefficients, op.T, op.J);
    OrderedJson results;
    results["coefficients"] = std::vector<double>(
        poly.coefficients.data(), poly.coefficients.data() + poly.coefficients.size());
    results["degree"] = poly.degree();
    results["certified_min_eig"] = poly.certified_min_eig;
    results["from_fallback"] = poly.from_fallback;
    results["verified"] = verified;
    if (poly.from_fallback)
        warnings.push_back("low-degree search failed; annihilator fallback polynomial emitted");
    if (!verified) violations.push_back("emitted polynomial failed the definitizing check");
    return results;
}

OrderedJson trend_json(const krein::TruncationTrend& trend) {
    OrderedJson out;
    out["N_values"] = trend.N_values;
    OrderedJson intervals = OrderedJson::array();
    for (const auto& d : trend.intervals) intervals.push_back({d.lo, d.hi});
    out["intervals"] = intervals;
    out["values"] = trend.values;
    out["verdict"] = krein::to_string(trend.verdict);
    return out;
}

OrderedJson run_family_analyze(const krein::OperatorSpec& spec, const Context& ctx,
                               OrderedJson& warnings, OrderedJson&) {
    if (!spec.has_family())
        throw krein::ValidationError("this command needs a \"family\" payload");
    if (ctx.interval_text.empty()) throw krein::ValidationError("--interval is required");
    const auto delta = parse_interval_arg(ctx.interval_text, "--interval");
    std::vector<int> N_values{2, 4, 8, 16};
    if (!ctx.n_list_text.empty()) N_values = parse_int_list(ctx.n_list_text, "--N-list");
    const auto& family = spec.family();

    krein::TrendOptions topt;
    topt.projection.rank_tol = ctx.tol.rank;
    const auto norm_trend = krein::projection_trend(family, delta, N_values, topt);
    const auto rank_trend = krein::negative_rank_trend(family, delta, N_values, topt);

    OrderedJson results;
    OrderedJson dims = OrderedJson::array();
    for (int N : N_values) dims.push_back(krein::truncate(family, N).dim());
    results["N_values"] = N_values;
    results["dimensions"] = dims;
    results["projection_norm_trend"] = trend_json(norm_trend);
    results["negative_rank_trend"] = trend_json(rank_trend);

    try {
        const auto op = krein::analysis_operator(family, N_values.back());
        results["critical_points_at_largest_N"] =
            krein::critical_points(op.T, op.J, classify_options(ctx));
    } catch (const krein::Error& e) {
        // Severely non-normal truncations can defeat the rank-revealing
        // classification; the trends above are still meaningful.
        warnings.push_back("critical point classification unavailable: " + e.code());
    }
    if (norm_trend.verdict == krein::TrendVerdict::Inconclusive ||
        rank_trend.verdict == krein::TrendVerdict::Inconclusive)
        warnings.push_back("trend verdict inconclusive; widen the truncation range");
    return results;
}

OrderedJson run_growth_fit(const krein::OperatorSpec& spec, const Context& ctx,
                           OrderedJson& warnings, OrderedJson& violations, std::string& grid_csv) {
    const krein::GrowthGrid grid{ctx.y_max, ctx.y_min, ctx.y_points};
    OrderedJson results;
    results["x0"] = ctx.x0;
    if (spec.has_family()) {
        const auto report = krein::partner_growth_check(spec.family(), ctx.x0, ctx.truncation, grid);
        results["N"] = ctx.truncation;
        results["left"] = growth_fit_json(report.left);
        results["right"] = growth_fit_json(report.right);
        results["bound_order"] = report.bound_order;
        results["fitted_constant"] = report.fitted_constant;
        results["bound_holds"] = report.bound_holds;
        if (!report.left.window_stable || !report.right.window_stable)
            warnings.push_back("growth fit window not stable; treat the order as approximate");
        if (!report.bound_holds)
            violations.push_back("left product growth exceeds the partner bound order");
        grid_csv = krein::growth_csv(report.left);
    } else {
        const auto op = operator_of(spec, ctx);
        const auto fit =
            krein::growth_order_fit(op.T, ctx.x0, grid, krein::ResolventOptions{ctx.tol.guard});
        results["fit"] = growth_fit_json(fit);
        if (!fit.window_stable)
            warnings.push_back("growth fit window not stable; treat the order as approximate");
        grid_csv = krein::growth_csv(fit);
    }
    return results;
}

OrderedJson run_pseudospectrum(const krein::OperatorSpec& spec, const Context& ctx, OrderedJson&,
                               OrderedJson&, std::string& grid_csv) {
    if (ctx.rect_text.empty()) throw krein::ValidationError("--rect is required");
    const auto rect = parse_rect_arg(ctx.rect_text, "--rect");
    const auto op = operator_of(spec, ctx);
    const auto grid = krein::pseudospectrum_grid(op.T, rect, ctx.nx, ctx.ny);
    OrderedJson results;
    results["rect"] = {rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi};
    results["nx"] = grid.nx;
    results["ny"] = grid.ny;
    const auto [min_it, max_it] =
        std::minmax_element(grid.sigma_min.begin(), grid.sigma_min.end());
    results["min_sigma"] = *min_it;
    results["max_sigma"] = *max_it;
    grid_csv = krein::pseudospectrum_csv(grid);
    if (ctx.grid_out_path.empty()) results["sigma_min"] = grid.sigma_min;
    return results;
}

int run(const std::string& command, const Context& ctx) {
    const auto spec = krein::load_spec(ctx.input_path);

    OrderedJson report;
    report["command"] = command;
    report["input_digest"] = krein::spec_digest(spec);
    report["seed"] = ctx.seed;
    {
        OrderedJson tol;
        tol["cluster"] = ctx.tol.cluster;
        tol["rank"] = ctx.tol.rank;
        tol["guard"] = ctx.tol.guard;
        report["tolerances"] = tol;
    }
    if (ctx.emit_normalized) report["normalized_spec"] = krein::normalized_spec_json(spec);

    OrderedJson warnings = OrderedJson::array();
    OrderedJson violations = OrderedJson::array();
    std::string grid_csv;

    OrderedJson results;
    if (command == "adjoint") results = run_adjoint(spec, ctx, warnings, violations);
    else if (command == "products") results = run_products(spec, ctx, warnings, violations);
    else if (command == "compare-spectra")
        results = run_compare_spectra(spec, ctx, warnings, violations);
    else if (command == "transport") results = run_transport(spec, ctx, warnings, violations);
    else if (command == "resolvent-identities")
        results = run_resolvent_identities(spec, ctx, warnings, violations);
    else if (command == "resolvent-bound")
        results = run_resolvent_bound(spec, ctx, warnings, violations);
    else if (command == "pole-order") results = run_pole_order(spec, ctx, warnings, violations);
    else if (command == "classify") results = run_classify(spec, ctx, warnings, violations);
    else if (command == "critical") results = run_critical(spec, ctx, warnings, violations);
    else if (command == "projection") results = run_projection(spec, ctx, warnings, violations);
    else if (command == "definitize") results = run_definitize(spec, ctx, warnings, violations);
    else if (command == "family-analyze")
        results = run_family_analyze(spec, ctx, warnings, violations);
    else if (command == "growth-fit")
        results = run_growth_fit(spec, ctx, warnings, violations, grid_csv);
    else if (command == "pseudospectrum")
        results = run_pseudospectrum(spec, ctx, warnings, violations, grid_csv);

    report["results"] = results;
    report["warnings"] = warnings;
    report["violations"] = violations;

    const std::string text = report.dump(2) + "\n";
    if (ctx.out_path.empty())
        std::cout << text;
    else
        krein::atomic_write_file(ctx.out_path, text);
    if (!ctx.grid_out_path.empty()) {
        if (grid_csv.empty())
            throw krein::ValidationError("--grid-out is only meaningful for grid commands");
        krein::atomic_write_file(ctx.grid_out_path, grid_csv);
    }
    return violations.empty() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical analysis of operators in finite-dimensional indefinite inner "
                 "product spaces"};
    app.require_subcommand(1);

    Context ctx;
    app.add_option("--tol-cluster", ctx.tol.cluster, "eigenvalue clustering tolerance");
    app.add_option("--tol-rank", ctx.tol.rank, "relative rank threshold");
    app.add_option("--tol-guard", ctx.tol.guard, "resolvent spectrum guard");
    app.add_option("--seed", ctx.seed, "seed for randomized searches")
        ->envname("KREINTOOL_SEED");
    app.add_option("--out", ctx.out_path, "write the JSON report here (atomic)");
    app.add_option("--grid-out", ctx.grid_out_path, "write grid/sample CSV here (atomic)");
    app.add_flag("--emit-normalized", ctx.emit_normalized,
                 "embed the canonical form of the input spec in the report");

    const auto add_input = [&](CLI::App* sub) {
        sub->fallthrough(); // accept the app-wide options after the subcommand too
        sub->add_option("input", ctx.input_path, "operator spec JSON file")->required();
        return sub;
    };

    add_input(app.add_subcommand("adjoint", "indefinite adjoint of T"))
        ->add_option("--n", ctx.truncation, "family truncation size");
    add_input(app.add_subcommand("products", "the two products of T and its adjoint"))
        ->add_option("--n", ctx.truncation, "family truncation size");

    auto* compare = add_input(
        app.add_subcommand("compare-spectra", "nonzero spectra of AB and BA with multiplicities"));
    (void)compare;

    auto* transport = add_input(
        app.add_subcommand("transport", "carry root subspaces of BA onto AB through A"));
    transport->add_option("--lambda", ctx.lambda_text, "nonzero eigenvalue (re or re,im)")
        ->required();
    transport->add_option("--power", ctx.power, "kernel power n >= 1");

    auto* identities = add_input(
        app.add_subcommand("resolvent-identities", "residuals of the product resolvent identities"));
    identities->add_option("--lambda", ctx.lambda_text, "spectral parameter")->required();
    identities->add_option("--mu", ctx.mu_text, "second spectral parameter")->required();

    auto* bound = add_input(
        app.add_subcommand("resolvent-bound", "two-parameter resolvent norm envelope"));
    bound->add_option("--lambda", ctx.lambda_text, "spectral parameter")->required();
    bound->add_option("--mu", ctx.mu_text, "second spectral parameter")->required();

    add_input(app.add_subcommand("pole-order", "order of the zero eigenvalue of both products"));

    auto* classify = add_input(
        app.add_subcommand("classify", "sign types of the real eigenvalues"));
    classify->add_option("--lambda", ctx.lambda_real, "classify this real eigenvalue only");
    classify->add_option("--n", ctx.truncation, "family truncation size");

    add_input(app.add_subcommand("critical", "real eigenvalues of critical type"))
        ->add_option("--n", ctx.truncation, "family truncation size");

    auto* projection = add_input(
        app.add_subcommand("projection", "interval spectral projection and range inertia"));
    projection->add_option("--interval", ctx.interval_text, "real interval lo,hi")->required();
    projection->add_option("--n", ctx.truncation, "family truncation size");

    auto* definitize = add_input(
        app.add_subcommand("definitize", "search a definitizing polynomial"));
    definitize->add_option("--max-degree", ctx.max_degree, "largest degree to try");
    definitize->add_option("--restarts", ctx.restarts, "seeded restarts per degree");
    definitize->add_option("--n", ctx.truncation, "family truncation size");

    auto* analyze = add_input(
        app.add_subcommand("family-analyze", "truncation trends over a block family"));
    analyze->add_option("--interval", ctx.interval_text, "real interval lo,hi")->required();
    analyze->add_option("--N-list", ctx.n_list_text, "truncation sizes, e.g. 2,4,8,16");

    auto* growth = add_input(
        app.add_subcommand("growth-fit", "non-real resolvent growth order near a real point"));
    growth->add_option("--x0", ctx.x0, "real point of approach")->required();
    growth->add_option("--n", ctx.truncation, "family truncation size");
    growth->add_option("--y-max", ctx.y_max, "largest imaginary offset");
    growth->add_option("--y-min", ctx.y_min, "smallest imaginary offset");
    growth->add_option("--y-points", ctx.y_points, "sample count (geometric)");

    auto* pseudo = add_input(
        app.add_subcommand("pseudospectrum", "sigma_min(T - z) over a rectangular grid"));
    pseudo->add_option("--rect", ctx.rect_text, "re_lo,re_hi,im_lo,im_hi")->required();
    pseudo->add_option("--nx", ctx.nx, "horizontal samples");
    pseudo->add_option("--ny", ctx.ny, "vertical samples");
    pseudo->add_option("--n", ctx.truncation, "family truncation size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), ctx);
    } catch (const krein::Error& e) {
        OrderedJson err;
        err["error"]["code"] = e.code();
        err["error"]["message"] = e.what();
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        OrderedJson err;
        err["error"]["code"] = "Internal";
        err["error"]["message"] = e.what();
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
}
