#include "confdist/cli.hpp"

#include "confdist/asymptotic.hpp"
#include "confdist/bayes.hpp"
#include "confdist/confidence.hpp"
#include "confdist/coverage.hpp"
#include "confdist/csv.hpp"
#include "confdist/errors.hpp"
#include "confdist/specfun.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace confdist::cli {

namespace {

struct Config {
    // global
    std::uint64_t seed = 0;
    std::string out_path;
    std::size_t nrep = 100000;
    std::string method = "quad";

    // shared by subcommands
    std::string model = "location:normal";
    std::optional<double> y0;
    std::optional<double> r0;
    std::string grid;
    std::string beta = "0.5";

    // coverage
    std::string case_name;
    std::string theta;
    std::string rho;
    double gamma = 1.0;
    double n = 10.0;
    double a = 0.0;
    double c = 0.0;

    // figure
    std::string figure;

    // prior
    bool verify = false;
};

double parse_real(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v))
        throw InvalidParameter("not a finite number: '" + text + "'");
    return v;
}

std::vector<Method> methods_of(const std::string& m) {
    if (m == "quad") return {Method::quadrature};
    if (m == "mc") return {Method::monte_carlo};
    if (m == "both") return {Method::quadrature, Method::monte_carlo};
    throw InvalidParameter("--method must be quad, mc or both");
}

double data_value(const Config& cfg) {
    if (cfg.y0 && cfg.r0) throw InvalidParameter("give only one of --y0 and --r0");
    if (cfg.r0) return *cfg.r0;
    if (cfg.y0) return *cfg.y0;
    throw InvalidParameter("data value required (--y0 or --r0)");
}

std::vector<double> require_grid(const std::string& text, const char* flag) {
    if (text.empty()) throw InvalidParameter(std::string(flag) + " is required");
    return parse_grid(text);
}

// A negative value after a long option ("--grid -4:4:0.05") would otherwise be
// read as a short flag; fuse such pairs into "--grid=-4:4:0.05".
std::vector<std::string> fuse_negative_values(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) == 0 && a.size() > 2 && a.find('=') == std::string::npos &&
            i + 1 < args.size()) {
            const std::string& next = args[i + 1];
            if (next.size() > 1 && next[0] == '-' &&
                (std::isdigit(static_cast<unsigned char>(next[1])) || next[1] == '.')) {
                out.push_back(a + "=" + next);
                ++i;
                continue;
            }
        }
        out.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// curve

int cmd_curve(const Config& cfg, std::ostream& out, std::ostream& err) {
    const ModelPtr model = make_model(parse_model_descriptor(cfg.model));
    const double y0 = data_value(cfg);
    const auto grid = require_grid(cfg.grid, "--grid");
    for (double t : grid) model->require_param(t);
    const bool curved = dynamic_cast<const CurvedRadiusModel*>(model.get()) != nullptr;

    const Posterior post(model, reference_prior(*model), y0);
    out << "theta,p_value,survivor" << (curved ? ",s_minus_p" : "") << '\n';
    int status = kExitOk;
    for (double t : grid) {
        std::optional<double> p, s;
        try {
            p = p_value(*model, y0, t);
            s = posterior_survivor(post, t);
        } catch (const NumericError& e) {
            err << "row theta=" << csv_real(t) << ": " << e.what() << '\n';
            status = kExitNumeric;
        }
        out << csv_real(t) << ',' << csv_real(p) << ',' << csv_real(s);
        if (curved) out << ',' << csv_real(p && s ? std::optional<double>(*s - *p) : std::nullopt);
        out << '\n';
    }
    return status;
}

// ---------------------------------------------------------------------------
// coverage

struct CoverageCase {
    ModelPtr model;
    QuantileProcedure proc;
    std::function<double(double, double)> quadrature;
};

CoverageCase make_case(const Config& cfg) {
    if (cfg.case_name == "bounded")
        return {std::make_shared<BoundedMeanNormal>(), bayes_flat_bounded(),
                propn_bounded_quadrature};
    if (cfg.case_name == "curved")
        return {std::make_shared<CurvedRadiusModel>(), bayes_flat_curved(),
                propn_curved_quadrature};
    if (cfg.case_name == "expansion") {
        auto model = std::make_shared<VarianceCurvatureNormal>(cfg.gamma, cfg.n);
        asymptotic::ExpansionParams p{cfg.gamma, cfg.n, cfg.a, cfg.c, 0.5};
        return {model, expansion_bayes_procedure(p), {}};
    }
    if (cfg.case_name == "confidence") {
        const ModelPtr model = make_model(parse_model_descriptor(cfg.model));
        return {model, confidence_procedure(model), {}};
    }
    throw InvalidParameter("unknown --case '" + cfg.case_name +
                           "' (bounded, curved, expansion, confidence)");
}

int run_audit(const CoverageCase& cc, const std::vector<double>& thetas,
              const std::vector<double>& betas, const Config& cfg, std::ostream& out) {
    const auto methods = methods_of(cfg.method);
    PropnQuery q{thetas, betas, cfg.nrep, cfg.seed};
    write_csv(out, audit(*cc.model, cc.proc, q, methods, cc.quadrature));
    return kExitOk;
}

int cmd_coverage(const Config& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.case_name.empty()) throw InvalidParameter("--case is required");
    const CoverageCase cc = make_case(cfg);
    if (!cfg.theta.empty() && !cfg.rho.empty()) throw InvalidParameter("give --theta or --rho, not both");
    const auto thetas = require_grid(cfg.rho.empty() ? cfg.theta : cfg.rho, "--theta/--rho");
    const auto betas = parse_list(cfg.beta);
    if (cfg.case_name == "expansion") {
        for (double t : thetas)
            if (!asymptotic::in_window(t, cfg.n))
                err << "warning: theta=" << csv_real(t) << " outside |theta| <= sqrt(n)\n";
    }
    return run_audit(cc, thetas, betas, cfg, out);
}

// ---------------------------------------------------------------------------
// figure

void figure_curve(const ModelPtr& model, double y0, const std::vector<double>& grid,
                  std::ostream& out) {
    const Posterior post(model, reference_prior(*model), y0);
    out << "theta,p_value,survivor\n";
    for (double t : grid)
        out << csv_real(t) << ',' << csv_real(p_value(*model, y0, t)) << ','
            << csv_real(posterior_survivor(post, t)) << '\n';
}

void figure_expansion_propn(const Config& cfg, const std::vector<double>& betas,
                            std::ostream& out) {
    const VarianceCurvatureNormal model(cfg.gamma, cfg.n);
    asymptotic::ExpansionParams base{cfg.gamma, cfg.n, cfg.a, cfg.c, 0.5};
    const QuantileProcedure proc = expansion_bayes_procedure(base);
    const auto thetas = step_grid(-3.0, 3.0, 0.1);
    std::vector<asymptotic::PropnFormulaRow> rows(betas.size() * thetas.size());
    parallel_for(rows.size(), [&](std::size_t k) {
        asymptotic::ExpansionParams p = base;
        p.beta = betas[k / thetas.size()];
        const double theta = thetas[k % thetas.size()];
        const PropnEstimate e = propn_mc(model, proc, theta, p.beta, cfg.nrep, cfg.seed + k);
        rows[k] = {theta, p.beta, p.beta, asymptotic::propn_formula(theta, p), e.actual,
                   e.std_error};
    });
    asymptotic::write_csv(out, std::span<const asymptotic::PropnFormulaRow>(rows));
}

int cmd_figure(const Config& cfg, std::ostream& out) {
    const std::string& id = cfg.figure;
    Config c = cfg;
    if (id == "fig1") {
        figure_curve(make_model(LocationSpec{Kernel::normal, 1.0}), 0.0, step_grid(-4, 4, 0.05), out);
    } else if (id == "fig2") {
        figure_curve(make_model(LocationSpec{Kernel::extreme_value, 1.0}), 0.0,
                     step_grid(-4, 4, 0.05), out);
    } else if (id == "fig3") {
        const auto model = make_model(LocationSpec{Kernel::normal, 1.0});
        const auto pts = neyman_region_boundary(confidence_procedure(model), 0.975,
                                                step_grid(-3, 6, 0.05));
        out << "y,theta_hat\n";
        for (const auto& p : pts) out << csv_real(p.y) << ',' << csv_real(p.theta_hat) << '\n';
    } else if (id == "fig4" || id == "fig5") {
        c.case_name = "bounded";
        return run_audit(make_case(c), step_grid(0, 6, 0.1),
                         id == "fig4" ? std::vector<double>{0.5} : std::vector<double>{0.1, 0.9},
                         c, out);
    } else if (id == "fig6") {
        out << "rho,p,s,error\n";
        for (const auto& p : bayes_error_curve(5.0, step_grid(0, 10, 0.1)))
            out << csv_real(p.rho) << ',' << csv_real(p.p) << ',' << csv_real(p.s) << ','
                << csv_real(p.error) << '\n';
    } else if (id == "fig7" || id == "fig8") {
        c.case_name = "curved";
        return run_audit(make_case(c), step_grid(0, 10, 0.1),
                         id == "fig7" ? std::vector<double>{0.5} : std::vector<double>{0.1, 0.9},
                         c, out);
    } else if (id == "fig9") {
        asymptotic::ExpansionParams p{cfg.gamma, cfg.n, cfg.a, cfg.c, 0.975};
        const auto curve = asymptotic::expansion_curve(step_grid(-3, 3, 0.05), p);
        asymptotic::write_csv(out, std::span<const asymptotic::ExpansionCurvePoint>(curve));
    } else if (id == "fig10" || id == "fig11") {
        figure_expansion_propn(
            cfg, id == "fig10" ? std::vector<double>{0.5} : std::vector<double>{0.1, 0.9}, out);
    } else {
        throw InvalidParameter("unknown figure id '" + id + "' (fig1..fig11)");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// prior

int cmd_prior(const Config& cfg, std::ostream& out, std::ostream& err) {
    const ModelPtr model = make_model(parse_model_descriptor(cfg.model));
    const double y0 = data_value(cfg);
    const auto grid = require_grid(cfg.grid, "--grid");
    for (double t : grid) model->require_param(t);
    int status = kExitOk;
    out << "theta,default_prior\n";
    for (double t : grid) {
        std::optional<double> v;
        try {
            v = default_prior(*model, y0, t);
        } catch (const std::exception& e) {
            err << "row theta=" << csv_real(t) << ": " << e.what() << '\n';
            status = kExitNumeric;
        }
        out << csv_real(t) << ',' << csv_real(v) << '\n';
    }
    if (cfg.verify)
        out << "# max_abs_discrepancy," << csv_real(default_posterior_equals_confidence(model, y0, grid))
            << '\n';
    return status;
}

// ---------------------------------------------------------------------------
// quantile

int cmd_quantile(const Config& cfg, std::ostream& out) {
    const ModelPtr model = make_model(parse_model_descriptor(cfg.model));
    const double y0 = data_value(cfg);
    const auto betas = parse_list(cfg.beta);
    const Posterior post(model, reference_prior(*model), y0);
    out << "beta,confidence_quantile,clamped,bayes_quantile\n";
    for (double b : betas) {
        const ConfidenceBound cb = confidence_quantile(*model, y0, b);
        out << csv_real(b) << ',' << csv_real(cb.value) << ',' << (cb.clamped ? 1 : 0) << ','
            << csv_real(posterior_quantile(post, b)) << '\n';
    }
    return kExitOk;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw InvalidParameter("grid must be start:stop:step, got '" + text + "'");
    return step_grid(parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]));
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_real(item));
    if (out.empty()) throw InvalidParameter("empty list");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Confidence distributions, Bayes posteriors and coverage audits"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "Base seed for Monte Carlo (cell k uses seed + k)");
    app.add_option("--out", cfg.out_path, "Write CSV to this path instead of standard output");
    app.add_option("--nrep", cfg.nrep, "Monte Carlo repetitions per cell")
        ->check(CLI::Range(std::size_t{1000}, std::size_t{1000000000}));
    app.add_option("--method", cfg.method, "quad, mc or both")
        ->check(CLI::IsMember({"quad", "mc", "both"}));

    auto* curve = app.add_subcommand("curve", "p-value and posterior survivor curves");
    auto* coverage = app.add_subcommand("coverage", "Neyman-diagram coverage audit");
    auto* figure = app.add_subcommand("figure", "Curve data for one figure (fig1..fig11)");
    auto* prior = app.add_subcommand("prior", "Default prior -F_theta / F_y over a grid");
    auto* quantile = app.add_subcommand("quantile", "Confidence and Bayes quantiles");

    for (auto* sub : {curve, prior, quantile}) {
        sub->add_option("--model", cfg.model, "Model descriptor");
        sub->add_option("--y0", cfg.y0, "Observed data");
        sub->add_option("--r0", cfg.r0, "Observed radius (curved model)");
    }
    curve->add_option("--grid", cfg.grid, "theta grid start:stop:step");
    prior->add_option("--grid", cfg.grid, "theta grid start:stop:step");
    prior->add_flag("--verify", cfg.verify, "Append max |s - p| under the default prior");
    quantile->add_option("--beta", cfg.beta, "Comma-separated levels");

    coverage->add_option("--case", cfg.case_name, "bounded, curved, expansion or confidence");
    coverage->add_option("--model", cfg.model, "Model descriptor for --case confidence");
    coverage->add_option("--theta", cfg.theta, "theta grid start:stop:step");
    coverage->add_option("--rho", cfg.rho, "rho grid start:stop:step");
    coverage->add_option("--beta", cfg.beta, "Comma-separated levels");
    for (auto* sub : {coverage, figure}) {
        sub->add_option("--gamma", cfg.gamma, "Curvature");
        sub->add_option("--n", cfg.n, "Sample size");
        sub->add_option("--a", cfg.a, "Prior tilt");
        sub->add_option("--c", cfg.c, "Prior bend");
    }
    figure->add_option("id", cfg.figure, "fig1..fig11")->required();

    std::vector<std::string> rev = fuse_negative_values(args);
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    std::ofstream file;
    if (!cfg.out_path.empty()) {
        file.open(cfg.out_path);
        if (!file) {
            err << "error: cannot open " << cfg.out_path << '\n';
            return kExitConfig;
        }
    }
    std::ostream& sink = cfg.out_path.empty() ? out : file;

    try {
        methods_of(cfg.method);
        if (*curve) return cmd_curve(cfg, sink, err);
        if (*coverage) return cmd_coverage(cfg, sink, err);
        if (*figure) return cmd_figure(cfg, sink);
        if (*prior) return cmd_prior(cfg, sink, err);
        if (*quantile) return cmd_quantile(cfg, sink);
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitConfig;
}

}  // namespace confdist::cli
