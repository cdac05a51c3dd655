#include "confdist/coverage.hpp"

#include "confdist/asymptotic.hpp"
#include "confdist/confidence.hpp"
#include "confdist/csv.hpp"
#include "confdist/errors.hpp"
#include "confdist/specfun.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace confdist {

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

// Boundary refinement between a point where pred holds and one where it fails.
template <class Pred>
double bisect_boundary(Pred&& pred, double in, double out) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (in + out);
        if (mid == in || mid == out) break;
        if (std::abs(out - in) < 1e-15 * (1.0 + std::abs(mid))) break;
        (pred(mid) ? in : out) = mid;
    }
    return 0.5 * (in + out);
}

// Maximal sub-intervals of [lo, hi] where pred holds, located by a uniform scan
// and refined by bisection. The ends are kept as-is (possibly infinite) when
// pred holds there.
template <class Pred>
std::vector<Interval> scan_set(Pred&& pred, double lo, double hi, double step) {
    std::vector<Interval> out;
    const auto grid = step_grid(lo, hi, step);
    bool prev = pred(grid.front());
    double start = prev ? lo : 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const bool cur = pred(grid[k]);
        if (cur != prev) {
            const double edge = cur ? bisect_boundary(pred, grid[k], grid[k - 1])
                                    : bisect_boundary(pred, grid[k - 1], grid[k]);
            if (cur) {
                start = edge;
            } else {
                out.push_back({start, edge});
            }
            prev = cur;
        }
    }
    if (prev) out.push_back({start, hi});
    return out;
}

}  // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::confidence: return "confidence";
        case Provenance::bayes_flat: return "bayes_flat";
        case Provenance::bayes_prior: return "bayes_prior";
        case Provenance::expansion: return "expansion";
    }
    return "unknown";
}

std::string to_string(Method m) {
    return m == Method::quadrature ? "quadrature" : "monte_carlo";
}

QuantileProcedure confidence_procedure(ModelPtr model) {
    if (!model) throw InvalidParameter("confidence_procedure: null model");
    return {"confidence",
            [model](double y, double beta) { return confidence_quantile(*model, y, beta).value; },
            Provenance::confidence};
}

QuantileProcedure bayes_flat_bounded(double theta0, double sigma0) {
    if (!(sigma0 > 0.0)) throw InvalidParameter("sigma0 must be positive");
    return {"bayes_flat",
            [theta0, sigma0](double y, double beta) {
                return bounded_flat_quantile(y, beta, theta0, sigma0);
            },
            Provenance::bayes_flat};
}

QuantileProcedure bayes_flat_curved() {
    return {"bayes_flat", [](double r, double beta) { return curved_flat_quantile(r, beta); },
            Provenance::bayes_flat};
}

QuantileProcedure bayes_posterior_procedure(ModelPtr model,
                                            std::function<Prior(double y)> prior_for,
                                            std::string id) {
    if (!model || !prior_for) throw InvalidParameter("bayes_posterior_procedure: empty argument");
    return {std::move(id),
            [model, prior_for](double y, double beta) {
                return Posterior(model, prior_for(y), y).quantile(beta);
            },
            Provenance::bayes_prior};
}

QuantileProcedure expansion_bayes_procedure(const asymptotic::ExpansionParams& params) {
    params.validate();
    return {"expansion_bayes",
            [params](double y, double beta) {
                asymptotic::ExpansionParams p = params;
                p.beta = beta;
                return asymptotic::bayes_quantile_at(y, p);
            },
            Provenance::expansion};
}

bool is_monotone(const QuantileProcedure& proc, double beta, std::span<const double> y_grid) {
    double prev = -kInf;
    for (double y : y_grid) {
        const double v = proc.rule(y, beta);
        if (v < prev) return false;
        prev = v;
    }
    return true;
}

PropnEstimate propn_mc(const ScalarModel& model, const QuantileProcedure& proc, double theta,
                       double beta, std::size_t n_rep, std::uint64_t seed) {
    check_beta(beta);
    if (n_rep < 1000) throw InvalidParameter("propn_mc: n_rep must be at least 1000");
    const auto ys = sample(model, theta, n_rep, seed);
    std::size_t hits = 0;
    for (double y : ys) {
        double q;
        try {
            q = proc.rule(y, beta);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "procedure " << proc.id << " failed at y = " << y << ": " << e.what();
            throw NumericError(os.str());
        }
        if (q < theta) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n_rep);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_rep)), n_rep, seed};
}

double propn_neyman(const ScalarModel& model, const QuantileProcedure& proc, double theta,
                    double beta) {
    check_beta(beta);
    model.require_param(theta);
    const auto pred = [&](double y) {
        try {
            return proc.rule(y, beta) < theta;
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "procedure " << proc.id << " failed at y = " << y << ": " << e.what();
            throw NumericError(os.str());
        }
    };
    // Outside these quantiles the sampling mass is below 2e-16 and can be ignored.
    const double y_lo = model.quantile(1e-17, theta);
    const double y_hi = model.quantile(1.0 - 0x1.0p-53, theta);
    if (!pred(y_lo)) return 0.0;
    if (pred(y_hi)) return 1.0;
    const double yb = bisect_boundary(pred, y_lo, y_hi);
    return model.cdf(yb, theta);
}

double propn_bounded_quadrature(double theta, double beta) {
    check_beta(beta);
    if (!(theta >= 0.0)) throw DomainError("propn_bounded_quadrature: theta must be >= 0");
    const auto in_s = [&](double z) { return normal_cdf(z) < beta * normal_cdf(theta + z); };
    double total = 0.0;
    for (const Interval& iv : scan_set(in_s, -10.0, 10.0, 0.05)) {
        const double a = iv.lo == -10.0 && in_s(-10.0) ? -kInf : iv.lo;
        const double b = iv.hi == 10.0 && in_s(10.0) ? kInf : iv.hi;
        total += integrate(normal_pdf, a, b, 1e-14, 1e-13);
    }
    return total;
}

double propn_curved_quadrature(double rho, double beta) {
    check_beta(beta);
    if (!(rho >= 0.0)) throw DomainError("propn_curved_quadrature: rho must be >= 0");
    if (rho == 0.0) return 0.0;
    const double target = 1.0 - beta;
    const auto h = [&](double r) { return noncentral_chi_cdf(rho, r) - target; };
    const double h0 = h(0.0);
    if (h0 <= 0.0) return 0.0;
    double hi = rho + 10.0;
    double h_hi = h(hi);
    while (h_hi > 0.0) {
        hi *= 2.0;
        h_hi = h(hi);
    }
    const double r_star = solve_bracketed(h, 0.0, hi, h0, h_hi);
    return noncentral_chi_cdf(r_star, rho);
}

double propn_curved_indicator(double rho, double beta) {
    check_beta(beta);
    if (!(rho >= 0.0)) throw DomainError("propn_curved_indicator: rho must be >= 0");
    const double target = 1.0 - beta;
    const auto in_s = [&](double r) { return target < noncentral_chi_cdf(rho, r); };
    const auto dens = [&](double r) { return noncentral_chi_pdf(r, rho); };
    double total = 0.0;
    for (const Interval& iv : scan_set(in_s, 0.0, rho + 12.0, 0.05))
        total += integrate(dens, iv.lo, iv.hi, 1e-14, 1e-13);
    return total;
}

PropnEstimate propn_prior_avg(const ScalarModel& model, const QuantileProcedure& proc,
                              const Prior& prior, double beta, Interval theta_window,
                              AverageMethod method, std::size_t n_rep, std::uint64_t seed) {
    check_beta(beta);
    const Interval w = theta_window.intersect(prior.support()).intersect(model.param_domain());
    if (w.empty() || !w.finite())
        throw InvalidParameter("propn_prior_avg: theta window must be finite and non-empty");
    if (w.lo == w.hi) {
        if (method == AverageMethod::quadrature)
            return {propn_neyman(model, proc, w.lo, beta), 0.0, 0, seed};
        return propn_mc(model, proc, w.lo, beta, n_rep, seed);
    }
    const auto weight = [&](double t) {
        const double v = prior.weight(t);
        if (v < 0.0) throw InvalidParameter("propn_prior_avg: negative prior weight");
        return v;
    };

    if (method == AverageMethod::quadrature) {
        const double mass = integrate(weight, w.lo, w.hi, 1e-12, 1e-10);
        if (!(mass > 0.0)) throw NumericError("propn_prior_avg: prior has no mass in the window");
        const double num = integrate(
            [&](double t) { return weight(t) * propn_neyman(model, proc, t, beta); }, w.lo, w.hi,
            1e-9, 1e-8);
        return {num / mass, 0.0, 0, seed};
    }

    if (n_rep < 1000) throw InvalidParameter("propn_prior_avg: n_rep must be at least 1000");
    // Rejection sampling under a uniform envelope of the prior.
    double bound = 0.0;
    for (double t : step_grid(w.lo, w.hi, (w.hi - w.lo) / 2000.0)) bound = std::max(bound, weight(t));
    if (!(bound > 0.0)) throw NumericError("propn_prior_avg: prior has no mass in the window");
    bound *= 1.05;
    SeededUniform u(seed);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n_rep; ++i) {
        double t;
        do {
            t = w.lo + (w.hi - w.lo) * u();
        } while (u() * bound > weight(t));
        const double y = model.sample(t, 1, seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)))[0];
        if (proc.rule(y, beta) < t) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n_rep);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_rep)), n_rep, seed};
}

std::vector<BayesErrorPoint> bayes_error_curve(double r0, std::span<const double> rho_grid) {
    std::vector<BayesErrorPoint> out;
    out.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        const double p = noncentral_chi_cdf(r0, rho);
        const double s = curved_survivor(r0, rho);
        out.push_back({rho, p, s, s - p});
    }
    return out;
}

double bayes_error_quadrature(double r0, double rho) {
    if (!(r0 >= 0.0) || !(rho >= 0.0)) throw DomainError("bayes_error_quadrature: negative argument");
    const double s =
        integrate([&](double t) { return noncentral_chi_pdf(t, r0); }, rho, kInf, 1e-14, 1e-13);
    const double p =
        integrate([&](double r) { return noncentral_chi_pdf(r, rho); }, 0.0, r0, 1e-14, 1e-13);
    return s - p;
}

std::vector<BoundaryPoint> neyman_region_boundary(const QuantileProcedure& proc, double beta,
                                                  std::span<const double> y_grid) {
    check_beta(beta);
    std::vector<BoundaryPoint> out;
    out.reserve(y_grid.size());
    for (double y : y_grid) out.push_back({y, proc.rule(y, beta)});
    return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

CoverageReport audit(const ScalarModel& model, const QuantileProcedure& proc,
                     const PropnQuery& query, std::span<const Method> methods,
                     std::function<double(double, double)> quadrature) {
    if (query.theta_grid.empty() || query.beta_list.empty() || methods.empty())
        throw InvalidParameter("audit: empty theta grid, beta list or method list");
    for (double b : query.beta_list) check_beta(b);
    for (double t : query.theta_grid) model.require_param(t);

    const std::size_t nt = query.theta_grid.size();
    const std::size_t cells = query.beta_list.size() * nt;
    std::vector<std::vector<CoverageRow>> per_cell(cells);
    parallel_for(cells, [&](std::size_t k) {
        const double beta = query.beta_list[k / nt];
        const double theta = query.theta_grid[k % nt];
        for (Method m : methods) {
            CoverageRow row{theta, beta, beta, 0.0, m, std::nullopt, std::nullopt, std::nullopt};
            if (m == Method::quadrature) {
                row.actual = quadrature ? quadrature(theta, beta)
                                        : propn_neyman(model, proc, theta, beta);
            } else {
                const std::uint64_t s = query.seed + k;
                const PropnEstimate e = propn_mc(model, proc, theta, beta, query.n_rep, s);
                row.actual = e.actual;
                row.std_error = e.std_error;
                row.n_rep = e.n_rep;
                row.seed = s;
            }
            per_cell[k].push_back(row);
        }
    });

    CoverageReport report{proc.id, {}};
    for (auto& rows : per_cell)
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    return report;
}

void write_csv(std::ostream& os, const CoverageReport& report) {
    os << "procedure,theta,beta,claimed,actual,method,stderr,n_rep,seed\n";
    for (const CoverageRow& r : report.rows) {
        os << report.procedure << ',' << csv_real(r.theta) << ',' << csv_real(r.beta) << ','
           << csv_real(r.claimed) << ',' << csv_real(r.actual) << ',' << to_string(r.method)
           << ',' << csv_real(r.std_error) << ',';
        if (r.n_rep) os << *r.n_rep;
        os << ',';
        if (r.seed) os << *r.seed;
        os << '\n';
    }
}

}  // namespace confdist
