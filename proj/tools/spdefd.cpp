// Command-line surface: stability tables, mean-square convergence studies,
// multilevel tranche pricing, single-path solves and per-mode decay
// estimates, all emitted as '#'-annotated CSV (or JSON with --json).
//
// Exit codes: 0 success, 2 argument error, 3 stability violation (unless
// --force), 4 numerical overflow.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdefd/credit.hpp"
#include "spdefd/errors.hpp"
#include "spdefd/harness.hpp"
#include "spdefd/stability.hpp"
#include "spdefd/util.hpp"

using json = nlohmann::json;
using namespace spdefd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgs = 2;
constexpr int kExitUnstable = 3;
constexpr int kExitOverflow = 4;

class StabilityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOpts {
    double rho = 0.2;
    double mu = 0.081;
    double theta = 0.5;
    double sigma = -1.0;
    std::string variant = "compact";
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    std::string out;
    bool force = false;
    bool to_json = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scheme = true) {
    cmd->set_config("--config", "", "flat key=value configuration file");
    cmd->add_option("--rho", o.rho, "correlation in [0,1)")->check(CLI::Range(0.0, 0.999999));
    cmd->add_option("--mu", o.mu, "drift per unit time");
    if (with_scheme) {
        cmd->add_option("--theta", o.theta, "drift implicitness in [0,1]")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--sigma", o.sigma, "Ito-term implicitness in [-1,1]")
            ->check(CLI::Range(-1.0, 1.0));
        cmd->add_option("--variant", o.variant, "Ito stencil: compact | iterated")
            ->check(CLI::IsMember({"compact", "iterated"}));
    }
    cmd->add_option("--seed", o.seed, "random stream seed");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", o.out, "write output to a file instead of stdout");
    cmd->add_flag("--force", o.force, "run even outside the stability region");
    cmd->add_flag("--json", o.to_json, "emit a JSON document instead of CSV");
}

ItoVariant variant_of(const std::string& name) {
    return name == "iterated" ? ItoVariant::IteratedD1 : ItoVariant::CompactD2;
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) throw std::runtime_error("cannot open output file: " + o.out);
        f << text;
    }
}

/// Refuse configurations outside the mean-square stability region unless
/// forced; lambda = k/h^2 is constant along the refinement ladder.
void stability_gate(double rho, double theta, double sigma, double k, double h,
                    bool force) {
    const StabilityReport r = classify(rho, theta, sigma, k, h);
    if (!r.stable && !force)
        throw StabilityViolation(
            "k/h^2 = " + format_full(r.lambda) + " outside the stability region (limit " +
            format_full(r.max_ratio) + "); pass --force to run anyway");
}

// ---------------------------------------------------------------------------

int cmd_stability(const CommonOpts& o, double rho_max, int steps) {
    std::ostringstream csv;
    csv << "# spdefd stability sweep\n";
    csv << "# theta=" << format_full(o.theta) << " sigma=" << format_full(o.sigma)
        << " rho_max=" << format_full(rho_max) << " steps=" << steps << "\n";
    csv << "rho,theta,sigma,f,limit,unconditional\n";
    json rows = json::array();
    for (int i = 0; i <= steps; ++i) {
        const double rho = rho_max * static_cast<double>(i) / static_cast<double>(steps);
        const double f = stability_function(rho, o.theta, o.sigma);
        const bool unconditional = f <= 0.0;
        csv << format_full(rho) << ',' << format_full(o.theta) << ','
            << format_full(o.sigma) << ',' << format_full(f) << ',';
        if (!unconditional) csv << format_full(1.0 / f);
        csv << ',' << (unconditional ? 1 : 0) << "\n";
        if (o.to_json) {
            json row = {{"rho", rho}, {"theta", o.theta}, {"sigma", o.sigma},
                        {"f", f},     {"unconditional", unconditional}};
            if (!unconditional) row["limit"] = 1.0 / f;
            rows.push_back(row);
        }
    }
    if (o.to_json) {
        const json doc = {{"command", "stability"}, {"rows", rows}};
        emit(o, doc.dump() + "\n");
    } else {
        emit(o, csv.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ConvergeOpts {
    int levels = 5;
    long samples = 1000;
    double h0 = 4.0 / 3.0;
    double k0 = 0.25;
    double x_lo = -16.0 / 3.0;
    double x_hi = 16.0;
    double x0 = 5.0;
    double T = 5.0;
    bool bounded = false;
    std::string schemes = "explicit,implicit,cn";
};

int cmd_converge(const CommonOpts& o, const ConvergeOpts& c) {
    struct Named {
        std::string label;
        SchemeParams scheme;
    };
    std::vector<Named> schemes;
    std::stringstream list(c.schemes);
    std::string tok;
    while (std::getline(list, tok, ',')) {
        if (tok == "explicit") schemes.push_back({tok, explicit_scheme()});
        else if (tok == "implicit") schemes.push_back({tok, drift_implicit_scheme()});
        else if (tok == "cn") schemes.push_back({tok, crank_nicolson_anti_scheme()});
        else if (tok == "custom")
            schemes.push_back({"custom", SchemeParams{o.theta, o.sigma,
                                                      variant_of(o.variant),
                                                      Boundary::DirichletZero}});
        else throw CLI::ValidationError("--schemes", "unknown scheme: " + tok);
    }
    if (schemes.empty()) throw CLI::ValidationError("--schemes", "no schemes given");

    ConvergenceConfig cfg;
    cfg.params.rho = o.rho;
    cfg.params.mu = o.mu;
    cfg.params.x0 = c.x0;
    cfg.params.x_lo = c.bounded ? 0.0 : c.x_lo;
    cfg.params.x_hi = c.x_hi;
    cfg.params.T = c.T;
    cfg.h0 = c.h0;
    cfg.k0 = c.k0;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.params.validate();

    for (const auto& s : schemes)
        stability_gate(o.rho, s.scheme.theta, s.scheme.sigma, c.k0, c.h0, o.force);

    const bool with_exact = !c.bounded;
    std::ostringstream csv;
    csv << "# spdefd convergence study\n";
    csv << "# rho=" << format_full(o.rho) << " mu=" << format_full(o.mu)
        << " x0=" << format_full(c.x0) << " domain=[" << format_full(cfg.params.x_lo)
        << "," << format_full(c.x_hi) << "] T=" << format_full(c.T) << "\n";
    csv << "# h0=" << format_full(c.h0) << " k0=" << format_full(c.k0)
        << " samples=" << c.samples << " seed=" << o.seed
        << " bounded=" << (c.bounded ? 1 : 0) << "\n";
    csv << "level,h,k,E2,E2_stderr,e2,e2_stderr,scheme\n";
    json rows = json::array();
    for (const auto& s : schemes) {
        ConvergenceConfig run_cfg = cfg;
        run_cfg.scheme = s.scheme;
        for (int l = 0; l < c.levels; ++l) {
            const auto [h, k] = level_sequence(l, c.h0, c.k0);
            const LevelErrors errs = measure_level(run_cfg, l, c.samples, with_exact);
            csv << l << ',' << format_full(h) << ',' << format_full(k) << ',';
            if (with_exact)
                csv << format_full(errs.exact2.value) << ','
                    << format_full(errs.exact2.std_error) << ',';
            else
                csv << ",,";
            csv << format_full(errs.two_grid2.value) << ','
                << format_full(errs.two_grid2.std_error) << ',' << s.label << "\n";
            if (o.to_json) {
                json row = {{"level", l},
                            {"h", h},
                            {"k", k},
                            {"e2", errs.two_grid2.value},
                            {"e2_stderr", errs.two_grid2.std_error},
                            {"scheme", s.label}};
                if (with_exact) {
                    row["E2"] = errs.exact2.value;
                    row["E2_stderr"] = errs.exact2.std_error;
                }
                rows.push_back(row);
            }
        }
    }
    if (o.to_json) {
        const json doc = {{"command", "converge"}, {"samples", c.samples}, {"rows", rows}};
        emit(o, doc.dump() + "\n");
    } else {
        emit(o, csv.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct PriceOpts {
    int levels = 3;
    long samples = 10000;
    long min_samples = 100;
    double alpha = 1.0;
    int J0 = 10;
    double k0 = 0.25;
    double x_hi = 16.0;
    double x0 = 5.0;
    double T = 5.0;
    double attach = 0.0;
    double detach = 0.03;
    double rate = 0.042;
    double interval = 0.25;
    int payments = 20;
};

int cmd_price(const CommonOpts& o, const PriceOpts& c) {
    PriceConfig cfg;
    cfg.params.rho = o.rho;
    cfg.params.mu = o.mu;
    cfg.params.x0 = c.x0;
    cfg.params.x_lo = 0.0;
    cfg.params.x_hi = c.x_hi;
    cfg.params.T = c.T;
    cfg.tranche = TrancheSpec{c.attach, c.detach, c.rate, c.interval, c.payments};
    cfg.scheme = SchemeParams{o.theta, o.sigma, variant_of(o.variant),
                              Boundary::DirichletZero};
    cfg.J0 = c.J0;
    cfg.k0 = c.k0;
    cfg.alpha = c.alpha;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.params.validate();
    cfg.tranche.validate();

    const double h0 = c.alpha == 1.0
                          ? c.x_hi / c.J0
                          : std::pow(c.x_hi, c.alpha) / static_cast<double>(c.J0);
    stability_gate(o.rho, o.theta, o.sigma, c.k0, h0, o.force);

    std::ostringstream csv;
    csv << "# spdefd tranche spread-leg pricing\n";
    csv << "# rho=" << format_full(o.rho) << " mu=" << format_full(o.mu)
        << " x0=" << format_full(c.x0) << " x_hi=" << format_full(c.x_hi)
        << " T=" << format_full(c.T) << "\n";
    csv << "# tranche=[" << format_full(c.attach) << "," << format_full(c.detach)
        << "] rate=" << format_full(c.rate) << " interval=" << format_full(c.interval)
        << " payments=" << c.payments << "\n";
    csv << "# theta=" << format_full(o.theta) << " sigma=" << format_full(o.sigma)
        << " alpha=" << format_full(c.alpha) << " J0=" << c.J0
        << " k0=" << format_full(c.k0) << " samples=" << c.samples
        << " min_samples=" << c.min_samples << " seed=" << o.seed << "\n";
    csv << "level,alpha,N_l,mean_Yl,V_l,stderr\n";

    json levels = json::array();
    double combined = 0.0;
    double combined_var = 0.0;
    for (int l = 0; l <= c.levels; ++l) {
        const long n = std::max<long>(
            c.min_samples,
            static_cast<long>(static_cast<double>(c.samples) * std::pow(4.0, -l)));
        const LevelEstimate est = price_level(cfg, l, n);
        combined += est.mean;
        combined_var += est.variance / static_cast<double>(est.n_samples);
        csv << l << ',' << format_full(c.alpha) << ',' << est.n_samples << ','
            << format_full(est.mean) << ',' << format_full(est.variance) << ','
            << format_full(est.std_error) << "\n";
        levels.push_back({{"level", l},
                          {"alpha", c.alpha},
                          {"N_l", est.n_samples},
                          {"mean_Yl", est.mean},
                          {"V_l", est.variance},
                          {"stderr", est.std_error}});
    }
    const json summary = {{"combined_estimate", combined},
                          {"combined_variance", combined_var}};
    if (o.to_json) {
        json doc = {{"command", "price"},
                    {"alpha", c.alpha},
                    {"levels", levels},
                    {"combined_estimate", combined},
                    {"combined_variance", combined_var}};
        emit(o, doc.dump() + "\n");
    } else {
        csv << "# summary " << summary.dump() << "\n";
        emit(o, csv.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SolveOpts {
    int J = 16;
    double k = 0.25;
    double T = 5.0;
    double x_lo = -16.0 / 3.0;
    double x_hi = 16.0;
    double x0 = 5.0;
    double alpha = 1.0;
};

int cmd_solve(const CommonOpts& o, const SolveOpts& c) {
    ModelParams params;
    params.rho = o.rho;
    params.mu = o.mu;
    params.x0 = c.x0;
    params.x_lo = c.alpha == 1.0 ? c.x_lo : 0.0;
    params.x_hi = c.x_hi;
    params.T = c.T;
    params.validate();
    const SchemeParams scheme{o.theta, o.sigma, variant_of(o.variant),
                              Boundary::DirichletZero};

    const Grid grid = c.alpha == 1.0
                          ? build_uniform(params.x_lo, params.x_hi, c.J)
                          : build_stretched(params.x_hi, c.J, c.alpha, params);
    stability_gate(o.rho, o.theta, o.sigma, c.k, grid.h, o.force);

    const BrownianPath path =
        sample_path(c.T, c.k, NormalStream{o.seed, 0, 0, StreamPurpose::PathDraws});
    const Field v0 = dirac_hat_projection(grid, c.x0);
    const Field vt = run(grid, v0, path, scheme, params);
    const double m_t = path.terminal();

    const bool with_exact = c.alpha == 1.0;
    std::ostringstream csv;
    csv << "# spdefd single-path solve\n";
    csv << "# rho=" << format_full(o.rho) << " mu=" << format_full(o.mu)
        << " x0=" << format_full(c.x0) << " T=" << format_full(c.T)
        << " J=" << c.J << " k=" << format_full(c.k) << " alpha=" << format_full(c.alpha)
        << " theta=" << format_full(o.theta) << " sigma=" << format_full(o.sigma)
        << " seed=" << o.seed << "\n";
    csv << "# terminal_brownian=" << format_full(m_t) << "\n";
    json rows = json::array();
    if (with_exact) {
        csv << "x,v,exact,error\n";
        for (int j = 0; j <= grid.J; ++j) {
            const double ex = exact_solution(params, c.T, m_t, grid.x[j]);
            csv << format_full(grid.x[j]) << ',' << format_full(vt[j]) << ','
                << format_full(ex) << ',' << format_full(vt[j] - ex) << "\n";
            if (o.to_json)
                rows.push_back({{"x", grid.x[j]}, {"v", vt[j]}, {"exact", ex}});
        }
    } else {
        csv << "y,x,v\n";
        for (int j = 0; j <= grid.J; ++j) {
            csv << format_full(grid.y[j]) << ',' << format_full(grid.x[j]) << ','
                << format_full(vt[j]) << "\n";
            if (o.to_json)
                rows.push_back({{"y", grid.y[j]}, {"x", grid.x[j]}, {"v", vt[j]}});
        }
    }
    if (o.to_json) {
        const json doc = {{"command", "solve"},
                          {"terminal_brownian", m_t},
                          {"rows", rows}};
        emit(o, doc.dump() + "\n");
    } else {
        emit(o, csv.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ModeDecayOpts {
    double phi = std::numbers::pi;
    double lambda = 0.5;
    double h = 1.0;
    long steps = 8;
    long samples = 10000;
};

int cmd_mode_decay(const CommonOpts& o, const ModeDecayOpts& c) {
    const double k = c.lambda * c.h * c.h;
    const ModeDecayResult r = empirical_mode_decay(c.phi, k, c.h, o.rho, o.theta,
                                                   o.sigma, c.steps, c.samples, o.seed,
                                                   o.threads);
    if (o.to_json) {
        const json doc = {{"command", "mode-decay"}, {"phi", c.phi},
                          {"k", k},                  {"h", c.h},
                          {"rho", o.rho},            {"theta", o.theta},
                          {"sigma", o.sigma},        {"estimate", r.estimate},
                          {"stderr", r.std_error},   {"closed_form", r.closed_form}};
        emit(o, doc.dump() + "\n");
        return kExitOk;
    }
    std::ostringstream csv;
    csv << "# spdefd empirical mode decay\n";
    csv << "# steps=" << c.steps << " samples=" << c.samples << " seed=" << o.seed << "\n";
    csv << "phi,k,h,rho,theta,sigma,estimate,stderr,closed_form\n";
    csv << format_full(c.phi) << ',' << format_full(k) << ',' << format_full(c.h) << ','
        << format_full(o.rho) << ',' << format_full(o.theta) << ','
        << format_full(o.sigma) << ',' << format_full(r.estimate) << ','
        << format_full(r.std_error) << ',' << format_full(r.closed_form) << "\n";
    emit(o, csv.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-difference and Monte Carlo toolkit for a linear parabolic "
                 "SPDE with multiplicative gradient noise"};
    app.require_subcommand(1);

    CommonOpts stab_o, conv_o, price_o, solve_o, mode_o;
    double rho_max = 0.99;
    int rho_steps = 99;
    ConvergeOpts conv_c;
    PriceOpts price_c;
    SolveOpts solve_c;
    ModeDecayOpts mode_c;

    CLI::App* stab = app.add_subcommand("stability", "closed-form stability sweep over rho");
    add_common(stab, stab_o);
    stab->add_option("--rho-max", rho_max, "largest rho in the sweep")
        ->check(CLI::Range(0.0, 0.999999));
    stab->add_option("--steps", rho_steps, "number of sweep intervals")
        ->check(CLI::Range(1, 1000000));

    CLI::App* conv = app.add_subcommand("converge", "mean-square convergence study");
    add_common(conv, conv_o);
    conv->add_option("--levels", conv_c.levels, "number of refinement levels (>= 2)")
        ->check(CLI::Range(2, 16));
    conv->add_option("--samples", conv_c.samples, "Brownian paths per level (>= 2)")
        ->check(CLI::Range(2L, 100000000L));
    conv->add_option("--h0", conv_c.h0, "level-0 mesh width");
    conv->add_option("--k0", conv_c.k0, "level-0 timestep");
    conv->add_option("--x-lo", conv_c.x_lo, "left domain end");
    conv->add_option("--x-hi", conv_c.x_hi, "right domain end");
    conv->add_option("--x0", conv_c.x0, "Dirac location");
    conv->add_option("--T", conv_c.T, "horizon");
    conv->add_flag("--bounded", conv_c.bounded,
                   "absorbing barrier at 0 (two-grid measure only)");
    conv->add_option("--schemes", conv_c.schemes,
                     "comma list of explicit|implicit|cn|custom");

    CLI::App* price = app.add_subcommand("price", "multilevel tranche spread-leg pricing");
    add_common(price, price_o);
    price->add_option("--levels", price_c.levels, "finest refinement level")
        ->check(CLI::Range(0, 12));
    price->add_option("--samples", price_c.samples, "level-0 sample budget")
        ->check(CLI::Range(2L, 100000000L));
    price->add_option("--min-samples", price_c.min_samples, "sample floor per level")
        ->check(CLI::Range(2L, 100000000L));
    price->add_option("--alpha", price_c.alpha, "grid stretching exponent in (0,1]")
        ->check(CLI::Range(1e-6, 1.0));
    price->add_option("--J0", price_c.J0, "level-0 mesh intervals")->check(CLI::Range(2, 100000));
    price->add_option("--k0", price_c.k0, "level-0 timestep");
    price->add_option("--x-hi", price_c.x_hi, "domain truncation");
    price->add_option("--x0", price_c.x0, "Dirac location");
    price->add_option("--T", price_c.T, "maturity");
    price->add_option("--tranche-a", price_c.attach, "attachment point");
    price->add_option("--tranche-d", price_c.detach, "detachment point");
    price->add_option("--rate", price_c.rate, "interest rate");
    price->add_option("--interval", price_c.interval, "payment interval");
    price->add_option("--payments", price_c.payments, "number of payments")
        ->check(CLI::Range(1, 10000));

    CLI::App* solve = app.add_subcommand("solve", "single-path terminal field");
    add_common(solve, solve_o);
    solve->add_option("--J", solve_c.J, "mesh intervals")->check(CLI::Range(2, 1000000));
    solve->add_option("--k", solve_c.k, "timestep");
    solve->add_option("--T", solve_c.T, "horizon");
    solve->add_option("--x-lo", solve_c.x_lo, "left domain end (alpha = 1 only)");
    solve->add_option("--x-hi", solve_c.x_hi, "right domain end");
    solve->add_option("--x0", solve_c.x0, "Dirac location");
    solve->add_option("--alpha", solve_c.alpha, "grid stretching exponent in (0,1]")
        ->check(CLI::Range(1e-6, 1.0));

    CLI::App* mode = app.add_subcommand("mode-decay", "empirical per-mode decay rate");
    add_common(mode, mode_o);
    mode->add_option("--phi", mode_c.phi, "mode angle in [-pi, pi]");
    // the amplification depends on k and h only through lambda = k/h^2
    mode->add_option("--lambda", mode_c.lambda, "mesh ratio k/h^2");
    mode->add_option("--steps", mode_c.steps, "recursion steps")->check(CLI::Range(1L, 100000L));
    mode->add_option("--samples", mode_c.samples, "Monte Carlo samples (>= 1000)")
        ->check(CLI::Range(1000L, 100000000L));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitArgs;
    }

    try {
        if (stab->parsed()) return cmd_stability(stab_o, rho_max, rho_steps);
        if (conv->parsed()) return cmd_converge(conv_o, conv_c);
        if (price->parsed()) return cmd_price(price_o, price_c);
        if (solve->parsed()) return cmd_solve(solve_o, solve_c);
        if (mode->parsed()) return cmd_mode_decay(mode_o, mode_c);
    } catch (const StabilityViolation& e) {
        std::cerr << "stability violation: " << e.what() << "\n";
        return kExitUnstable;
    } catch (const OverflowError& e) {
        std::cerr << "numerical overflow: " << e.what() << "\n";
        return kExitOverflow;
    } catch (const SingularSystemError& e) {
        std::cerr << "singular system: " << e.what() << "\n";
        return kExitOverflow;
    } catch (const CLI::Error& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return kExitArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgs;
    }
    return kExitArgs;
}
