#include "wqed/cli.hpp"

#include "wqed/bound_states.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/emission.hpp"
#include "wqed/errors.hpp"
#include "wqed/field.hpp"
#include "wqed/grids.hpp"
#include "wqed/oracle.hpp"
#include "wqed/parallel.hpp"
#include "wqed/scattering.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace wqed {

std::vector<double> GridSpec::values() const {
    if (points == 0) throw ParameterError("grid needs at least one point");
    return log ? log_grid(min, max, points) : linear_grid(min, max, points);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void error_record(const std::string& kind, const std::string& message) {
    std::cerr << "{\"error\": {\"kind\": \"" << kind << "\", \"message\": \""
              << json_escape(message) << "\"}}\n";
}

void check_tolerance(double tol, const char* name) {
    if (!(tol > 0.0)) throw ParameterError(std::string(name) + " must be positive");
}

Meta base_meta(const RunConfig& c) {
    Meta m;
    m.subcommand = c.subcommand;
    m.params = c.params;
    m.tolerances = {{"quadrature", c.tol}};
    return m;
}

int emit(const RunConfig& c, const Table& table, const Meta& meta) {
    for (const auto& w : meta.warnings) std::cerr << "warning: " << w << '\n';
    write_output(table, meta, c.format, c.output);
    return kExitOk;
}

int cmd_bound_energies(const RunConfig& c) {
    const auto g = c.g_grid.values();
    Table table{{"g", "omega_minus", "omega_plus"}, {}};
    for (const auto& row : sweep_bound_energies(c.params, g)) {
        table.add({row.g, row.omega_minus, row.omega_plus});
    }
    Meta meta = base_meta(c);
    meta.settings = {{"g_points", static_cast<double>(g.size())}};
    return emit(c, table, meta);
}

int cmd_reflection(const RunConfig& c) {
    const auto ks = momentum_grid_with_edges(c.k_grid.points);
    Meta meta = base_meta(c);
    meta.settings = {{"k_interior_points", static_cast<double>(c.k_grid.points)}};
    if (c.delta_grid.points > 0) {
        const auto deltas = c.delta_grid.values();
        const auto map = reflection_map(deltas, ks, c.params);
        Table table{{"delta", "k", "omega_k", "R"}, {}};
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            for (std::size_t j = 0; j < ks.size(); ++j) {
                table.add({deltas[i], ks[j], dispersion(Momentum(ks[j]), c.params), map.at(i, j)});
            }
        }
        meta.settings.emplace_back("delta_points", static_cast<double>(deltas.size()));
        return emit(c, table, meta);
    }
    const std::vector<double> one{c.params.delta};
    const auto map = reflection_map(one, ks, c.params);
    Table table{{"k", "omega_k", "R"}, {}};
    for (std::size_t j = 0; j < ks.size(); ++j) {
        table.add({ks[j], dispersion(Momentum(ks[j]), c.params), map.at(0, j)});
    }
    return emit(c, table, meta);
}

int cmd_emission_spectrum(const RunConfig& c) {
    const auto s = spectrum(c.params, c.normalize, c.k_grid.points);
    Table table{{"k", "omega_k", "ck2"}, {}};
    for (std::size_t i = 0; i < s.k.size(); ++i) table.add({s.k[i], s.omega[i], s.weight[i]});
    Meta meta = base_meta(c);
    meta.settings = {{"k_interior_points", static_cast<double>(c.k_grid.points)},
                     {"normalized", c.normalize ? 1.0 : 0.0},
                     {"omega_ph", s.omega_ph}};
    return emit(c, table, meta);
}

int cmd_emission_prob(const RunConfig& c) {
    const auto g = c.g_grid.values();
    Table table{{"delta", "g", "p_emission"}, {}};
    for (const auto& row : emission_probability_sweep(c.params, c.delta_list, g)) {
        table.add({row.delta, row.g, row.p_emission});
    }
    Meta meta = base_meta(c);
    meta.tolerances.emplace_back("completeness", kCompletenessTol);
    meta.settings = {{"g_points", static_cast<double>(g.size())}};
    return emit(c, table, meta);
}

int cmd_field(const RunConfig& c) {
    const long cone = static_cast<long>(std::ceil(2.0 * c.params.j_hop * c.t)) + kConeMargin;
    const long half = c.half_width >= 0 ? c.half_width : cone;
    const auto prof = field_profile(c.t, half, c.params, c.tol);
    Table table{{"x", "re_phi", "im_phi", "abs2"}, {}};
    for (std::size_t i = 0; i < prof.positions.size(); ++i) {
        const cplx a = prof.amplitudes[i];
        table.add({static_cast<double>(prof.positions[i]), a.real(), a.imag(), std::norm(a)});
    }
    Meta meta = base_meta(c);
    meta.settings = {{"t", c.t},
                     {"half_width", static_cast<double>(half)},
                     {"x_max", prof.x_max},
                     {"leaked_norm", prof.leaked_norm}};
    if (!prof.warning.empty()) meta.warnings.push_back(prof.warning);
    return emit(c, table, meta);
}

int cmd_decay(const RunConfig& c) {
    const auto ts = c.t_grid.values();
    const auto d = full_dynamics(c.params, ts, c.tol);
    Meta meta = base_meta(c);
    meta.settings = {{"t_points", static_cast<double>(ts.size())},
                     {"log_time", c.t_grid.log ? 1.0 : 0.0}};
    if (c.params.lossy()) {
        Table table{{"t", "P_e_s"}, {}};
        for (std::size_t i = 0; i < ts.size(); ++i) table.add({ts[i], d.p_e_s.values[i].real()});
        meta.warnings.push_back("bound-state part is not available with losses; only P_e_s is written");
        return emit(c, table, meta);
    }
    Table table{{"t", "P_e", "P_e_s", "P_e_b"}, {}};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        table.add({ts[i], d.p_e.values[i].real(), d.p_e_s.values[i].real(), d.p_e_b.values[i].real()});
    }
    return emit(c, table, meta);
}

// Fits log|c_e^s| and its phase on [tau0, 4 tau0].
ExponentialFit fit_decay(const ModelParams& p, const DecayAnalysis& an, double tol) {
    const ScatteringIntegrator integ(p, tol);
    const double lo = an.tau0;
    const double hi = 4.0 * an.tau0;
    const double freq = std::abs(an.phi - p.epsilon) + 2.0 * p.j_hop + 1.0;
    const auto n = static_cast<std::size_t>(std::max(200.0, std::ceil((hi - lo) * freq / 0.5)));
    TimeSeries s;
    s.label = Quantity::c_e_s;
    s.params = p;
    s.times = linear_grid(lo, hi, n);
    s.values.resize(n);
    parallel_for(n, [&](std::size_t i) { s.values[i] = integ(s.times[i]); });
    return exponential_fit(s, lo, hi);
}

int cmd_pole(const RunConfig& c) {
    GridSpec grid = c.delta_grid;
    if (grid.points == 0) grid.points = 39;
    const auto deltas = grid.values();
    Table table{{"delta", "tau0", "delta_phi", "tau0_fgr", "tau0_fit", "delta_phi_fit"}, {}};
    Meta meta = base_meta(c);
    for (double delta : deltas) {
        ModelParams p = c.params;
        p.delta = delta;
        const auto an = pole_analysis(p);
        const auto fit = fit_decay(p, an, c.tol);
        table.add({delta, an.tau0, an.delta_phi, an.tau0_fgr, fit.tau, fit.phi - delta});
        if (an.ill_conditioned) {
            meta.warnings.push_back("pole near a band edge at delta = " + format_number(delta) +
                                    "; single-pole decay is not a good description there");
        }
    }
    meta.settings = {{"delta_points", static_cast<double>(deltas.size())}};
    return emit(c, table, meta);
}

int cmd_verify(const RunConfig& c) {
    const FiniteChain chain = build(c.params, c.n_sites);
    GridSpec grid = c.t_grid;
    const auto ts = grid.values();
    TimeSeries s;
    s.label = Quantity::c_e;
    s.params = c.params;
    s.times = ts;
    s.values.resize(ts.size());
    if (c.params.lossy()) {
        const ExcitonPropagator prop(c.params, c.tol);
        parallel_for(ts.size(), [&](std::size_t i) { s.values[i] = prop(ts[i]); });
    } else {
        const ScatteringIntegrator integ(c.params, c.tol);
        const auto pair = bound_states(c.params);
        parallel_for(ts.size(), [&](std::size_t i) {
            const double t = ts[i];
            s.values[i] = integ(t) + pair.lower.weight() * std::exp(cplx{0.0, -pair.lower.omega * t}) +
                          pair.upper.weight() * std::exp(cplx{0.0, -pair.upper.omega * t});
        });
    }
    const Comparison cmp = compare(chain, s);

    Table table{{"t", "abs_c_e", "abs_c_e_oracle", "deviation", "beyond_boundary"}, {}};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double a = std::abs(s.values[i]);
        const double o = std::abs(exciton_amplitude(chain, ts[i]));
        table.add({ts[i], a, o, std::abs(a - o), ts[i] > chain.t_boundary ? 1.0 : 0.0});
    }

    Meta meta = base_meta(c);
    meta.tolerances.emplace_back("verification", c.verify_tol);
    meta.settings = {{"n_sites", static_cast<double>(c.n_sites)},
                     {"t_boundary", chain.t_boundary},
                     {"eigen_residual", chain.residual},
                     {"max_deviation", cmp.max_deviation},
                     {"max_deviation_all", cmp.max_deviation_all}};
    bool pass = cmp.max_deviation < c.verify_tol;
    if (cmp.beyond_boundary > 0) {
        meta.warnings.push_back(std::to_string(cmp.beyond_boundary) +
                                " time points beyond the boundary-reflection time are flagged "
                                "and excluded from the verdict");
    }
    if (c.field_time >= 0.0) {
        const long half = static_cast<long>(std::ceil(2.0 * c.params.j_hop * c.field_time)) + kConeMargin;
        const auto prof = field_profile(c.field_time, std::min(half, chain.center), c.params);
        const Comparison fc = compare_field(chain, prof);
        meta.settings.emplace_back("field_time", c.field_time);
        meta.settings.emplace_back("field_max_deviation", fc.max_deviation_all);
        if (fc.beyond_boundary > 0) {
            meta.warnings.push_back("field snapshot lies beyond the boundary-reflection time");
        } else {
            pass = pass && fc.max_deviation < c.verify_tol;
        }
    }
    emit(c, table, meta);
    std::cerr << "verify: N = " << c.n_sites << ", max |c_e| deviation " << format_number(cmp.max_deviation)
              << " (tolerance " << format_number(c.verify_tol) << ") " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kExitOk : kExitVerification;
}

int cmd_sweep(const RunConfig& c) {
    const std::vector<double> gs = c.g_list.empty() ? std::vector<double>{0.2, 0.5, 1.0, 2.0} : c.g_list;
    const std::size_t n = c.delta_list.size() * gs.size();
    std::vector<std::vector<double>> rows(n);
    parallel_for(n, [&](std::size_t i) {
        ModelParams p = c.params;
        p.delta = c.delta_list[i / gs.size()];
        p.g = gs[i % gs.size()];
        const auto co = coefficients(p);
        double tau0 = kNaN;
        double dphi = kNaN;
        if (in_band(p.delta, p) && p.gamma_c == 0.0) {
            const auto an = pole_analysis(p);
            tau0 = an.tau0;
            dphi = an.delta_phi;
        }
        rows[i] = {p.delta, p.g, co.bound.lower.omega, co.bound.upper.omega, co.p_lig,
                   co.p_emission, mean_emitted_energy(co, p), tau0, dphi};
    });
    Table table{{"delta", "g", "omega_minus", "omega_plus", "p_lig", "p_emission", "omega_ph", "tau0",
                 "delta_phi"},
                {}};
    for (auto& r : rows) table.add(std::move(r));
    Meta meta = base_meta(c);
    meta.settings = {{"rows", static_cast<double>(n)}};
    return emit(c, table, meta);
}

void add_grid(CLI::App* app, GridSpec& g, const std::string& name, bool with_log) {
    app->add_option("--" + name + "-min", g.min, "lower end of the " + name + " grid")
        ->capture_default_str();
    app->add_option("--" + name + "-max", g.max, "upper end of the " + name + " grid")
        ->capture_default_str();
    app->add_option("--" + name + "-points", g.points, "number of " + name + " samples")
        ->capture_default_str();
    if (with_log) app->add_flag("--log-" + name, g.log, "logarithmic spacing");
}

}  // namespace

int execute(const RunConfig& c) {
    validate(c.params);
    check_tolerance(c.tol, "quadrature tolerance");
    check_tolerance(c.verify_tol, "verification tolerance");
    const std::string& s = c.subcommand;
    if (s == "bound-energies") return cmd_bound_energies(c);
    if (s == "reflection") return cmd_reflection(c);
    if (s == "emission-spectrum") return cmd_emission_spectrum(c);
    if (s == "emission-prob") return cmd_emission_prob(c);
    if (s == "field") return cmd_field(c);
    if (s == "decay") return cmd_decay(c);
    if (s == "pole") return cmd_pole(c);
    if (s == "verify") return cmd_verify(c);
    if (s == "sweep") return cmd_sweep(c);
    throw ParameterError("unknown subcommand '" + s + "'");
}

int run(int argc, const char* const* argv) {
    RunConfig c;
    std::string format = "csv";
    CLI::App app{"Single-photon dynamics of an impurity coupled to a tight-binding cavity chain",
                 "wqed"};
    app.set_config("--config", "", "read options from a TOML/INI file (flags take precedence)");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--delta", c.params.delta, "exciton energy")->capture_default_str();
    app.add_option("--epsilon", c.params.epsilon, "cavity on-site energy")->capture_default_str();
    app.add_option("--J,--hopping", c.params.j_hop, "hopping J > 0")->capture_default_str();
    app.add_option("--g", c.params.g, "exciton-cavity coupling")->capture_default_str();
    app.add_option("--gamma-e", c.params.gamma_e, "exciton loss rate")->capture_default_str();
    app.add_option("--gamma-c", c.params.gamma_c, "cavity loss rate")->capture_default_str();
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("-o,--output", c.output, "output file (stdout if omitted)");
    app.add_option("--tol", c.tol, "quadrature tolerance")->capture_default_str();

    auto* bound = app.add_subcommand("bound-energies", "bound-state energies against g");
    add_grid(bound, c.g_grid, "g", true);

    auto* refl = app.add_subcommand("reflection", "reflection probability R_k (map with --delta-points)");
    refl->add_option("--k-points", c.k_grid.points, "interior momenta in (0, pi)")->capture_default_str();
    add_grid(refl, c.delta_grid, "delta", false);

    auto* spec = app.add_subcommand("emission-spectrum", "|c_k|^2 of the emitted photon");
    spec->add_option("--k-points", c.k_grid.points, "interior momenta in (0, pi)")->capture_default_str();
    spec->add_flag("--normalize", c.normalize, "divide by the maximum");

    auto* prob = app.add_subcommand("emission-prob", "emission probability against g");
    prob->add_option("--delta-list", c.delta_list, "exciton energies")->capture_default_str();
    add_grid(prob, c.g_grid, "g", true);

    auto* field = app.add_subcommand("field", "photon profile phi_x(t)");
    field->add_option("--t", c.t, "time")->capture_default_str();
    field->add_option("--L", c.half_width, "window half-width (default: causal cone plus margin)");

    auto* decay = app.add_subcommand("decay", "exciton survival probability time series");
    add_grid(decay, c.t_grid, "t", false);
    decay->add_flag("--log-time", c.t_grid.log, "logarithmic time grid");

    auto* pole = app.add_subcommand("pole", "single-pole lifetime and Lamb shift against delta");
    add_grid(pole, c.delta_grid, "delta", false);

    auto* verify = app.add_subcommand("verify", "compare c_e(t) with a finite-chain diagonalization");
    verify->add_option("--n", c.n_sites, "odd chain length")->capture_default_str();
    add_grid(verify, c.t_grid, "t", false);
    verify->add_option("--verify-tol", c.verify_tol, "pass threshold for |c_e| deviation")
        ->capture_default_str();
    verify->add_option("--field-t", c.field_time, "also compare |phi_x| at this time");

    auto* sweep = app.add_subcommand("sweep", "static observables over delta x g");
    sweep->add_option("--delta-list", c.delta_list, "exciton energies")->capture_default_str();
    sweep->add_option("--g-list", c.g_list, "couplings (default 0.2 0.5 1 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        if (app.get_subcommands().empty()) {
            std::cout << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        }
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_record("config", e.what());
        return kExitConfig;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    if (c.subcommand == "verify" && verify->count("--t-max") == 0) {
        c.t_grid.max = kBoundarySafety * static_cast<double>(c.n_sites) / (4.0 * c.params.j_hop);
    }

    try {
        c.format = parse_format(format);
        return execute(c);
    } catch (const ParameterError& e) {
        error_record("config", e.what());
        return kExitConfig;
    } catch (const DomainError& e) {
        error_record("config", e.what());
        return kExitConfig;
    } catch (const NumericalError& e) {
        error_record("numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        error_record("numerical", e.what());
        return kExitNumerical;
    }
}

}  // namespace wqed
