#include "fgig/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgig/combinatorics.hpp"
#include "fgig/distributions.hpp"
#include "fgig/errors.hpp"
#include "fgig/experiments.hpp"

namespace fgig::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Loads a flat key=value config file and splices its entries, as --key=value
// tokens, right after the subcommand so explicit flags can override them.
std::vector<std::string> expand_config(const std::vector<std::string>& raw) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string& a = raw[i];
        if (a == "--config") {
            if (i + 1 >= raw.size()) throw ConfigError("--config needs a file path");
            if (!path.empty()) throw ConfigError("--config given twice");
            path = raw[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            if (!path.empty()) throw ConfigError("--config given twice");
            path = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (path.empty()) return rest;
    if (rest.empty() || rest[0].empty() || rest[0][0] == '-')
        throw ConfigError("a subcommand must precede --config");

    std::ifstream in(path);
    if (!in) throw ConfigError("config file not readable: " + path);
    std::vector<std::string> injected;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        injected.push_back("--" + key + "=" + value);
    }

    std::vector<std::string> out;
    out.push_back(rest[0]);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

void validate_config(const RunConfig& cfg) {
    if (!std::isfinite(cfg.lambda)) throw ConfigError("lambda must be finite");
    if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha))
        throw ConfigError("alpha must be positive");
    if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta))
        throw ConfigError("beta must be positive");
    if (cfg.grid_points < 2 || cfg.grid_points > 100000)
        throw ConfigError("grid must lie in [2, 100000]");

    const std::string& e = cfg.experiment;
    const bool needs_lambda_gt1 =
        e == "convolve" || e == "regression" || e == "quadratic" || (e == "my" && !cfg.exploratory);
    if (needs_lambda_gt1 && !(cfg.lambda > 1.0))
        throw ConfigError(e + " requires lambda > 1" +
                          (e == "my" ? " (use --exploratory for 0 < lambda <= 1)" : ""));
    if (e == "my" && cfg.exploratory && !(cfg.lambda > 0.0 && cfg.lambda <= 1.0))
        throw ConfigError("exploratory my covers 0 < lambda <= 1");
    if (e == "regression" && (cfg.order < 1 || cfg.order > 8))
        throw ConfigError("regression order must lie in [1, 8]");
    if (e == "quadratic" && (cfg.order < 1 || cfg.order > 10))
        throw ConfigError("quadratic order must lie in [1, 10]");
    if ((e == "moments" || e == "cumulants") && (cfg.order < 1 || cfg.order > 12))
        throw ConfigError(e + " order must lie in [1, 12]");
    if (e == "my") {
        if (cfg.n < 8 || cfg.n > 4096) throw ConfigError("n must lie in [8, 4096]");
        if (cfg.reps < 1 || cfg.reps > 10000) throw ConfigError("reps must lie in [1, 10000]");
        if (!cfg.seed_set) throw ConfigError("my requires an explicit --seed");
    }
}

// ---------- artifact writers ----------

json report_to_json(const exp::ExperimentReport& rep) {
    json j;
    j["experiment"] = rep.experiment;
    json params = json::object();
    for (const auto& [k, v] : rep.params) params[k] = v;
    j["params"] = params;
    j["seed"] = rep.seed;
    j["exploratory"] = rep.exploratory;
    j["wall_ms"] = rep.wall_ms;
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(json{{"name", c.name},
                              {"value", c.value},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}});
    j["checks"] = checks;
    j["passed"] = rep.passed();
    return j;
}

void write_report(const fs::path& dir, const exp::ExperimentReport& rep) {
    write_text(dir / "report.json", report_to_json(rep).dump(2) + "\n");
    std::string csv = "check,value,tolerance,pass\n";
    for (const auto& c : rep.checks)
        csv += c.name + "," + fmt(c.value) + "," + fmt(c.tolerance) + "," +
               (c.pass ? "1" : "0") + "\n";
    write_text(dir / "residuals.csv", csv);
}

exp::CheckRow make_row(std::string name, double value, double tol) {
    return exp::CheckRow{std::move(name), value, tol, value < tol};
}

// Histogram with a closed-form density overlay; everything is formatted with
// fixed precision so identical inputs give identical bytes.
std::string hist_svg(const std::vector<double>& data,
                     const std::function<double(double)>& pdf, double support_a,
                     double support_b, const std::string& title) {
    const int W = 640, H = 400, L = 52, R = 16, T = 34, B = 38;
    const double plot_w = W - L - R, plot_h = H - T - B;
    auto num = [](double v) {
        char b[40];
        std::snprintf(b, sizeof b, "%.2f", v);
        return std::string(b);
    };
    auto lab = [](double v) {
        char b[40];
        std::snprintf(b, sizeof b, "%.3g", v);
        return std::string(b);
    };

    double lo = support_a, hi = support_b;
    if (!data.empty()) {
        lo = std::min(lo, data.front());
        hi = std::max(hi, data.back());
    }
    const double pad = 0.05 * (hi - lo > 0 ? hi - lo : 1.0);
    lo -= pad;
    hi += pad;

    const int bins = 48;
    const double bw = (hi - lo) / bins;
    std::vector<double> dens(bins, 0.0);
    for (double x : data) {
        int b = static_cast<int>((x - lo) / bw);
        b = std::clamp(b, 0, bins - 1);
        dens[static_cast<std::size_t>(b)] += 1.0;
    }
    if (!data.empty())
        for (double& d : dens) d /= static_cast<double>(data.size()) * bw;

    const int curve_pts = 256;
    std::vector<std::pair<double, double>> curve;
    double ymax = 0.0;
    for (double d : dens) ymax = std::max(ymax, d);
    for (int i = 0; i < curve_pts; ++i) {
        const double x = support_a + (support_b - support_a) * i / (curve_pts - 1.0);
        const double y = pdf(x);
        curve.emplace_back(x, y);
        ymax = std::max(ymax, y);
    }
    if (!(ymax > 0.0)) ymax = 1.0;
    ymax *= 1.08;

    auto sx = [&](double x) { return L + (x - lo) / (hi - lo) * plot_w; };
    auto sy = [&](double y) { return T + plot_h - std::min(y, ymax) / ymax * plot_h; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\">\n";
    s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(W / 2.0) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">" + title + "</text>\n";
    for (int b = 0; b < bins; ++b) {
        const double d = dens[static_cast<std::size_t>(b)];
        if (d <= 0.0) continue;
        const double x0 = sx(lo + b * bw), x1 = sx(lo + (b + 1) * bw);
        const double y0 = sy(d), y1 = sy(0.0);
        s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(x1 - x0) +
             "\" height=\"" + num(y1 - y0) + "\" fill=\"#9ecae1\"/>\n";
    }
    s += "<polyline fill=\"none\" stroke=\"#cb181d\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (i) s += " ";
        s += num(sx(curve[i].first)) + "," + num(sy(curve[i].second));
    }
    s += "\"/>\n";
    // axes
    s += "<line x1=\"" + num(double(L)) + "\" y1=\"" + num(T + plot_h) + "\" x2=\"" +
         num(L + plot_w) + "\" y2=\"" + num(T + plot_h) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(double(L)) + "\" y1=\"" + num(double(T)) + "\" x2=\"" +
         num(double(L)) + "\" y2=\"" + num(T + plot_h) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double x = lo + (hi - lo) * t / 5.0;
        s += "<line x1=\"" + num(sx(x)) + "\" y1=\"" + num(T + plot_h) + "\" x2=\"" + num(sx(x)) +
             "\" y2=\"" + num(T + plot_h + 4) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(T + plot_h + 18) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + lab(x) +
             "</text>\n";
    }
    for (int t = 0; t <= 4; ++t) {
        const double y = ymax * t / 4.0;
        s += "<line x1=\"" + num(L - 4.0) + "\" y1=\"" + num(sy(y)) + "\" x2=\"" +
             num(double(L)) + "\" y2=\"" + num(sy(y)) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(L - 8.0) + "\" y=\"" + num(sy(y) + 4) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + lab(y) +
             "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

// ---------- subcommand runners ----------

dist::FreeGigParams law_of(const RunConfig& cfg) {
    return dist::FreeGigParams{cfg.lambda, cfg.alpha, cfg.beta};
}

std::vector<std::pair<std::string, double>> law_params(const RunConfig& cfg) {
    return {{"lambda", cfg.lambda}, {"alpha", cfg.alpha}, {"beta", cfg.beta}};
}

exp::ExperimentReport run_support(const RunConfig& cfg, const fs::path& dir) {
    const auto p = law_of(cfg);
    const auto s = dist::solve_support(p);
    exp::ExperimentReport rep;
    rep.experiment = "support";
    rep.params = law_params(cfg);
    rep.checks.push_back(make_row("edge_residual_1", std::abs(s.residual1), 1e-10));
    rep.checks.push_back(make_row("edge_residual_2", std::abs(s.residual2), 1e-10));
    std::string csv = "quantity,value\n";
    csv += "a," + fmt(s.a) + "\n";
    csv += "b," + fmt(s.b) + "\n";
    csv += "residual1," + fmt(s.residual1) + "\n";
    csv += "residual2," + fmt(s.residual2) + "\n";
    write_text(dir / "support.csv", csv);
    return rep;
}

exp::ExperimentReport run_density(const RunConfig& cfg, const fs::path& dir) {
    const auto p = law_of(cfg);
    const auto s = dist::solve_support(p);
    exp::ExperimentReport rep;
    rep.experiment = "density";
    rep.params = law_params(cfg);
    std::string csv = "x,value\n";
    for (int i = 0; i < cfg.grid_points; ++i) {
        const double x = s.a + (s.b - s.a) * i / (cfg.grid_points - 1.0);
        csv += fmt(x) + "," + fmt(dist::fgig_density(p, s, x)) + "\n";
    }
    write_text(dir / "density.csv", csv);
    rep.checks.push_back(make_row("mass_residual", std::abs(dist::fgig_moment(p, 0) - 1.0), 1e-8));
    return rep;
}

exp::ExperimentReport run_moments(const RunConfig& cfg, const fs::path& dir) {
    const auto p = law_of(cfg);
    exp::ExperimentReport rep;
    rep.experiment = "moments";
    rep.params = law_params(cfg);
    rep.params.emplace_back("order", double(cfg.order));
    std::string csv = "k,value\n";
    double m1 = 0.0, m_neg1 = 0.0;
    for (int k = -2; k <= cfg.order; ++k) {
        const double v = dist::fgig_moment(p, k);
        if (k == 1) m1 = v;
        if (k == -1) m_neg1 = v;
        csv += std::to_string(k) + "," + fmt(v) + "\n";
    }
    write_text(dir / "moments.csv", csv);
    rep.checks.push_back(make_row("mean_closed_form", std::abs(m1 - dist::fgig_mean(p)), 1e-8));
    if (p.lambda > 1.0) {
        const auto s = dist::solve_support(p);
        rep.checks.push_back(make_row(
            "inverse_mean_closed_form",
            std::abs(m_neg1 + dist::gamma_const(p, s).value), 1e-8));
    }
    return rep;
}

exp::ExperimentReport run_cumulants(const RunConfig& cfg, const fs::path& dir) {
    const auto p = law_of(cfg);
    exp::ExperimentReport rep;
    rep.experiment = "cumulants";
    rep.params = law_params(cfg);
    rep.params.emplace_back("order", double(cfg.order));
    std::vector<double> m(static_cast<std::size_t>(cfg.order));
    for (int k = 1; k <= cfg.order; ++k)
        m[static_cast<std::size_t>(k - 1)] = dist::fgig_moment(p, k);
    const std::vector<double> r = nc::cumulants_from_moments(m, cfg.order);
    std::string csv = "n,value\n";
    for (int k = 1; k <= cfg.order; ++k)
        csv += std::to_string(k) + "," + fmt(r[static_cast<std::size_t>(k - 1)]) + "\n";
    write_text(dir / "cumulants.csv", csv);
    rep.checks.push_back(make_row("r1_equals_mean", std::abs(r[0] - dist::fgig_mean(p)), 1e-8));
    const std::vector<double> back = nc::moments_from_cumulants(r, cfg.order);
    double rt = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        rt = std::max(rt, std::abs(back[i] - m[i]) / std::max(1.0, std::abs(m[i])));
    rep.checks.push_back(make_row("round_trip", rt, 1e-10));
    return rep;
}

exp::ExperimentReport run_convolve(const RunConfig& cfg, const fs::path& dir) {
    const auto res =
        exp::run_convolution_check(law_of(cfg), exp::default_r_grid(), cfg.grid_points);
    std::string csv = "x,closed,route,abs_diff\n";
    for (std::size_t i = 0; i < res.grid_x.size(); ++i)
        csv += fmt(res.grid_x[i]) + "," + fmt(res.closed_density[i]) + "," +
               fmt(res.route_density[i]) + "," +
               fmt(std::abs(res.closed_density[i] - res.route_density[i])) + "\n";
    write_text(dir / "density_route.csv", csv);
    std::string rcsv = "re,im,resid\n";
    for (std::size_t i = 0; i < res.r_grid.size(); ++i)
        rcsv += fmt(res.r_grid[i].real()) + "," + fmt(res.r_grid[i].imag()) + "," +
                fmt(res.r_resid[i]) + "\n";
    write_text(dir / "r_grid.csv", rcsv);
    return res.report;
}

exp::ExperimentReport run_inverse(const RunConfig& cfg, const fs::path& dir) {
    const auto res = exp::run_inverse_check(law_of(cfg), cfg.grid_points);
    std::string csv = "y,transported,closed,abs_diff\n";
    for (std::size_t i = 0; i < res.grid_y.size(); ++i)
        csv += fmt(res.grid_y[i]) + "," + fmt(res.lhs[i]) + "," + fmt(res.rhs[i]) + "," +
               fmt(std::abs(res.lhs[i] - res.rhs[i])) + "\n";
    write_text(dir / "inverse.csv", csv);
    return res.report;
}

exp::ExperimentReport run_regression(const RunConfig& cfg, const fs::path& dir) {
    const auto res = exp::run_regression_check(law_of(cfg), cfg.order);
    std::string csv = "n,alpha_n,beta_n,delta_n\n";
    for (std::size_t n = 0; n < res.alpha_n.size(); ++n) {
        csv += std::to_string(n) + "," + fmt(res.alpha_n[n]) + ",";
        if (n < res.beta_n.size()) csv += fmt(res.beta_n[n]);
        csv += "," + fmt(res.delta_n[n]) + "\n";
    }
    write_text(dir / "series.csv", csv);
    return res.report;
}

exp::ExperimentReport run_quadratic(const RunConfig& cfg, const fs::path& dir) {
    const auto res = exp::run_quadratic_A_check(law_of(cfg), cfg.order);
    std::string csv = "n,series,quadrature,rel_resid\n";
    for (std::size_t n = 0; n < res.solver_coeffs.size(); ++n) {
        const double rel = std::abs(res.solver_coeffs[n] - res.moment_coeffs[n]) /
                           std::max(1.0, std::abs(res.moment_coeffs[n]));
        csv += std::to_string(n) + "," + fmt(res.solver_coeffs[n]) + "," +
               fmt(res.moment_coeffs[n]) + "," + fmt(rel) + "\n";
    }
    write_text(dir / "quadratic.csv", csv);
    return res.report;
}

exp::ExperimentReport run_my(const RunConfig& cfg, const fs::path& dir) {
    const auto p = law_of(cfg);
    const auto res = exp::run_matrix_my(p, cfg.n, cfg.reps, cfg.seed, cfg.exploratory);

    std::string ucsv = "eigenvalue\n";
    for (double v : res.esd_u_pooled) ucsv += fmt(v) + "\n";
    write_text(dir / "esd_u.csv", ucsv);
    std::string vcsv = "eigenvalue\n";
    for (double v : res.esd_v_pooled) vcsv += fmt(v) + "\n";
    write_text(dir / "esd_v.csv", vcsv);

    std::string rcsv = "index,excluded,ks_u,ks_v,kappa2,alt4,hua\n";
    for (const auto& r : res.replicates)
        rcsv += std::to_string(r.index) + "," + (r.excluded ? "1" : "0") + "," + fmt(r.ks_u) +
                "," + fmt(r.ks_v) + "," + fmt(r.kappa2) + "," + fmt(r.alt4) + "," + fmt(r.hua) +
                "\n";
    write_text(dir / "replicates.csv", rcsv);

    const dist::FreeGigParams pu{-p.lambda, p.beta, p.alpha};
    const auto su = dist::solve_support(pu);
    write_text(dir / "hist_u.svg",
               hist_svg(
                   res.esd_u_pooled,
                   [&](double x) { return dist::fgig_density(pu, su, x); }, su.a, su.b,
                   "spectrum of (X+Y)^-1 vs limit density"));
    const dist::MarchenkoPasturParams pv{p.lambda, 1.0 / p.beta};
    const auto vs = dist::mp_support(pv);
    write_text(dir / "hist_v.svg",
               hist_svg(
                   res.esd_v_pooled,
                   [&](double x) { return dist::mp_density(pv, x).continuous; }, vs.first,
                   vs.second, "spectrum of X^-1-(X+Y)^-1 vs limit density"));
    return res.report;
}

} // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    const std::vector<std::string> expanded = expand_config(args);

    RunConfig cfg;
    CLI::App app{"free GIG / Marchenko-Pastur verification experiments", "fgig"};
    app.require_subcommand(1);
    app.option_defaults()->take_last();

    const auto add_law = [&](CLI::App* s) {
        s->add_option("--lambda", cfg.lambda, "shape parameter");
        s->add_option("--alpha", cfg.alpha, "first scale parameter (> 0)");
        s->add_option("--beta", cfg.beta, "second scale parameter (> 0)");
        s->add_option("--out", cfg.out_dir, "output directory (created if missing)");
    };

    CLI::App* s_support = app.add_subcommand("support", "solve the support edge equations");
    add_law(s_support);
    CLI::App* s_density = app.add_subcommand("density", "tabulate the density and check its mass");
    add_law(s_density);
    s_density->add_option("--grid", cfg.grid_points, "number of grid points");
    CLI::App* s_moments = app.add_subcommand("moments", "quadrature moments x^k, k = -2..order");
    add_law(s_moments);
    s_moments->add_option("--order", cfg.order, "highest moment order");
    CLI::App* s_cumulants =
        app.add_subcommand("cumulants", "free cumulants from quadrature moments");
    add_law(s_cumulants);
    s_cumulants->add_option("--order", cfg.order, "highest cumulant order");
    CLI::App* s_convolve = app.add_subcommand(
        "convolve", "free-sum split of the law: R-transform identity and density route");
    add_law(s_convolve);
    s_convolve->add_option("--grid", cfg.grid_points, "density comparison grid points");
    CLI::App* s_inverse =
        app.add_subcommand("inverse", "closed form of the inverse law vs change of variables");
    add_law(s_inverse);
    s_inverse->add_option("--grid", cfg.grid_points, "comparison grid points");
    CLI::App* s_regression =
        app.add_subcommand("regression", "conditional-moment recursions and anchors");
    add_law(s_regression);
    s_regression->add_option("--order", cfg.order, "verify recursions up to this order (<= 8)");
    CLI::App* s_quadratic = app.add_subcommand(
        "quadratic", "moment series from the quadratic functional equation");
    add_law(s_quadratic);
    s_quadratic->add_option("--order", cfg.order, "series order (<= 10)");
    CLI::App* s_my =
        app.add_subcommand("my", "finite-N Monte Carlo of the matrix pair transform");
    add_law(s_my);
    s_my->add_option("--n", cfg.n, "matrix dimension");
    s_my->add_option("--reps", cfg.reps, "replicate count");
    s_my->add_option("--seed", cfg.seed, "master seed (required)");
    s_my->add_flag("--exploratory", cfg.exploratory,
                   "informational run for 0 < lambda <= 1 (no pass criteria)");

    try {
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    for (const CLI::App* s : app.get_subcommands()) cfg.experiment = s->get_name();
    cfg.seed_set = s_my->count("--seed") > 0;
    validate_config(cfg);
    return cfg;
}

int run(const RunConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "cannot create output directory " << dir << ": " << ec.message() << "\n";
        return 2;
    }
    try {
        exp::ExperimentReport rep;
        if (cfg.experiment == "support") rep = run_support(cfg, dir);
        else if (cfg.experiment == "density") rep = run_density(cfg, dir);
        else if (cfg.experiment == "moments") rep = run_moments(cfg, dir);
        else if (cfg.experiment == "cumulants") rep = run_cumulants(cfg, dir);
        else if (cfg.experiment == "convolve") rep = run_convolve(cfg, dir);
        else if (cfg.experiment == "inverse") rep = run_inverse(cfg, dir);
        else if (cfg.experiment == "regression") rep = run_regression(cfg, dir);
        else if (cfg.experiment == "quadratic") rep = run_quadratic(cfg, dir);
        else if (cfg.experiment == "my") rep = run_my(cfg, dir);
        else throw ConfigError("unknown experiment: " + cfg.experiment);
        write_report(dir, rep);
        if (!rep.passed()) {
            std::cerr << cfg.experiment << ": check failure, see "
                      << (dir / "residuals.csv") << "\n";
            return 1;
        }
        return 0;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        // Model-level failure: leave whatever was written plus a manifest.
        try {
            json m;
            m["experiment"] = cfg.experiment;
            m["error"] = std::string(e.what());
            write_text(dir / "error_manifest.json", m.dump(2) + "\n");
        } catch (...) {
            std::cerr << "error (manifest not writable): " << e.what() << "\n";
            return 2;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int main_entry(const std::vector<std::string>& args) {
    try {
        const RunConfig cfg = parse_config(args);
        return run(cfg);
    } catch (const HelpRequested& h) {
        std::cout << h.text;
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace fgig::cli
