#include "hadamard/runner.hpp"

#include "hadamard/analysis.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/parallel.hpp"
#include "hadamard/quadrature.hpp"
#include "hadamard/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace hadamard {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw config_error("cannot open output file " + path.string());
        out_ << header << "\n";
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << fmt17(values[i]);
        out_ << "\n";
    }
    void raw(const std::string& line) { out_ << line << "\n"; }

private:
    std::ofstream out_;
};

struct Numerics {
    double ode_tol = 1e-10;
    int radial_nodes = 257;
    int alpha_nodes = 64;
    int fmm_nr = 257;
    int fmm_nphi = 129;
    double probe_min = 0.5;
    double probe_max = 1000.0;
    double probe_factor = 2.0;
    bool error_companion = true;
};

Numerics read_numerics(const RunConfig& cfg, const CliOptions& opt) {
    Numerics n;
    n.ode_tol = cfg.get_number("numerics", "ode_tol", n.ode_tol);
    if (opt.tol > 0) n.ode_tol = opt.tol;
    n.radial_nodes = static_cast<int>(cfg.get_integer("numerics", "radial_nodes", n.radial_nodes));
    n.alpha_nodes = static_cast<int>(cfg.get_integer("numerics", "alpha_nodes", n.alpha_nodes));
    n.fmm_nr = static_cast<int>(cfg.get_integer("numerics", "fmm_nr", n.fmm_nr));
    n.fmm_nphi = static_cast<int>(cfg.get_integer("numerics", "fmm_nphi", n.fmm_nphi));
    n.probe_min = cfg.get_number("numerics", "probe_min", n.probe_min);
    n.probe_max = cfg.get_number("numerics", "probe_max", n.probe_max);
    n.probe_factor = cfg.get_number("numerics", "probe_factor", n.probe_factor);
    n.error_companion = cfg.get_flag("numerics", "error_companion", n.error_companion);
    if (!(n.ode_tol > 1e-14 && n.ode_tol < 1e-3))
        throw config_error("numerics.ode_tol must lie in (1e-14, 1e-3)");
    if (n.radial_nodes < 16 || n.radial_nodes > 100000)
        throw config_error("numerics.radial_nodes out of range [16, 100000]");
    if (n.alpha_nodes < 8 || n.alpha_nodes > 1024)
        throw config_error("numerics.alpha_nodes out of range [8, 1024]");
    if (n.fmm_nr < 16 || n.fmm_nphi < 16)
        throw config_error("numerics.fmm grid must be at least 16x16");
    return n;
}

CurvatureProfile parse_curvature(const RunConfig& cfg, const std::string& section) {
    const std::string kind = cfg.get_string(section, "kind");
    if (kind == "constant") return CurvatureProfile::constant(cfg.get_number(section, "c0"));
    if (kind == "power")
        return CurvatureProfile::power(cfg.get_number(section, "k"),
                                       cfg.get_number(section, "scale", 1.0));
    if (kind == "exponential")
        return CurvatureProfile::exponential(cfg.get_number(section, "beta"),
                                             cfg.get_number(section, "scale", 1.0));
    if (kind == "tabulated")
        return CurvatureProfile::tabulated(cfg.get_list(section, "nodes"),
                                           cfg.get_list(section, "values"));
    throw config_error("[" + section + "] kind must be constant|power|exponential|tabulated");
}

InteractionPotential parse_potential(const RunConfig& cfg, const std::string& section) {
    const std::string kind = cfg.get_string(section, "kind");
    InteractionPotential h = InteractionPotential::zero();
    if (kind == "zero") {
        // nothing else to read
    } else if (kind == "power") {
        h = InteractionPotential::power(cfg.get_number(section, "a", 1.0),
                                        cfg.get_number(section, "p"));
    } else if (kind == "exp_growth") {
        h = InteractionPotential::exp_growth(cfg.get_number(section, "a", 1.0),
                                             cfg.get_number(section, "b"));
    } else if (kind == "log_plus") {
        h = InteractionPotential::log_plus(cfg.get_number(section, "a", 1.0));
    } else if (kind == "tabulated") {
        h = InteractionPotential::tabulated(cfg.get_list(section, "nodes"),
                                            cfg.get_list(section, "values"));
    } else {
        throw config_error("[" + section +
                           "] kind must be zero|power|exp_growth|log_plus|tabulated");
    }
    if (cfg.has_section("phi") && section == "potential") {
        h.attach_minorant(parse_potential(cfg, "phi"));
    }
    return h;
}

std::vector<double> uniform_grid(double r_max, int nodes) {
    std::vector<double> g(nodes);
    for (int i = 0; i < nodes; ++i) g[i] = r_max * i / (nodes - 1);
    return g;
}

std::vector<double> schedule_radii(const RunConfig& cfg) {
    if (cfg.has("schedule", "radii")) return cfg.get_list("schedule", "radii");
    const double lo = cfg.get_number("schedule", "r_min", 1.0);
    const double hi = cfg.get_number("schedule", "r_max", 16.0);
    const long count = cfg.get_integer("schedule", "count", 16);
    if (!(hi > lo) || count < 2) throw config_error("[schedule] needs r_max > r_min, count >= 2");
    std::vector<double> out(count);
    for (long i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
    return out;
}

json verdict_json(const CriterionVerdict& v) {
    json j;
    j["condition"] = v.condition_id;
    j["verdict"] = to_string(v.verdict);
    j["trend"] = v.trend;
    j["note"] = v.note;
    return j;
}

struct Context {
    const RunConfig& cfg;
    const CliOptions& opt;
    Numerics num;
    fs::path out_dir;
    json report;
    std::vector<std::string> output_files;

    fs::path file(const std::string& name) {
        output_files.push_back(name);
        return out_dir / name;
    }
};

int read_dimension(const RunConfig& cfg) {
    const long n = cfg.get_integer("manifold", "n", 2);
    if (n < 2 || n > 16) throw config_error("manifold.n must lie in [2, 16]");
    return static_cast<int>(n);
}

void write_density_csv(Context& ctx, const std::string& name, const RadialDensity& rho) {
    CsvWriter csv(ctx.file(name), "r,rho,cumulative_mass");
    const auto cum = rho.cumulative_mass();
    const double scale = rho.log_scale();
    for (std::size_t i = 0; i < rho.grid().size(); ++i) {
        const double v = rho.values()[i];
        const double phys = v > 0 ? std::exp(std::max(std::log(v) + scale, -745.0)) : 0.0;
        csv.row({rho.grid()[i], phys, cum[i]});
    }
}

// --- command handlers ---

void cmd_solve_warp(Context& ctx) {
    const auto profile = parse_curvature(ctx.cfg, "curvature");
    const double theta_max = ctx.cfg.get_number("manifold", "theta_max", 10.0);
    WarpOptions wopt;
    wopt.tol = ctx.num.ode_tol;
    const auto w = solve_warp(profile, theta_max, wopt);

    CsvWriter csv(ctx.file("warp.csv"), "theta,log_psi,phi,H");
    for (std::size_t i = 0; i < w.grid().size(); ++i) {
        const double t = w.grid()[i];
        csv.row({t, w.grid_log_psi()[i], w.grid_phi()[i], w.log_stretch(t)});
    }
    ctx.report["warp"] = {{"curvature", profile.describe()},
                          {"theta_init", w.theta_init()},
                          {"theta_max", w.theta_max()},
                          {"nodes", w.grid().size()}};
}

void cmd_ball_volume(Context& ctx) {
    const auto profile = parse_curvature(ctx.cfg, "curvature");
    const int n = read_dimension(ctx.cfg);
    auto radii = ctx.cfg.has("schedule", "radii") ? ctx.cfg.get_list("schedule", "radii")
                                                  : schedule_radii(ctx.cfg);
    const double top = *std::max_element(radii.begin(), radii.end());
    const double theta_max = ctx.cfg.get_number("manifold", "theta_max", top);
    if (theta_max < top) throw config_error("manifold.theta_max smaller than the largest radius");
    WarpOptions wopt;
    wopt.tol = ctx.num.ode_tol;
    ModelManifold m(n, solve_warp(profile, theta_max, wopt));

    CsvWriter csv(ctx.file("ball_volume.csv"), "R,volume,log_volume,overflowed");
    json rows = json::array();
    for (double R : radii) {
        const auto v = m.ball_volume(R);
        csv.row({R, v.value, v.log_value, v.overflowed ? 1.0 : 0.0});
        rows.push_back({{"R", R}, {"log_volume", v.log_value}, {"overflowed", v.overflowed}});
    }
    ctx.report["ball_volumes"] = rows;
}

void cmd_distance(Context& ctx) {
    const auto profile = parse_curvature(ctx.cfg, "curvature");
    const int n = read_dimension(ctx.cfg);
    const auto r1s = ctx.cfg.get_list("points", "r1");
    const auto r2s = ctx.cfg.get_list("points", "r2");
    const auto alphas = ctx.cfg.get_list("points", "alpha");
    if (r1s.size() != r2s.size() || r1s.size() != alphas.size())
        throw config_error("[points] r1, r2, alpha lists must have equal length");
    const std::string method_name = ctx.cfg.get_string("points", "method", "bvp");
    const DistanceMethod method = method_name == "fastmarch" ? DistanceMethod::FastMarch
                                                             : DistanceMethod::BVPRefined;
    if (method_name != "fastmarch" && method_name != "bvp")
        throw config_error("points.method must be bvp|fastmarch");

    double top = 0;
    for (std::size_t i = 0; i < r1s.size(); ++i) top = std::max({top, r1s[i], r2s[i]});
    const double theta_max = ctx.cfg.get_number("manifold", "theta_max", top * 1.05 + 0.1);
    WarpOptions wopt;
    wopt.tol = ctx.num.ode_tol;
    ModelManifold m(n, solve_warp(profile, theta_max, wopt));

    DistanceOptions dopt;
    dopt.fmm_nr = ctx.num.fmm_nr;
    dopt.fmm_nphi = ctx.num.fmm_nphi;

    CsvWriter csv(ctx.file("distance.csv"), "r1,r2,alpha,distance,chord_lower,through_pole_upper");
    for (std::size_t i = 0; i < r1s.size(); ++i) {
        const double d = distance(m, r1s[i], r2s[i], alphas[i], method, dopt);
        csv.row({r1s[i], r2s[i], alphas[i], d, chord_lower_bound(r1s[i], r2s[i], alphas[i]),
                 r1s[i] + r2s[i]});
    }
    ctx.report["distance"] = {{"method", method_name}, {"pairs", r1s.size()}};

    if (ctx.cfg.get_flag("points", "write_field", false)) {
        const auto field = distance_field(m, r1s[0], ctx.num.fmm_nr, ctx.num.fmm_nphi,
                                          std::min(m.r_max(), theta_max));
        CsvWriter fcsv(ctx.file("field.csv"), "r,phi,distance");
        char meta[160];
        std::snprintf(meta, sizeof meta, "# source_r=%.17g nr=%d nphi=%d dr=%.17g dphi=%.17g",
                      field.source_radius, field.nr, field.nphi, field.spacing_r(),
                      field.spacing_phi());
        fcsv.raw(meta);
        for (int i = 0; i < field.nr; ++i)
            for (int j = 0; j < field.nphi; ++j)
                fcsv.row({i * field.spacing_r(), j * field.spacing_phi(), field.at(i, j)});
        ctx.report["distance"]["field_error_estimate"] = field.error_estimate;
    }
}

RadialDensity parse_density(Context& ctx, std::shared_ptr<const ModelManifold> m,
                            const std::vector<double>& grid) {
    const std::string kind = ctx.cfg.get_string("density", "kind");
    if (kind == "uniform_ball")
        return make_uniform_ball(std::move(m), ctx.cfg.get_number("density", "R"), grid.back(),
                                 static_cast<int>(grid.size()));
    if (kind == "gaussian")
        return make_radial_gaussian(std::move(m), ctx.cfg.get_number("density", "s"), grid.back(),
                                    static_cast<int>(grid.size()));
    throw config_error("density.kind must be uniform_ball|gaussian");
}

void cmd_energy(Context& ctx) {
    const auto profile = parse_curvature(ctx.cfg, "curvature");
    const int n = read_dimension(ctx.cfg);
    const auto h = parse_potential(ctx.cfg, "potential");
    const double grid_r_max = ctx.cfg.get_number("density", "grid_r_max", 8.0);
    const double theta_max = ctx.cfg.get_number("manifold", "theta_max", grid_r_max * 1.02 + 0.1);
    WarpOptions wopt;
    wopt.tol = ctx.num.ode_tol;
    auto m = std::make_shared<const ModelManifold>(n, solve_warp(profile, theta_max, wopt));
    const auto grid = uniform_grid(grid_r_max, ctx.num.radial_nodes);

    EnergyEvaluator::Config ecfg;
    ecfg.pairwise.alpha_nodes = ctx.num.alpha_nodes;
    ecfg.pairwise.fmm_nr = ctx.num.fmm_nr;
    ecfg.pairwise.fmm_nphi = ctx.num.fmm_nphi;
    ecfg.error_companion = ctx.num.error_companion;
    EnergyEvaluator ev(m, grid, h, ecfg);

    const auto rho = parse_density(ctx, m, grid);
    const auto e = ev.free_energy(rho);

    json ej = {{"entropy", e.entropy},
               {"interaction", e.interaction},
               {"total", e.total},
               {"quad_error", e.quadrature_error}};
    std::ofstream out(ctx.file("energy.json"));
    out << ej.dump(2) << "\n";
    ctx.report["energy"] = ej;
    write_density_csv(ctx, "density.csv", rho);
}

void cmd_check(Context& ctx) {
    const int n = read_dimension(ctx.cfg);
    const auto h = parse_potential(ctx.cfg, "potential");
    const auto probes =
        geometric_probes(ctx.num.probe_min, ctx.num.probe_max, ctx.num.probe_factor);
    json verdicts = json::array();

    if (ctx.cfg.has_section("curvature_M")) {
        const auto cM = parse_curvature(ctx.cfg, "curvature_M");
        const double A = ctx.cfg.get_number("check", "A", 0.5 * (n - 1));
        const double delta = ctx.cfg.get_number("check", "delta", 1.0);
        verdicts.push_back(verdict_json(check_c32(cM, probes)));
        verdicts.back()["condition"] = "c32(c_M)";
        verdicts.push_back(verdict_json(check_nonexistence(h, cM, n, A, delta, probes)));
    }
    if (ctx.cfg.has_section("curvature_m")) {
        const auto cm = parse_curvature(ctx.cfg, "curvature_m");
        verdicts.push_back(verdict_json(check_c32(cm, probes)));
        verdicts.back()["condition"] = "c32(c_m)";
        verdicts.push_back(verdict_json(check_existence(h, cm, n, probes)));
        if (ctx.cfg.get_flag("check", "relaxed", true)) {
            WarpOptions wopt;
            wopt.tol = ctx.num.ode_tol;
            const auto wm = solve_warp(cm, probes.back() * 1.001, wopt);
            verdicts.push_back(verdict_json(check_relaxed_existence(h, wm, probes)));
        }
    }
    if (verdicts.empty())
        throw config_error("check: provide [curvature_M] and/or [curvature_m]");
    ctx.report["verdicts"] = verdicts;
}

void cmd_spread(Context& ctx) {
    const auto profile = parse_curvature(ctx.cfg, "curvature");
    const int n = read_dimension(ctx.cfg);
    const auto h = parse_potential(ctx.cfg, "potential");
    const auto radii = schedule_radii(ctx.cfg);
    const double top = *std::max_element(radii.begin(), radii.end());
    WarpOptions wopt;
    wopt.tol = ctx.num.ode_tol;
    auto m = std::make_shared<const ModelManifold>(
        n, solve_warp(profile, top * (1.0 + 3.0 / ctx.num.fmm_nr) + 1e-6, wopt));
    const auto grid = uniform_grid(top, ctx.num.radial_nodes);
    for (double R : radii) {
        const double spacing = top / (ctx.num.radial_nodes - 1);
        const double ratio = R / spacing;
        if (std::abs(ratio - std::round(ratio)) > 1e-9)
            throw config_error("spread: schedule radius " + std::to_string(R) +
                               " is not a radial grid node; adjust radial_nodes");
    }

    EnergyEvaluator::Config ecfg;
    ecfg.pairwise.alpha_nodes = ctx.num.alpha_nodes;
    ecfg.pairwise.fmm_nr = ctx.num.fmm_nr;
    ecfg.pairwise.fmm_nphi = ctx.num.fmm_nphi;
    ecfg.error_companion = ctx.num.error_companion;
    EnergyEvaluator ev(m, grid, h, ecfg);

    const auto result = spreading_experiment(ev, radii);
    CsvWriter csv(ctx.file("spread.csv"), "R,entropy,interaction,total,analytic_bound");
    for (const auto& row : result.rows)
        csv.row({row.R, row.energy.entropy, row.energy.interaction, row.energy.total,
                 row.analytic_bound});
    ctx.report["verdicts"] = json::array({verdict_json(result.verdict)});
}

void cmd_minimize(Context& ctx) {
    const auto profile = parse_curvature(ctx.cfg, "curvature");
    const int n = read_dimension(ctx.cfg);
    const auto h = parse_potential(ctx.cfg, "potential");
    const double grid_r_max = ctx.cfg.get_number("minimize", "grid_r_max", 8.0);
    WarpOptions wopt;
    wopt.tol = ctx.num.ode_tol;
    auto m = std::make_shared<const ModelManifold>(
        n, solve_warp(profile, grid_r_max * (1.0 + 3.0 / ctx.num.fmm_nr) + 1e-6, wopt));
    const auto grid = uniform_grid(grid_r_max, ctx.num.radial_nodes);

    EnergyEvaluator::Config ecfg;
    ecfg.pairwise.alpha_nodes = ctx.num.alpha_nodes;
    ecfg.pairwise.fmm_nr = ctx.num.fmm_nr;
    ecfg.pairwise.fmm_nphi = ctx.num.fmm_nphi;
    ecfg.error_companion = ctx.num.error_companion;
    EnergyEvaluator ev(m, grid, h, ecfg);

    GroundStateOptions gopt;
    gopt.damping = ctx.cfg.get_number("minimize", "eta", gopt.damping);
    gopt.max_iter = static_cast<int>(ctx.cfg.get_integer("minimize", "max_iter", gopt.max_iter));
    gopt.tol = ctx.cfg.get_number("minimize", "tol", gopt.tol);
    const auto rep = find_ground_state(ev, gopt);

    ctx.report["ground_state"] = {{"converged", rep.converged},
                                  {"iterations", rep.iterations},
                                  {"residual", rep.residual},
                                  {"support_radius", rep.support_radius},
                                  {"boundary_mass", rep.boundary_mass},
                                  {"energy",
                                   {{"entropy", rep.energy.entropy},
                                    {"interaction", rep.energy.interaction},
                                    {"total", rep.energy.total},
                                    {"quad_error", rep.energy.quadrature_error}}}};
    write_density_csv(ctx, "ground_state.csv", rep.density);
}

void cmd_verify_inequalities(Context& ctx) {
    const auto profile = parse_curvature(ctx.cfg, "curvature");
    const int n = read_dimension(ctx.cfg);
    const auto h = ctx.cfg.has_section("potential") ? parse_potential(ctx.cfg, "potential")
                                                    : InteractionPotential::power(1.0, 2.0);
    const double grid_r_max = ctx.cfg.get_number("verify", "grid_r_max", 6.0);
    WarpOptions wopt;
    wopt.tol = ctx.num.ode_tol;
    auto m = std::make_shared<const ModelManifold>(
        n, solve_warp(profile, 2.0 * grid_r_max + 0.5, wopt));
    const auto grid = uniform_grid(grid_r_max, ctx.num.radial_nodes);

    EnergyEvaluator::Config ecfg;
    ecfg.pairwise.alpha_nodes = ctx.num.alpha_nodes;
    ecfg.pairwise.fmm_nr = ctx.num.fmm_nr;
    ecfg.pairwise.fmm_nphi = ctx.num.fmm_nphi;
    ecfg.inequality_kernels = true;
    ecfg.error_companion = false;
    EnergyEvaluator ev(m, grid, h, ecfg);

    json verdicts = json::array();
    CsvWriter csv(ctx.file("verify.csv"), "check,label,lhs,rhs,margin,pass");

    // warp-level checks
    const auto& w = m->warp();
    const auto env = check_exp_envelopes(w, 0.2, std::max(0.5, grid_r_max / 4));
    verdicts.push_back(verdict_json(env));
    const auto gl = check_growth_length_limit(w);
    verdicts.push_back(verdict_json(gl));

    // sandwich when explicit bounds are configured
    if (ctx.cfg.has_section("curvature_M") && ctx.cfg.has_section("curvature_m")) {
        const auto cM = parse_curvature(ctx.cfg, "curvature_M");
        const auto cm = parse_curvature(ctx.cfg, "curvature_m");
        verdicts.push_back(verdict_json(check_detA_sandwich(cM, profile, cm, n, grid_r_max)));
    }

    // density family: balls + gaussians
    std::vector<RadialDensity> family;
    std::vector<std::string> labels;
    const auto ball_radii = ctx.cfg.has("verify", "ball_radii")
                                ? ctx.cfg.get_list("verify", "ball_radii")
                                : std::vector<double>{grid_r_max / 8, grid_r_max / 4,
                                                      grid_r_max / 2};
    const auto gauss_s = ctx.cfg.has("verify", "gaussian_s")
                             ? ctx.cfg.get_list("verify", "gaussian_s")
                             : std::vector<double>{0.5, 1.0, 2.0};
    for (double R : ball_radii) {
        family.push_back(make_uniform_ball(m, R, grid_r_max, static_cast<int>(grid.size())));
        labels.push_back("ball_R=" + std::to_string(R));
    }
    for (double s : gauss_s) {
        family.push_back(make_radial_gaussian(m, s, grid_r_max, static_cast<int>(grid.size())));
        labels.push_back("gauss_s=" + std::to_string(s));
    }

    bool all_pass = true;
    const double lo_c = 2.0 - std::sqrt(2.0);
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& rho = family[i];
        const double w1 = rho.w1_to_pole();
        const double pd = ev.mean_pairwise_distance(rho);
        const bool sandwich_ok = pd >= lo_c * w1 - 1e-9 && pd <= 2 * w1 + 1e-9;
        csv.raw("w1_sandwich," + labels[i] + "," + fmt17(pd) + "," + fmt17(w1) + "," +
                fmt17(std::min(pd - lo_c * w1, 2 * w1 - pd)) + "," + (sandwich_ok ? "1" : "0"));
        all_pass = all_pass && sandwich_ok;

        const auto jv = ev.check_jensen(rho);
        csv.raw("jensen," + labels[i] + "," + fmt17(jv.probes[0].second) + "," +
                fmt17(jv.probes[1].second) + "," + fmt17(jv.trend) + "," +
                (jv.satisfied() ? "1" : "0"));
        all_pass = all_pass && jv.satisfied();

        const auto gap = ev.hls_gap(rho);
        min_gap = std::min(min_gap, gap.gap);
        csv.raw("hls_distance_term," + labels[i] + "," + fmt17(gap.log_pair_term) + "," +
                fmt17(gap.log_pair_term - gap.distance_term) + "," + fmt17(gap.distance_term) +
                "," + (gap.distance_term >= -1e-6 ? "1" : "0"));
        all_pass = all_pass && gap.distance_term >= -1e-6;
    }

    // uniform-ball bound rows
    for (double R : ball_radii) {
        const auto ball = make_uniform_ball(m, R, grid_r_max, static_cast<int>(grid.size()));
        const double exact = ev.free_energy(ball).total;
        const double bound = -m->log_ball_volume(R) + 0.5 * h(2 * R);
        csv.raw("ball_energy_bound,R=" + std::to_string(R) + "," + fmt17(exact) + "," +
                fmt17(bound) + "," + fmt17(bound - exact) + "," +
                (exact <= bound + 1e-6 ? "1" : "0"));
        all_pass = all_pass && exact <= bound + 1e-6;
    }

    // Monte Carlo validation of the angular kernel (KS distance)
    {
        std::mt19937_64 rng(ctx.opt.seed);
        std::normal_distribution<double> gauss;
        const int kPairs = 200000;
        std::vector<double> angles(kPairs);
        for (int k = 0; k < kPairs; ++k) {
            double u[16], v[16], nu = 0, nv = 0, dot = 0;
            for (int i = 0; i < n; ++i) {
                u[i] = gauss(rng);
                v[i] = gauss(rng);
                nu += u[i] * u[i];
                nv += v[i] * v[i];
                dot += u[i] * v[i];
            }
            angles[k] = std::acos(std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0));
        }
        std::sort(angles.begin(), angles.end());
        const double Z = std::sqrt(M_PI) * std::tgamma(0.5 * (n - 1)) / std::tgamma(0.5 * n);
        double ks = 0;
        for (int q = 1; q < 40; ++q) {
            const double a = M_PI * q / 40;
            const double cdf =
                integrate([n](double t) { return std::pow(std::sin(t), n - 2); }, 0.0, a, 1e-10) /
                Z;
            const auto lo = std::lower_bound(angles.begin(), angles.end(), a);
            const double emp = static_cast<double>(lo - angles.begin()) / kPairs;
            ks = std::max(ks, std::abs(emp - cdf));
        }
        csv.raw("angular_kernel_ks,seed=" + std::to_string(ctx.opt.seed) + "," + fmt17(ks) +
                ",0.005,0," + (ks < 0.005 ? "1" : "0"));
        all_pass = all_pass && ks < 0.005;
    }

    CriterionVerdict summary;
    summary.condition_id = "inequality_battery";
    summary.trend = min_gap;
    summary.verdict = all_pass ? Verdict::Satisfied : Verdict::Violated;
    summary.note = "min HLS gap " + fmt17(min_gap);
    verdicts.push_back(verdict_json(summary));
    ctx.report["verdicts"] = verdicts;
}

} // namespace

const char* output_schema_help() {
    return
        "Output files (all CSV comma-separated with a header row, numbers %.17g):\n"
        "  report.json       always: command, library_version, inputs echo, verdicts,\n"
        "                    per-command results; stable key order, no timestamps.\n"
        "  warp.csv          solve-warp: theta,log_psi,phi,H (H = log(psi/theta)).\n"
        "  ball_volume.csv   ball-volume: R,volume,log_volume,overflowed.\n"
        "  distance.csv      distance: r1,r2,alpha,distance,chord_lower,through_pole_upper.\n"
        "  field.csv         distance (write_field=true): r,phi,distance rows after a\n"
        "                    '# source_r=.. nr=.. nphi=.. dr=.. dphi=..' metadata line.\n"
        "  energy.json       energy: {entropy, interaction, total, quad_error}.\n"
        "  density.csv       energy: r,rho,cumulative_mass.\n"
        "  spread.csv        spread: R,entropy,interaction,total,analytic_bound.\n"
        "  ground_state.csv  minimize: r,rho,cumulative_mass of the final iterate.\n"
        "  verify.csv        verify-inequalities: check,label,lhs,rhs,margin,pass.\n";
}

int run_config(const RunConfig& cfg, const CliOptions& opt) {
    try {
        set_max_threads(opt.threads);
        Context ctx{cfg, opt, read_numerics(cfg, opt), fs::path(), json(), {}};
        const std::string out_name = opt.out_dir.empty()
                                         ? cfg.get_string("output", "dir", "out")
                                         : opt.out_dir;
        ctx.out_dir = out_name;
        fs::create_directories(ctx.out_dir);

        const std::string command = cfg.get_string("", "command");
        ctx.report["command"] = command;
        ctx.report["library_version"] = kVersion;
        ctx.report["config"] = cfg.origin();
        ctx.report["seed"] = opt.seed;
        json inputs;
        for (const auto& [section, entries] : cfg.snapshot()) {
            json sec;
            for (const auto& [key, value] : entries) sec[key] = value;
            inputs[section.empty() ? "(top)" : section] = sec;
        }
        ctx.report["inputs"] = inputs;

        if (command == "solve-warp") cmd_solve_warp(ctx);
        else if (command == "ball-volume") cmd_ball_volume(ctx);
        else if (command == "distance") cmd_distance(ctx);
        else if (command == "energy") cmd_energy(ctx);
        else if (command == "check") cmd_check(ctx);
        else if (command == "spread") cmd_spread(ctx);
        else if (command == "minimize") cmd_minimize(ctx);
        else if (command == "verify-inequalities") cmd_verify_inequalities(ctx);
        else
            throw config_error("unknown command '" + command +
                               "' (expected solve-warp|ball-volume|distance|energy|check|"
                               "spread|minimize|verify-inequalities)");

        const auto stray = cfg.unconsumed();
        if (!stray.empty()) {
            std::string msg = "unknown config keys:";
            for (const auto& s : stray) msg += "\n  " + s;
            throw config_error(msg);
        }

        ctx.report["outputs"] = ctx.output_files;
        std::ofstream rep(ctx.out_dir / "report.json");
        rep << ctx.report.dump(2) << "\n";
        return 0;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

int run(const CliOptions& opt) {
    try {
        const RunConfig cfg = RunConfig::parse_file(opt.config_path);
        return run_config(cfg, opt);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace hadamard
