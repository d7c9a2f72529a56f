#include <doctest.h>

#include "hadamard/analysis.hpp"
#include "hadamard/quadrature.hpp"

#include <cmath>

using namespace hadamard;

namespace {

std::shared_ptr<const ModelManifold> make_manifold(int n, CurvatureProfile c, double theta_max) {
    return std::make_shared<const ModelManifold>(n, solve_warp(std::move(c), theta_max));
}

std::vector<double> uniform_grid(double r_max, int nodes) {
    std::vector<double> g(nodes);
    for (int i = 0; i < nodes; ++i) g[i] = r_max * i / (nodes - 1);
    return g;
}

EnergyEvaluator::Config light_config() {
    EnergyEvaluator::Config cfg;
    cfg.error_companion = false;
    cfg.pairwise.alpha_nodes = 48;
    cfg.pairwise.fmm_nr = 161;
    cfg.pairwise.fmm_nphi = 81;
    return cfg;
}

} // namespace

TEST_CASE("nonexistence criterion on the example table") {
    auto probes = geometric_probes(0.5, 2000.0);

    // power curvature theta^k vs potential theta^p: threshold p = k/2 + 1
    auto slow = InteractionPotential::power(1.0, 1.5);
    auto fast = InteractionPotential::power(1.0, 3.0);
    auto cM = CurvatureProfile::power(2.0);
    CHECK(check_nonexistence(slow, cM, 2, 0.5, 1.0, probes).satisfied());
    CHECK(check_nonexistence(fast, cM, 2, 0.5, 1.0, probes).violated());

    // exponential curvature e^{beta theta}: threshold e^{beta theta / 4}
    auto cE = CurvatureProfile::exponential(1.0);
    auto weak_exp = InteractionPotential::exp_growth(1.0, 0.1);
    CHECK(check_nonexistence(weak_exp, cE, 2, 0.5, 1.0, geometric_probes(0.5, 400.0)).satisfied());

    CHECK_THROWS_AS(check_nonexistence(slow, cM, 2, 1.5, 1.0, probes), std::invalid_argument);
    CHECK_THROWS_AS(check_nonexistence(slow, cM, 2, 0.5, -1.0, probes), std::invalid_argument);
}

TEST_CASE("existence criterion on the example table") {
    auto probes = geometric_probes(0.5, 2000.0);

    // c = theta^2, phi = theta^3: ratio ~ theta -> satisfied
    CHECK(check_existence(InteractionPotential::power(1.0, 3.0), CurvatureProfile::power(2.0), 2,
                          probes).satisfied());
    // constant curvature, linear phi: ratio constant -> violated
    CHECK(check_existence(InteractionPotential::power(1.0, 1.0), CurvatureProfile::constant(1.0),
                          2, probes).violated());
    // exponential curvature beta = 1, phi = exp growth b = 0.6 > beta/2
    CHECK(check_existence(InteractionPotential::exp_growth(1.0, 0.6),
                          CurvatureProfile::exponential(1.0), 2,
                          geometric_probes(0.5, 200.0)).satisfied());
    // b = 0.4 < beta/2: too slow
    CHECK(!check_existence(InteractionPotential::exp_growth(1.0, 0.4),
                           CurvatureProfile::exponential(1.0), 2,
                           geometric_probes(0.5, 200.0)).satisfied());

    // non-monotone curvature: running max is applied (note says so)
    auto wiggly = CurvatureProfile::tabulate(
        [](double t) { return 2.0 + std::sin(t); }, 2500.0, 4097);
    auto v = check_existence(InteractionPotential::power(1.0, 2.0), wiggly, 2, probes);
    CHECK(v.satisfied());
    CHECK(v.note.find("running max") != std::string::npos);
}

TEST_CASE("relaxed existence criterion and the implication property") {
    // H ~ sqrt(c) theta for constants: phi = theta^2 -> ratio ~ theta
    auto w = solve_warp(CurvatureProfile::constant(1.0), 1200.0);
    auto probes = geometric_probes(1.0, 1000.0);
    CHECK(check_relaxed_existence(InteractionPotential::power(1.0, 2.0), w, probes).satisfied());
    CHECK(check_relaxed_existence(InteractionPotential::power(1.0, 1.0), w, probes).violated());

    // implication: (phi, c_m) passing check_existence also passes the
    // relaxed form, on a (k, p) grid
    for (double k : {1.0, 2.0}) {
        auto c = CurvatureProfile::power(k);
        auto wm = solve_warp(c, 1200.0);
        for (double p : {k / 2 + 2.0, 2.0 * (k / 2 + 1)}) {
            auto h = InteractionPotential::power(1.0, p);
            if (check_existence(h, c, 2, probes).satisfied()) {
                CHECK(check_relaxed_existence(h, wm, probes).satisfied());
            }
        }
    }
}

TEST_CASE("spreading experiment: weak potential spreads, strong does not") {
    auto m = make_manifold(2, CurvatureProfile::power(2.0), 13.0);
    auto grid = uniform_grid(12.0, 193);
    std::vector<double> schedule;
    for (double R = 1.0; R <= 12.0; R += 1.0) schedule.push_back(R);

    EnergyEvaluator weak(m, grid, InteractionPotential::power(1.0, 1.5), light_config());
    auto spread = spreading_experiment(weak, schedule);
    CHECK(spread.verdict.satisfied());
    for (const auto& row : spread.rows)
        CHECK(row.energy.total <= row.analytic_bound + 1e-6);

    EnergyEvaluator strong(m, grid, InteractionPotential::power(1.0, 4.0), light_config());
    auto stay = spreading_experiment(strong, schedule);
    CHECK(stay.verdict.violated());
    for (const auto& row : stay.rows)
        CHECK(row.energy.total <= row.analytic_bound + 1e-6);

    // off-grid radius is rejected
    CHECK_THROWS_AS(spreading_experiment(weak, {1.0, 14.0}), std::out_of_range);
}

TEST_CASE("ground state: strong attraction converges below the ball family") {
    auto m = make_manifold(2, CurvatureProfile::power(2.0), 13.0);
    auto grid = uniform_grid(6.0, 193);
    EnergyEvaluator ev(m, grid, InteractionPotential::power(1.0, 4.0), light_config());

    GroundStateOptions opt;
    opt.damping = 0.5;
    opt.max_iter = 3000;
    opt.tol = 1e-7;
    auto rep = find_ground_state(ev, opt);
    CHECK(rep.converged);
    CHECK(rep.boundary_mass <= 1e-4);
    CHECK(rep.residual <= opt.tol);
    CHECK(rep.density.mass() == doctest::Approx(1.0).epsilon(1e-9));

    // energy below every uniform ball on the same grid
    for (double R : {0.5, 1.0, 2.0, 4.0}) {
        auto ball = make_uniform_ball(m, R, 6.0, 193);
        CHECK(rep.energy.total < ev.free_energy(ball).total);
    }

    // fixed-point consistency: recompute h*rho on a 2x finer radial grid
    // (the density re-projects exactly since the nodes nest) and re-measure
    // the residual against the converged density values
    auto grid2 = uniform_grid(6.0, 385);
    EnergyEvaluator ev2(m, grid2, InteractionPotential::power(1.0, 4.0), light_config());
    const auto u2 = ev2.convolve(rep.density);
    const auto u1 = ev.convolve(rep.density);
    // residual at the original nodes, with the convolution recomputed
    // through the finer radial quadrature
    const auto masses = rep.density.node_masses(grid);
    double res = 0, mean = 0, wsum = 0, kernel_shift = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(rep.density.values()[i] > 0) || grid[i] > rep.support_radius) continue;
        mean += masses[i] * (rep.density.log_density(i) + u2[2 * i]);
        wsum += masses[i];
        kernel_shift = std::max(kernel_shift, std::abs(u2[2 * i] - u1[i]));
    }
    mean /= wsum;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(rep.density.values()[i] > 0) || grid[i] > rep.support_radius) continue;
        res = std::max(res, std::abs(rep.density.log_density(i) + u2[2 * i] - mean));
    }
    CHECK(res <= 10 * opt.tol + 3 * kernel_shift);
}

TEST_CASE("ground state: weak attraction is flagged as spreading") {
    auto m = make_manifold(2, CurvatureProfile::power(2.0), 9.0);
    auto grid = uniform_grid(8.0, 129);
    EnergyEvaluator ev(m, grid, InteractionPotential::power(1.0, 1.5), light_config());
    GroundStateOptions opt;
    opt.damping = 0.5;
    opt.max_iter = 400;
    opt.tol = 1e-7;
    auto rep = find_ground_state(ev, opt);
    CHECK(!rep.converged);
    CHECK(rep.boundary_mass > 1e-2);
}

TEST_CASE("ground state: no interaction relaxes to the uniform density") {
    auto m = make_manifold(2, CurvatureProfile::constant(1.0), 5.0);
    auto grid = uniform_grid(3.0, 97);
    EnergyEvaluator ev(m, grid, InteractionPotential::zero(), light_config());
    GroundStateOptions opt;
    opt.damping = 1.0;
    opt.max_iter = 50;
    opt.tol = 1e-10;
    auto rep = find_ground_state(ev, opt);
    CHECK(rep.residual <= opt.tol);
    const double v0 = rep.density.values()[10] * std::exp(rep.density.log_scale());
    const double v1 = rep.density.values()[80] * std::exp(rep.density.log_scale());
    CHECK(v0 == doctest::Approx(v1).epsilon(1e-8));
}

TEST_CASE("energy decreases along the damped iteration (eta <= 0.3)") {
    auto m = make_manifold(2, CurvatureProfile::power(2.0), 7.0);
    auto grid = uniform_grid(4.0, 129);
    EnergyEvaluator ev(m, grid, InteractionPotential::power(1.0, 4.0), light_config());
    GroundStateOptions opt;
    opt.damping = 0.3;
    opt.tol = 1e-14; // never reached; watch the energies instead
    double prev = 1e300;
    for (int iters : {1, 2, 4, 8, 16, 32, 64}) {
        opt.max_iter = iters;
        auto rep = find_ground_state(ev, opt);
        CHECK(rep.energy.total <= prev + 1e-8);
        prev = rep.energy.total;
    }
}

TEST_CASE("coercivity across the uniform-ball family") {
    auto m = make_manifold(2, CurvatureProfile::power(2.0), 11.0);
    auto grid = uniform_grid(10.0, 161);
    EnergyEvaluator strong(m, grid, InteractionPotential::power(1.0, 4.0), light_config());
    std::vector<RadialDensity> family;
    for (double R = 1.0; R <= 8.0; R += 1.0)
        family.push_back(make_uniform_ball(m, R, 10.0, 161));
    CHECK(check_coercivity(strong, family).satisfied());

    EnergyEvaluator weak(m, grid, InteractionPotential::power(1.0, 1.5), light_config());
    CHECK(check_coercivity(weak, family).violated());
}
