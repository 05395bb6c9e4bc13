#include <cmath>

#include "doctest.h"
#include "larom/burgers.hpp"

using namespace larom;

namespace {

ParameterVector mu(double a, double w) { return ParameterVector{{a, w}, {"a", "w"}}; }

double mass(const Matrix& u, std::size_t row, double dx) {
    double s = 0.0;
    for (std::size_t j = 0; j < u.cols(); ++j) s += u(row, j);
    return s * dx;
}

}  // namespace

TEST_CASE("parameter grid is the cartesian product with flags") {
    const ParameterGrid g = make_parameter_grid({{0.0, 1.0}, {2.0, 3.0, 4.0}}, {"a", "w"});
    REQUIRE(g.num_points() == 6);
    CHECK(g.points[0].values == std::vector<double>{0.0, 2.0});
    CHECK(g.points[2].values == std::vector<double>{0.0, 4.0});
    CHECK(g.points[5].values == std::vector<double>{1.0, 4.0});
    CHECK(g.sampled.size() == 6);
    CHECK(grid_find(g, mu(1.0, 3.0)) == 4);
    CHECK(grid_find(g, mu(9.0, 9.0)) == static_cast<std::size_t>(-1));
}

TEST_CASE("grid corners") {
    const ParameterGrid g = make_parameter_grid({{0.7, 0.8, 0.9}, {0.9, 1.0, 1.1}}, {"a", "w"});
    const auto corners = grid_corners(g);
    REQUIRE(corners.size() == 4);
    CHECK(corners[0].values == std::vector<double>{0.7, 0.9});
    CHECK(corners[3].values == std::vector<double>{0.9, 1.1});
}

TEST_CASE("initial condition closed forms") {
    const SpaceTimeGrid g = make_grid(128, 200, -3.0, 3.0, 1.0);

    const auto zero = initial_condition(mu(0.0, 1.0), g);
    for (double v : zero) CHECK(v == 0.0);

    const auto flat = initial_condition(mu(1.0, 1e6), g);
    for (double v : flat) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

    // a=0.8, w=0.9: value at x=0 and x=w
    const SpaceTimeGrid fine = make_grid(600, 10, -3.0, 3.0, 1.0);
    const auto u0 = initial_condition(mu(0.8, 0.9), fine);
    // x = 0 at j = 300, x = 0.9 at j = 390 (dx = 0.01)
    CHECK(u0[300] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(u0[390] == doctest::Approx(0.8 * std::exp(-0.5)).epsilon(1e-12));

    CHECK_THROWS_AS(initial_condition(mu(1.0, 0.0), g), ParameterError);
    CHECK_THROWS_AS(initial_condition(mu(1.0, -1.0), g), ParameterError);
}

TEST_CASE("zero initial condition solves to the zero field") {
    const SpaceTimeGrid g = make_grid(64, 50, -3.0, 3.0, 1.0);
    const SnapshotMatrix s = solve(mu(0.0, 1.0), g, 0.02);
    for (double v : s.u.raw()) CHECK(v == 0.0);
}

TEST_CASE("constant state is an exact periodic solution") {
    const SpaceTimeGrid g = make_grid(64, 200, -3.0, 3.0, 1.0);
    // constant IC via the flat-limit of the Gaussian
    const SnapshotMatrix s = solve(mu(0.5, 1e9), g, 0.02);
    for (std::size_t n = 0; n <= g.n_time; ++n)
        for (std::size_t j = 0; j < g.n_space; ++j)
            CHECK(s.u(n, j) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("row 0 bit-equals the initial condition") {
    const SpaceTimeGrid g = make_grid(128, 200, -3.0, 3.0, 1.0);
    const auto m = mu(1.0, 0.5);
    const SnapshotMatrix s = solve(m, g, 0.02);
    const auto u0 = initial_condition(m, g);
    for (std::size_t j = 0; j < g.n_space; ++j) CHECK(s.u(0, j) == u0[j]);
}

TEST_CASE("mass conservation under the conservative flux") {
    const SpaceTimeGrid g = make_grid(128, 200, -3.0, 3.0, 1.0);
    const SnapshotMatrix s = solve(mu(1.0, 0.5), g, 0.02);
    const double m0 = mass(s.u, 0, g.dx);
    for (std::size_t n = 1; n <= g.n_time; ++n) {
        const double drift = std::abs(mass(s.u, n, g.dx) - mass(s.u, n - 1, g.dx));
        CHECK(drift / std::abs(m0) < 1e-10);  // per-step telescoping
    }
    CHECK(std::abs(mass(s.u, g.n_time, g.dx) - m0) / std::abs(m0) < 1e-8);
}

TEST_CASE("determinism: identical inputs give bit-identical snapshots") {
    const SpaceTimeGrid g = make_grid(64, 100, -3.0, 3.0, 1.0);
    const SnapshotMatrix a = solve(mu(0.8, 1.0), g, 0.02);
    const SnapshotMatrix b = solve(mu(0.8, 1.0), g, 0.02);
    CHECK(a.u.raw() == b.u.raw());
}

TEST_CASE("stability violation is refused") {
    // huge viscosity forces a tiny diffusive dt bound
    const SpaceTimeGrid g = make_grid(128, 10, -3.0, 3.0, 1.0);
    CHECK_THROWS_AS(solve(mu(1.0, 0.5), g, 10.0), ConfigError);
}

TEST_CASE("runtime probe returns positive durations that grow with work") {
    const SpaceTimeGrid small = make_grid(128, 400, -3.0, 3.0, 1.0);
    const SpaceTimeGrid big = make_grid(128, 40000, -3.0, 3.0, 1.0);
    const auto m = mu(0.8, 1.0);
    double t_small = 1e9, t_big = 1e9;
    // min-of-3 to damp scheduler noise
    for (int r = 0; r < 3; ++r) {
        t_small = std::min(t_small, fom_runtime_probe(m, small, 0.02));
        t_big = std::min(t_big, fom_runtime_probe(m, big, 0.02));
    }
    CHECK(t_small > 0.0);
    CHECK(t_big > 0.0);
    CHECK(t_big / t_small > 1.5);
}
