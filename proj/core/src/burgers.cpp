#include "larom/burgers.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace larom {

ParameterGrid make_parameter_grid(const std::vector<std::vector<double>>& breakpoints,
                                  const std::vector<std::string>& names) {
    if (breakpoints.empty()) throw ConfigError("parameter grid: no breakpoints");
    if (!names.empty() && names.size() != breakpoints.size())
        throw ConfigError("parameter grid: names/breakpoints length mismatch");
    ParameterGrid g;
    g.breakpoints = breakpoints;
    g.names = names;
    for (auto& b : g.breakpoints)
        if (b.empty()) throw ConfigError("parameter grid: empty breakpoint list");

    std::size_t total = 1;
    for (const auto& b : g.breakpoints) total *= b.size();
    g.points.reserve(total);
    std::vector<std::size_t> idx(breakpoints.size(), 0);
    for (std::size_t p = 0; p < total; ++p) {
        ParameterVector mu;
        mu.names = names;
        for (std::size_t d = 0; d < idx.size(); ++d) mu.values.push_back(g.breakpoints[d][idx[d]]);
        g.points.push_back(std::move(mu));
        for (std::size_t d = idx.size(); d-- > 0;) {
            if (++idx[d] < g.breakpoints[d].size()) break;
            idx[d] = 0;
        }
    }
    g.sampled.assign(total, false);
    return g;
}

std::vector<ParameterVector> grid_corners(const ParameterGrid& grid) {
    std::vector<ParameterVector> corners;
    const std::size_t d = grid.breakpoints.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        ParameterVector mu;
        mu.names = grid.names;
        for (std::size_t k = 0; k < d; ++k) {
            const auto& b = grid.breakpoints[k];
            mu.values.push_back((mask >> (d - 1 - k)) & 1 ? b.back() : b.front());
        }
        corners.push_back(std::move(mu));
    }
    return corners;
}

std::size_t grid_find(const ParameterGrid& grid, const ParameterVector& mu) {
    for (std::size_t i = 0; i < grid.points.size(); ++i)
        if (grid.points[i].values == mu.values) return i;
    return static_cast<std::size_t>(-1);
}

SpaceTimeGrid make_grid(std::size_t n_space, std::size_t n_time, double x_min, double x_max,
                        double t_max) {
    if (n_space < 3 || n_time < 1) throw ConfigError("grid: n_space >= 3 and n_time >= 1 required");
    if (!(x_max > x_min) || !(t_max > 0.0)) throw ConfigError("grid: empty domain");
    SpaceTimeGrid g;
    g.n_space = n_space;
    g.n_time = n_time;
    g.x_min = x_min;
    g.x_max = x_max;
    g.t_max = t_max;
    g.dx = (x_max - x_min) / static_cast<double>(n_space);  // periodic: no duplicate endpoint
    g.dt = t_max / static_cast<double>(n_time);
    return g;
}

std::vector<double> initial_condition(const ParameterVector& mu, const SpaceTimeGrid& grid) {
    if (mu.dim() != 2) throw ParameterError("initial_condition: expected mu = (a, w)");
    const double a = mu.values[0];
    const double w = mu.values[1];
    if (!(w > 0.0)) throw ParameterError("initial_condition: width w must be > 0");
    std::vector<double> u0(grid.n_space);
    for (std::size_t j = 0; j < grid.n_space; ++j) {
        const double x = grid.x(j);
        u0[j] = a * std::exp(-x * x / (2.0 * w * w));
    }
    return u0;
}

double stable_dt(const ParameterVector& mu, const SpaceTimeGrid& grid, double viscosity) {
    constexpr double kCfl = 0.9;
    const auto u0 = initial_condition(mu, grid);
    double umax = 0.0;
    for (double v : u0) umax = std::max(umax, std::abs(v));
    double bound = std::numeric_limits<double>::infinity();
    if (umax > 0.0) bound = kCfl * grid.dx / umax;
    if (viscosity > 0.0)
        bound = std::min(bound, kCfl * grid.dx * grid.dx / (2.0 * viscosity));
    return bound;
}

namespace {

// Godunov flux for f(u) = u^2/2.
inline double godunov_flux(double ul, double ur) {
    if (ul > ur) {  // shock: flux at the side the shock moves toward
        const double s = 0.5 * (ul + ur);
        return s > 0.0 ? 0.5 * ul * ul : 0.5 * ur * ur;
    }
    // rarefaction
    if (ul > 0.0) return 0.5 * ul * ul;
    if (ur < 0.0) return 0.5 * ur * ur;
    return 0.0;  // sonic point u = 0
}

}  // namespace

SnapshotMatrix solve(const ParameterVector& mu, const SpaceTimeGrid& grid, double viscosity) {
    if (grid.dt > stable_dt(mu, grid, viscosity))
        throw ConfigError("solve: dt violates the stability bound; refine n_time");

    const std::size_t n = grid.n_space;
    SnapshotMatrix snap;
    snap.mu = mu;
    snap.grid = grid;
    snap.u = Matrix(grid.n_time + 1, n);

    std::vector<double> u = initial_condition(mu, grid);
    for (std::size_t j = 0; j < n; ++j) snap.u(0, j) = u[j];

    std::vector<double> flux(n);  // flux[j] is at interface j-1/2
    std::vector<double> unew(n);
    const double lam = grid.dt / grid.dx;
    const double dif = viscosity * grid.dt / (grid.dx * grid.dx);
    for (std::size_t step = 1; step <= grid.n_time; ++step) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ul = u[(j + n - 1) % n];
            flux[j] = godunov_flux(ul, u[j]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double up = u[(j + 1) % n];
            const double um = u[(j + n - 1) % n];
            const double fr = flux[(j + 1) % n];
            unew[j] = u[j] - lam * (fr - flux[j]) + dif * (up - 2.0 * u[j] + um);
        }
        u.swap(unew);
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(u[j]))
                throw DivergenceError("solve: non-finite state at step " + std::to_string(step),
                                      step);
            snap.u(step, j) = u[j];
        }
    }
    return snap;
}

double fom_runtime_probe(const ParameterVector& mu, const SpaceTimeGrid& grid,
                         double viscosity) {
    const auto t0 = std::chrono::steady_clock::now();
    volatile double sink = solve(mu, grid, viscosity).u(grid.n_time, 0);
    (void)sink;
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace larom
