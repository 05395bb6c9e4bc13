#pragma once

#include <string>
#include <vector>

#include "larom/linalg.hpp"

namespace larom {

/// Point in parameter space. For the Burgers model: (amplitude a, width w).
struct ParameterVector {
    std::vector<double> values;
    std::vector<std::string> names;

    std::size_t dim() const { return values.size(); }
    bool operator==(const ParameterVector& o) const { return values == o.values; }
};

/// Cartesian-product discretization of the parameter space with per-point
/// sampled flags. Linear index: dim 0 slowest, last dim fastest.
struct ParameterGrid {
    std::vector<std::vector<double>> breakpoints;
    std::vector<std::string> names;
    std::vector<ParameterVector> points;
    std::vector<bool> sampled;

    std::size_t num_points() const { return points.size(); }
};

ParameterGrid make_parameter_grid(const std::vector<std::vector<double>>& breakpoints,
                                  const std::vector<std::string>& names);
/// The corner points of the grid's bounding box (2^d parameters).
std::vector<ParameterVector> grid_corners(const ParameterGrid& grid);
/// Index of the grid point equal to mu, or npos.
std::size_t grid_find(const ParameterGrid& grid, const ParameterVector& mu);

/// Uniform periodic space grid on [x_min, x_max) with N_t uniform time steps.
struct SpaceTimeGrid {
    std::size_t n_space = 0;  // N_u
    std::size_t n_time = 0;   // N_t
    double x_min = 0.0;
    double x_max = 0.0;
    double t_max = 0.0;
    double dx = 0.0;
    double dt = 0.0;

    double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }
};

SpaceTimeGrid make_grid(std::size_t n_space, std::size_t n_time, double x_min, double x_max,
                        double t_max);

/// Full-order solution history for one parameter: (N_t+1) x N_u.
struct SnapshotMatrix {
    Matrix u;
    ParameterVector mu;
    SpaceTimeGrid grid;
};

/// Gaussian bump u0(x) = a * exp(-x^2 / (2 w^2)).
std::vector<double> initial_condition(const ParameterVector& mu, const SpaceTimeGrid& grid);

/// Explicit conservative solve of u_t + u u_x = nu u_xx, periodic boundaries.
/// Godunov upwind flux for advection, central differences for diffusion.
SnapshotMatrix solve(const ParameterVector& mu, const SpaceTimeGrid& grid, double viscosity);

/// Wall-clock seconds for one solve at (mu, grid).
double fom_runtime_probe(const ParameterVector& mu, const SpaceTimeGrid& grid,
                         double viscosity);

/// Largest dt allowed by the advective and diffusive stability bounds (C = 0.9).
double stable_dt(const ParameterVector& mu, const SpaceTimeGrid& grid, double viscosity);

}  // namespace larom
