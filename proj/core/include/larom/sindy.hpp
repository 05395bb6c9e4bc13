#pragma once

#include <vector>

#include "larom/linalg.hpp"

namespace larom {

/// Candidate-term library. Default is linear terms only (the identity map on
/// a latent row); an optional constant term is prepended when enabled.
struct SindyLibrary {
    std::size_t latent_dim = 0;  // N_z
    bool include_constant = false;

    std::size_t num_terms() const { return latent_dim + (include_constant ? 1 : 0); }  // N_l
};

/// Encoder output over time plus its finite-difference time derivative.
struct LatentTrajectory {
    Matrix z;      // (N_t+1) x N_z
    Matrix z_dot;  // (N_t+1) x N_z
    double dt = 0.0;
};

/// Per-parameter trainable ODE coefficient matrices, each N_z x N_l.
struct CoefficientTensor {
    std::vector<Matrix> slices;

    std::size_t num_slices() const { return slices.size(); }
};

/// Loss and exact gradients of the mean-squared SINDy residual.
struct SindyResidual {
    double loss = 0.0;
    Matrix xi_grad;  // N_z x N_l
    Matrix z_grad;   // (N_t+1) x N_z, through both the library and the stencil
};

/// Second-order finite differences in time: central on interior rows,
/// one-sided at the first and last row.
Matrix estimate_time_derivative(const Matrix& z, double dt);

LatentTrajectory make_trajectory(const Matrix& z, double dt);

std::vector<double> build_library_row(const SindyLibrary& lib, const std::vector<double>& z_row);
/// Library matrix for a whole trajectory: (N_t+1) x N_l.
Matrix build_library(const SindyLibrary& lib, const Matrix& z);

SindyResidual sindy_residual(const LatentTrajectory& traj, const Matrix& xi_slice,
                             const SindyLibrary& lib);

/// Closed-form least-squares fit of z_dot ~ Theta(z) * xi^T via the normal
/// equations (Cholesky with a small jitter).
Matrix least_squares_fit(const LatentTrajectory& traj, const SindyLibrary& lib);

}  // namespace larom
