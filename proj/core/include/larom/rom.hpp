#pragma once

#include <cstdint>
#include <vector>

#include "larom/burgers.hpp"
#include "larom/gp.hpp"
#include "larom/mlp.hpp"
#include "larom/sindy.hpp"

namespace larom {

/// Ensemble mean/variance fields for one test parameter.
struct ROMPrediction {
    Matrix mean;      // (N_t+1) x N_u
    Matrix variance;  // (N_t+1) x N_u
    double max_std = 0.0;
    ParameterVector mu_star;
    std::size_t samples_used = 0;
    std::size_t samples_diverged = 0;
};

/// Draw N_s coefficient sets; each scalar coefficient is sampled
/// independently from its GP posterior N(m, s^2). N_s == 1 returns the
/// predictive means exactly (no noise).
std::vector<Matrix> sample_coefficients(const GPCoefficientSurrogate& surrogate,
                                        const ParameterVector& mu_star, std::size_t n_samples,
                                        std::uint64_t seed);

/// Forward Euler: z_{n+1} = z_n + dt * Theta(z_n) * xi^T.
Matrix integrate_latent(const Matrix& xi_slice, const std::vector<double>& z0,
                        std::size_t n_time, double dt, const SindyLibrary& lib);

std::vector<double> encode_initial_condition(const Autoencoder& ae,
                                             const std::vector<double>& u0);

/// Full ROM prediction: encode u0, sample coefficient sets, integrate,
/// decode, and reduce to ensemble mean/variance (unbiased).
ROMPrediction rom_predict(const Autoencoder& ae, const GPCoefficientSurrogate& surrogate,
                          const ParameterVector& mu_star, const SpaceTimeGrid& grid,
                          const SindyLibrary& lib, std::size_t n_samples, std::uint64_t seed);

/// Max over time rows of ||pred_row - true_row||_2 / ||true_row||_2.
double max_relative_error(const Matrix& u_true, const Matrix& u_pred_mean);

}  // namespace larom
