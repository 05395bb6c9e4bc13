#pragma once

#include <cstdint>
#include <vector>

#include "larom/burgers.hpp"
#include "larom/linalg.hpp"
#include "larom/sindy.hpp"

namespace larom {

/// RBF (squared-exponential) kernel with ARD lengthscales. Stored in natural
/// units; optimization happens in log space.
struct RBFKernelParams {
    double signal_variance = 1.0;
    std::vector<double> lengthscales;
    double noise_variance = 1e-4;
};

/// One Gaussian Process mapping a parameter vector to (mean, std) for a
/// single scalar ODE coefficient.
struct GPModel {
    RBFKernelParams kernel;
    Matrix train_inputs;   // N_mu x d, normalized to [0,1]^d
    Matrix train_targets;  // N_mu x 1, standardized
    CholeskyFactor chol;   // of K + sigma_n^2 I
    Matrix alpha;          // (K + sigma_n^2 I)^-1 y
    double target_mean = 0.0;
    double target_std = 1.0;
    std::vector<double> input_lo, input_hi;
    bool degenerate = false;     // all raw targets equal
    double degenerate_value = 0.0;
    double log_marginal = 0.0;
    bool fitted = false;
};

/// N_z x N_l independent GPs sharing the same training inputs.
struct GPCoefficientSurrogate {
    std::size_t latent_dim = 0;
    std::size_t num_terms = 0;
    std::vector<GPModel> models;  // row-major (j, k)

    const GPModel& model(std::size_t j, std::size_t k) const {
        return models[j * num_terms + k];
    }
    GPModel& model(std::size_t j, std::size_t k) { return models[j * num_terms + k]; }
    bool fitted() const { return !models.empty(); }
};

double rbf_kernel(const std::vector<double>& x1, const std::vector<double>& x2,
                  const RBFKernelParams& params);

/// Maximizes the log marginal likelihood by gradient ascent in log space
/// with seeded random restarts; inputs are raw (un-normalized) parameters.
GPModel fit(const Matrix& inputs, const std::vector<double>& targets, std::uint64_t seed);

/// Same normalization/standardization as fit(), but with the kernel
/// hyperparameters held fixed (given in normalized-input units).
GPModel fit_fixed(const Matrix& inputs, const std::vector<double>& targets,
                  const RBFKernelParams& kernel);

/// GP posterior at a raw parameter point: de-standardized (mean, std).
std::pair<double, double> predict(const GPModel& model, const ParameterVector& mu_star);

/// One fit per (latent dim, library term) coefficient.
GPCoefficientSurrogate fit_all(const CoefficientTensor& xi,
                               const std::vector<ParameterVector>& params, std::uint64_t seed);

/// Log marginal likelihood for fixed hyperparameters (normalized inputs,
/// standardized targets). Exposed for tests.
double log_marginal_likelihood(const Matrix& inputs, const Matrix& targets,
                               const RBFKernelParams& kernel);

}  // namespace larom
