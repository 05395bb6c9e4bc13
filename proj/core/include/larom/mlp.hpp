#pragma once

#include <cstdint>
#include <vector>

#include "larom/linalg.hpp"

namespace larom {

/// Fully-connected network parameters. weights[k] has shape
/// layer_sizes[k+1] x layer_sizes[k]; biases[k] is 1 x layer_sizes[k+1].
/// Hidden layers use softplus, the final layer is affine.
struct MLPParams {
    std::vector<std::size_t> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<Matrix> biases;

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }
    std::size_t num_layers() const { return weights.size(); }
};

/// Per-layer gradients matching MLPParams shapes, plus the gradient of the
/// loss with respect to the network input (needed to chain encoder/decoder).
struct MLPGradients {
    std::vector<Matrix> weight_grads;
    std::vector<Matrix> bias_grads;
    Matrix input_grad;
};

/// Cached activations from a forward pass, consumed by backward().
struct GradientTape {
    const MLPParams* net = nullptr;
    Matrix input;
    std::vector<Matrix> pre_activations;   // per layer, before softplus
    std::vector<Matrix> post_activations;  // per hidden layer, after softplus
    bool valid = false;
};

struct Autoencoder {
    MLPParams encoder;
    MLPParams decoder;
    std::size_t latent_dim = 0;
};

/// First/second moment buffers for Adam over a flat pack of tensors.
struct AdamState {
    std::size_t step = 0;
    std::vector<Matrix> first_moment;
    std::vector<Matrix> second_moment;
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

double softplus(double x);
double sigmoid(double x);

/// Batch forward pass; x rows are samples. Optionally records a tape.
Matrix forward(const MLPParams& net, const Matrix& x, GradientTape* tape = nullptr);

/// Reverse-mode gradients of a scalar loss given dLoss/dOutput.
MLPGradients backward(const GradientTape& tape, const Matrix& loss_grad_on_output);

/// One bias-corrected Adam update over a pack of tensors.
void adam_step(std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               AdamState& state);

/// Xavier-uniform weights, zero biases, deterministic for a fixed seed.
MLPParams init_params(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

AdamState make_adam_state(const std::vector<const Matrix*>& params, double lr,
                          double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

}  // namespace larom
