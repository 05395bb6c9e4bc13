#include "larom/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

namespace larom {

double softplus(double x) {
    // overflow-safe ln(1+e^x)
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Matrix forward(const MLPParams& net, const Matrix& x, GradientTape* tape) {
    if (x.cols() != net.input_size()) {
        throw ShapeError("forward: input has " + std::to_string(x.cols()) +
                         " columns, network expects " + std::to_string(net.input_size()));
    }
    if (tape) {
        *tape = GradientTape{};
        tape->net = &net;
        tape->input = x;
    }
    Matrix a = x;
    const std::size_t L = net.num_layers();
    for (std::size_t k = 0; k < L; ++k) {
        Matrix pre = matmul_nt(a, net.weights[k]);
        const Matrix& b = net.biases[k];
        for (std::size_t i = 0; i < pre.rows(); ++i)
            for (std::size_t j = 0; j < pre.cols(); ++j) pre(i, j) += b(0, j);
        if (tape) tape->pre_activations.push_back(pre);
        if (k + 1 < L) {
            for (double& v : pre.raw()) v = softplus(v);
            if (tape) tape->post_activations.push_back(pre);
        }
        a = std::move(pre);
    }
    if (!a.all_finite()) throw NumericError("forward: non-finite activation");
    if (tape) tape->valid = true;
    return a;
}

MLPGradients backward(const GradientTape& tape, const Matrix& loss_grad_on_output) {
    if (!tape.valid) throw StateError("backward called before forward");
    const MLPParams& net = *tape.net;
    const std::size_t L = net.num_layers();
    if (loss_grad_on_output.rows() != tape.input.rows() ||
        loss_grad_on_output.cols() != net.output_size())
        throw ShapeError("backward: loss gradient shape mismatch");

    MLPGradients g;
    g.weight_grads.resize(L);
    g.bias_grads.resize(L);

    Matrix delta = loss_grad_on_output;  // dL/d(pre) of the current layer
    for (std::size_t k = L; k-- > 0;) {
        const Matrix& layer_in = (k == 0) ? tape.input : tape.post_activations[k - 1];
        g.weight_grads[k] = matmul_tn(delta, layer_in);
        Matrix db(1, delta.cols());
        for (std::size_t i = 0; i < delta.rows(); ++i)
            for (std::size_t j = 0; j < delta.cols(); ++j) db(0, j) += delta(i, j);
        g.bias_grads[k] = std::move(db);
        Matrix da = matmul(delta, net.weights[k]);  // dL/d(layer input)
        if (k > 0) {
            const Matrix& pre = tape.pre_activations[k - 1];
            for (std::size_t i = 0; i < da.size(); ++i)
                da.raw()[i] *= sigmoid(pre.raw()[i]);  // softplus' = sigmoid
        }
        delta = std::move(da);
    }
    g.input_grad = std::move(delta);
    return g;
}

void adam_step(std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size())
        throw ShapeError("adam_step: pack size mismatch");
    state.step += 1;
    const double b1t = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double b2t = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t p = 0; p < params.size(); ++p) {
        Matrix& w = *params[p];
        const Matrix& g = *grads[p];
        Matrix& m = state.first_moment[p];
        Matrix& v = state.second_moment[p];
        if (!w.same_shape(g) || !w.same_shape(m))
            throw ShapeError("adam_step: tensor shape mismatch at index " + std::to_string(p));
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double gi = g.raw()[i];
            m.raw()[i] = state.beta1 * m.raw()[i] + (1.0 - state.beta1) * gi;
            v.raw()[i] = state.beta2 * v.raw()[i] + (1.0 - state.beta2) * gi * gi;
            const double mhat = m.raw()[i] / b1t;
            const double vhat = v.raw()[i] / b2t;
            w.raw()[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

MLPParams init_params(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2) throw ConfigError("init_params: need at least two layer sizes");
    for (std::size_t s : layer_sizes)
        if (s < 1) throw ConfigError("init_params: layer sizes must be >= 1");
    MLPParams net;
    net.layer_sizes = layer_sizes;
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        const std::size_t fan_in = layer_sizes[k];
        const std::size_t fan_out = layer_sizes[k + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        Matrix w(fan_out, fan_in);
        for (double& v : w.raw()) v = dist(rng);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(1, fan_out);
    }
    return net;
}

AdamState make_adam_state(const std::vector<const Matrix*>& params, double lr, double beta1,
                          double beta2, double eps) {
    AdamState s;
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    for (const Matrix* p : params) {
        s.first_moment.emplace_back(p->rows(), p->cols());
        s.second_moment.emplace_back(p->rows(), p->cols());
    }
    return s;
}

}  // namespace larom
