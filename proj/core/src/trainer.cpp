#include "larom/trainer.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

namespace larom {

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1) + 0xbf58476d1ce4e5b9ULL * (c + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

void rebuild_stacked(TrainingState& state) {
    const std::size_t rows_per = state.grid.n_time + 1;
    const std::size_t nu = state.grid.n_space;
    state.u_all = Matrix(rows_per * state.dataset.size(), nu);
    for (std::size_t i = 0; i < state.dataset.size(); ++i)
        for (std::size_t r = 0; r < rows_per; ++r)
            for (std::size_t j = 0; j < nu; ++j)
                state.u_all(i * rows_per + r, j) = state.dataset[i].u(r, j);
}

void append_adam_slot(AdamState& adam, const Matrix& shape_like) {
    adam.first_moment.emplace_back(shape_like.rows(), shape_like.cols());
    adam.second_moment.emplace_back(shape_like.rows(), shape_like.cols());
}

// Pack order: encoder (W,b per layer), decoder (W,b per layer), Xi slices.
// Adam moments are aligned to this order; new Xi slices append at the end.
std::vector<Matrix*> param_pack(TrainingState& state) {
    std::vector<Matrix*> pack;
    for (std::size_t k = 0; k < state.ae.encoder.num_layers(); ++k) {
        pack.push_back(&state.ae.encoder.weights[k]);
        pack.push_back(&state.ae.encoder.biases[k]);
    }
    for (std::size_t k = 0; k < state.ae.decoder.num_layers(); ++k) {
        pack.push_back(&state.ae.decoder.weights[k]);
        pack.push_back(&state.ae.decoder.biases[k]);
    }
    for (Matrix& s : state.xi.slices) pack.push_back(&s);
    return pack;
}

std::vector<const Matrix*> grad_pack(const JointLossResult& g) {
    std::vector<const Matrix*> pack;
    for (std::size_t k = 0; k < g.encoder_weight_grads.size(); ++k) {
        pack.push_back(&g.encoder_weight_grads[k]);
        pack.push_back(&g.encoder_bias_grads[k]);
    }
    for (std::size_t k = 0; k < g.decoder_weight_grads.size(); ++k) {
        pack.push_back(&g.decoder_weight_grads[k]);
        pack.push_back(&g.decoder_bias_grads[k]);
    }
    for (const Matrix& s : g.xi_grads) pack.push_back(&s);
    return pack;
}

void accumulate(std::vector<Matrix>& into, const std::vector<Matrix>& from) {
    if (into.empty()) {
        into = from;
        return;
    }
    for (std::size_t k = 0; k < into.size(); ++k)
        for (std::size_t i = 0; i < into[k].size(); ++i)
            into[k].raw()[i] += from[k].raw()[i];
}

}  // namespace

JointLossResult joint_loss(const TrainingState& state) {
    if (state.dataset.empty()) throw StateError("joint_loss: empty dataset");
    const std::size_t n_traj = state.dataset.size();
    const std::size_t rows_per = state.grid.n_time + 1;
    const double beta = state.config.sindy_weight;

    // One batched pass through the autoencoder for all trajectories.
    GradientTape enc_tape, dec_tape;
    const Matrix z_all = forward(state.ae.encoder, state.u_all, &enc_tape);
    const Matrix u_hat = forward(state.ae.decoder, z_all, &dec_tape);

    JointLossResult out;
    const double m_ae = static_cast<double>(state.u_all.size());
    Matrix du_hat(u_hat.rows(), u_hat.cols());
    for (std::size_t i = 0; i < u_hat.size(); ++i) {
        const double r = u_hat.raw()[i] - state.u_all.raw()[i];
        out.l_ae += r * r;
        du_hat.raw()[i] = 2.0 * r / m_ae;
    }
    out.l_ae /= m_ae;

    MLPGradients dec_g = backward(dec_tape, du_hat);
    out.decoder_weight_grads = std::move(dec_g.weight_grads);
    out.decoder_bias_grads = std::move(dec_g.bias_grads);
    Matrix dz_all = std::move(dec_g.input_grad);  // reconstruction path

    // Per-trajectory SINDy residuals; gradients feed back into dz_all.
    const double traj_scale = beta / static_cast<double>(n_traj);
    out.xi_grads.resize(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i) {
        Matrix z(rows_per, z_all.cols());
        for (std::size_t r = 0; r < rows_per; ++r)
            for (std::size_t j = 0; j < z.cols(); ++j) z(r, j) = z_all(i * rows_per + r, j);
        const LatentTrajectory traj = make_trajectory(z, state.grid.dt);
        const SindyResidual res = sindy_residual(traj, state.xi.slices[i], state.lib);
        out.l_sindy += res.loss / static_cast<double>(n_traj);
        out.xi_grads[i] = scale(res.xi_grad, traj_scale);
        for (std::size_t r = 0; r < rows_per; ++r)
            for (std::size_t j = 0; j < z.cols(); ++j)
                dz_all(i * rows_per + r, j) += traj_scale * res.z_grad(r, j);
    }

    MLPGradients enc_g = backward(enc_tape, dz_all);
    out.encoder_weight_grads = std::move(enc_g.weight_grads);
    out.encoder_bias_grads = std::move(enc_g.bias_grads);

    out.total = out.l_ae + beta * out.l_sindy;
    if (!std::isfinite(out.total))
        throw DivergenceError("joint_loss: non-finite loss at epoch " +
                                  std::to_string(state.epoch),
                              state.epoch);
    return out;
}

void train_epoch(TrainingState& state) {
    const JointLossResult g = joint_loss(state);
    auto params = param_pack(state);
    const auto grads = grad_pack(g);
    adam_step(params, grads, state.adam);
    state.epoch += 1;
    state.loss_history.push_back({g.l_ae, g.l_sindy, g.total});
}

std::size_t argmax_variance(const std::vector<double>& candidate_max_variance) {
    if (candidate_max_variance.empty()) throw StateError("argmax_variance: no candidates");
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidate_max_variance.size(); ++i)
        if (candidate_max_variance[i] > candidate_max_variance[best]) best = i;
    return best;
}

static void add_snapshot(TrainingState& state, const ParameterVector& mu,
                         const FomSolver& fom) {
    const auto t0 = std::chrono::steady_clock::now();
    SnapshotMatrix snap = fom(mu);
    const auto t1 = std::chrono::steady_clock::now();
    state.fom_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    state.dataset_params.push_back(mu);
    state.dataset.push_back(std::move(snap));
}

static Matrix warm_start_slice(const TrainingState& state, const SnapshotMatrix& snap) {
    const Matrix z = forward(state.ae.encoder, snap.u);
    return least_squares_fit(make_trajectory(z, state.grid.dt), state.lib);
}

void greedy_acquire(TrainingState& state, ParameterGrid& grid, const FomSolver& fom) {
    if (!state.surrogate.fitted())
        throw StateError("greedy_acquire: GP surrogate not fitted");
    if (state.acquisition_log.size() >= state.config.fom_budget) {
        std::cerr << "[trainer] acquisition budget exhausted; skipping\n";
        return;
    }
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < grid.num_points(); ++i)
        if (!grid.sampled[i]) candidates.push_back(i);
    if (candidates.empty()) throw StateError("greedy_acquire: no unsampled grid points");

    std::vector<double> scores(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const std::uint64_t s = mix_seed(state.config.seed, state.epoch, candidates[c]);
        const ROMPrediction pred =
            rom_predict(state.ae, state.surrogate, grid.points[candidates[c]], state.grid,
                        state.lib, state.config.n_samples, s);
        scores[c] = pred.max_std * pred.max_std;  // max over (t,x) of the variance field
    }
    const std::size_t pick = candidates[argmax_variance(scores)];
    const ParameterVector mu = grid.points[pick];

    add_snapshot(state, mu, fom);
    grid.sampled[pick] = true;
    state.xi.slices.push_back(warm_start_slice(state, state.dataset.back()));
    append_adam_slot(state.adam, state.xi.slices.back());
    rebuild_stacked(state);
    state.acquisition_log.push_back({state.epoch, mu,
                                     std::sqrt(scores[argmax_variance(scores)]),
                                     state.fom_seconds.back()});
}

TrainingState init_training(const TrainerConfig& config,
                            const std::vector<ParameterVector>& initial_params,
                            ParameterGrid& grid, const SpaceTimeGrid& st_grid,
                            const FomSolver& fom) {
    if (initial_params.empty()) throw ConfigError("init_training: no initial parameters");
    if (config.max_epochs == 0) throw ConfigError("init_training: max_epochs must be > 0");
    if (config.greedy_interval == 0 || config.greedy_interval > config.max_epochs)
        throw ConfigError("init_training: greedy_interval must be in [1, max_epochs]");
    if (config.latent_dim >= st_grid.n_space)
        throw ConfigError("init_training: latent_dim must be < n_space");
    if (config.sindy_weight < 0.0) throw ConfigError("init_training: sindy_weight must be >= 0");

    TrainingState state;
    state.grid = st_grid;
    state.config = config;
    state.lib = SindyLibrary{config.latent_dim, config.include_constant};

    for (const auto& mu : initial_params) {
        add_snapshot(state, mu, fom);
        const std::size_t idx = grid_find(grid, mu);
        if (idx != static_cast<std::size_t>(-1)) grid.sampled[idx] = true;
    }

    std::vector<std::size_t> enc_sizes{st_grid.n_space};
    enc_sizes.insert(enc_sizes.end(), config.encoder_hidden.begin(),
                     config.encoder_hidden.end());
    enc_sizes.push_back(config.latent_dim);
    std::vector<std::size_t> dec_sizes(enc_sizes.rbegin(), enc_sizes.rend());
    state.ae.encoder = init_params(enc_sizes, config.seed);
    state.ae.decoder = init_params(dec_sizes, config.seed + 1);
    state.ae.latent_dim = config.latent_dim;

    for (const auto& snap : state.dataset)
        state.xi.slices.push_back(warm_start_slice(state, snap));

    rebuild_stacked(state);
    auto pack = param_pack(state);
    std::vector<const Matrix*> cpack(pack.begin(), pack.end());
    state.adam = make_adam_state(cpack, config.learning_rate);
    return state;
}

TrainingState run_training(const TrainerConfig& config,
                           const std::vector<ParameterVector>& initial_params,
                           ParameterGrid& grid, const SpaceTimeGrid& st_grid,
                           const FomSolver& fom, const CheckpointCallback& on_error) {
    TrainingState state = init_training(config, initial_params, grid, st_grid, fom);
    try {
        for (std::size_t e = 1; e <= config.max_epochs; ++e) {
            train_epoch(state);
            const bool due = (state.epoch % config.greedy_interval == 0);
            const bool budget_left = state.acquisition_log.size() < config.fom_budget;
            bool unsampled_left = false;
            for (bool s : grid.sampled)
                if (!s) {
                    unsampled_left = true;
                    break;
                }
            if (due && budget_left && unsampled_left) {
                state.surrogate = fit_all(state.xi, state.dataset_params, config.seed);
                greedy_acquire(state, grid, fom);
            }
        }
        state.surrogate = fit_all(state.xi, state.dataset_params, config.seed);
    } catch (...) {
        if (on_error) on_error(state);
        throw;
    }
    return state;
}

}  // namespace larom
