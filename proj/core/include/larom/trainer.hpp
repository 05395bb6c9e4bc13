#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "larom/burgers.hpp"
#include "larom/gp.hpp"
#include "larom/mlp.hpp"
#include "larom/rom.hpp"
#include "larom/sindy.hpp"

namespace larom {

using FomSolver = std::function<SnapshotMatrix(const ParameterVector&)>;

struct TrainerConfig {
    std::size_t max_epochs = 0;
    std::size_t greedy_interval = 0;  // N_up
    double sindy_weight = 0.25;      // beta
    double learning_rate = 1e-4;
    std::size_t n_samples = 20;  // N_s
    std::size_t fom_budget = 0;
    std::uint64_t seed = 0;
    std::size_t latent_dim = 3;  // N_z
    std::vector<std::size_t> encoder_hidden;
    bool include_constant = false;
};

struct LossRecord {
    double l_ae = 0.0;
    double l_sindy = 0.0;
    double total = 0.0;
};

struct AcquisitionRecord {
    std::size_t epoch = 0;
    ParameterVector mu;
    double max_std = 0.0;
    double fom_seconds = 0.0;
};

struct TrainingState {
    std::size_t epoch = 0;
    std::vector<ParameterVector> dataset_params;
    std::vector<SnapshotMatrix> dataset;
    std::vector<double> fom_seconds;  // per dataset entry
    Autoencoder ae;
    CoefficientTensor xi;
    AdamState adam;
    SindyLibrary lib;
    SpaceTimeGrid grid;
    TrainerConfig config;
    std::vector<LossRecord> loss_history;
    std::vector<AcquisitionRecord> acquisition_log;
    GPCoefficientSurrogate surrogate;

    Matrix u_all;  // all snapshots stacked, rebuilt when the dataset changes
};

struct JointLossResult {
    double total = 0.0;
    double l_ae = 0.0;
    double l_sindy = 0.0;
    std::vector<Matrix> encoder_weight_grads, encoder_bias_grads;
    std::vector<Matrix> decoder_weight_grads, decoder_bias_grads;
    std::vector<Matrix> xi_grads;
};

/// Fresh training state: runs the FOM on the initial parameters, builds the
/// autoencoder, and initializes Xi by least squares on the encoded data.
TrainingState init_training(const TrainerConfig& config,
                            const std::vector<ParameterVector>& initial_params,
                            ParameterGrid& grid, const SpaceTimeGrid& st_grid,
                            const FomSolver& fom);

/// L_AE + beta * L_SINDy over the full dataset, with exact gradients for the
/// encoder (both terms), decoder (reconstruction), and Xi (dynamics).
JointLossResult joint_loss(const TrainingState& state);

/// One full-batch Adam update; appends to the loss history.
void train_epoch(TrainingState& state);

/// Deterministic argmax with lowest-index tie-break.
std::size_t argmax_variance(const std::vector<double>& candidate_max_variance);

/// Refits GPs are expected beforehand (state.surrogate). Evaluates the ROM at
/// every unsampled grid point, acquires the variance-argmax parameter, runs
/// the FOM there, and appends a warm-started Xi slice.
void greedy_acquire(TrainingState& state, ParameterGrid& grid, const FomSolver& fom);

using CheckpointCallback = std::function<void(const TrainingState&)>;

/// Full training loop: joint training with periodic GP refit + greedy FOM
/// acquisition until max_epochs. on_error, when set, receives the last good
/// state before an exception propagates.
TrainingState run_training(const TrainerConfig& config,
                           const std::vector<ParameterVector>& initial_params,
                           ParameterGrid& grid, const SpaceTimeGrid& st_grid,
                           const FomSolver& fom,
                           const CheckpointCallback& on_error = nullptr);

}  // namespace larom
