#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "larom/burgers.hpp"
#include "larom/gp.hpp"
#include "larom/trainer.hpp"

namespace larom {

struct FomConfig {
    std::size_t n_space = 128;
    std::size_t n_time = 200;
    double x_min = -3.0;
    double x_max = 3.0;
    double t_max = 1.0;
    double viscosity = 0.02;
};

struct GridConfig {
    std::vector<std::string> names;
    std::vector<double> min;
    std::vector<double> max;
    std::vector<std::size_t> count;
};

struct RunConfig {
    FomConfig fom;
    GridConfig pgrid;
    TrainerConfig trainer;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
};

RunConfig load_config(const std::string& path);
/// Cross-field validation (CFL bound, schedule arithmetic); throws ConfigError
/// naming the offending field.
void validate_config(const RunConfig& cfg);

SpaceTimeGrid space_time_grid(const FomConfig& fom);
ParameterGrid parameter_grid(const GridConfig& cfg);

/// Binary snapshot format (.snap): magic "LSNP", version, N_t, N_u, dt, dx,
/// parameter vector, then row-major little-endian float64 payload.
void write_snapshot(const std::string& path, const SnapshotMatrix& snap);
SnapshotMatrix read_snapshot(const std::string& path);

struct Checkpoint {
    FomConfig fom;
    GridConfig pgrid;
    TrainerConfig trainer;
    Autoencoder ae;
    CoefficientTensor xi;
    SindyLibrary lib;
    GPCoefficientSurrogate surrogate;
    std::vector<ParameterVector> dataset_params;
    std::vector<bool> sampled;
    std::vector<double> fom_seconds;
    std::uint64_t seed = 0;
};

Checkpoint make_checkpoint(const RunConfig& cfg, const TrainingState& state,
                           const ParameterGrid& grid);
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

/// Atomic text/binary write: temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& contents);

// ---- CLI command implementations ----------------------------------------

/// Runs the FOM at the grid corners and writes one .snap per parameter plus
/// a manifest with runtimes.
void cmd_generate(const RunConfig& cfg);

/// Full active-learning training run; writes checkpoint.json, loss.csv and
/// acquisitions.csv into the output directory.
void cmd_train(const RunConfig& cfg);

struct EvalSummary {
    double worst_error = 0.0;
    double mean_fom_seconds = 0.0;
    double mean_rom_seconds = 0.0;
    double speedup = 0.0;
    std::size_t rows = 0;
};

/// Per-grid-point FOM truth vs ROM prediction; writes heatmap.csv with header
/// p1,p2,max_rel_error,max_std,sampled and returns summary statistics.
EvalSummary cmd_evaluate(const RunConfig& cfg, const std::string& checkpoint_path);

/// Writes mean.snap, variance.snap and summary.json for one test parameter.
void cmd_predict(const std::string& checkpoint_path, const ParameterVector& mu,
                 std::size_t n_samples, std::uint64_t seed, const std::string& out_dir);

}  // namespace larom
