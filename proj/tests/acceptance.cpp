// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. argv[1] (optional) is the path to the CLI binary for the exit-code
// checks.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "larom/io.hpp"
#include "larom/rom.hpp"
#include "larom/trainer.hpp"

using namespace larom;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail = "") {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": "
              << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

// ---- criterion 1: joint-loss gradients vs central finite differences ------

bool check_gradients(std::string& detail) {
    const SpaceTimeGrid st = make_grid(6, 10, -3.0, 3.0, 1.0);
    const double nu = 0.02;
    ParameterGrid grid = make_parameter_grid({{0.7, 0.9}, {1.0}}, {"a", "w"});
    TrainerConfig cfg;
    cfg.max_epochs = 10;
    cfg.greedy_interval = 5;
    cfg.latent_dim = 2;
    cfg.encoder_hidden = {4};
    cfg.seed = 3;
    const FomSolver fom = [&](const ParameterVector& mu) { return solve(mu, st, nu); };
    TrainingState state = init_training(cfg, grid.points, grid, st, fom);

    const JointLossResult g = joint_loss(state);
    const double h = 1e-6;
    double worst = 0.0;
    const auto fd_check = [&](Matrix& param, const Matrix& grad) {
        for (std::size_t i = 0; i < param.size(); ++i) {
            const double saved = param.raw()[i];
            param.raw()[i] = saved + h;
            const double fp = joint_loss(state).total;
            param.raw()[i] = saved - h;
            const double fm = joint_loss(state).total;
            param.raw()[i] = saved;
            const double fd = (fp - fm) / (2.0 * h);
            worst = std::max(worst, std::abs(grad.raw()[i] - fd) /
                                        std::max(std::abs(fd), 1e-4));
        }
    };
    for (std::size_t k = 0; k < state.ae.encoder.num_layers(); ++k) {
        fd_check(state.ae.encoder.weights[k], g.encoder_weight_grads[k]);
        fd_check(state.ae.encoder.biases[k], g.encoder_bias_grads[k]);
    }
    for (std::size_t k = 0; k < state.ae.decoder.num_layers(); ++k) {
        fd_check(state.ae.decoder.weights[k], g.decoder_weight_grads[k]);
        fd_check(state.ae.decoder.biases[k], g.decoder_bias_grads[k]);
    }
    for (std::size_t i = 0; i < state.xi.slices.size(); ++i)
        fd_check(state.xi.slices[i], g.xi_grads[i]);
    detail = "worst rel deviation " + fmt(worst);
    return worst < 1e-5;
}

// ---- criterion 2: SINDy recovery of diag(-1,-2) ---------------------------

Matrix decay_trajectory() {
    const double dt = 0.01;
    Matrix z(201, 2);
    for (std::size_t n = 0; n <= 200; ++n) {
        const double t = dt * static_cast<double>(n);
        z(n, 0) = std::exp(-t);
        z(n, 1) = std::exp(-2.0 * t);
    }
    return z;
}

bool check_sindy_recovery(std::string& detail) {
    const SindyLibrary lib{2, false};
    const double dt = 0.01;
    const Matrix z = decay_trajectory();

    const Matrix ls = least_squares_fit(make_trajectory(z, dt), lib);
    const double ls_err = std::max(
        std::max(std::abs(ls(0, 0) + 1.0), std::abs(ls(1, 1) + 2.0)),
        std::max(std::abs(ls(0, 1)), std::abs(ls(1, 0))));
    if (ls_err >= 1e-3) {
        detail = "least-squares deviation " + fmt(ls_err);
        return false;
    }

    // joint training on the same data, embedded in a 4d ambient space via an
    // orthonormal map used to initialize a single-layer autoencoder
    Matrix b(4, 2);  // orthonormal columns
    b(0, 0) = b(1, 0) = b(2, 0) = b(3, 0) = 0.5;
    b(0, 1) = b(2, 1) = 0.5;
    b(1, 1) = b(3, 1) = -0.5;

    TrainingState state;
    state.grid = make_grid(4, 200, 0.0, 1.0, 2.0);
    state.lib = lib;
    state.config.sindy_weight = 0.25;
    state.config.learning_rate = 1e-4;
    state.ae.latent_dim = 2;
    state.ae.encoder.layer_sizes = {4, 2};
    state.ae.encoder.weights.push_back(transpose(b));
    state.ae.encoder.biases.push_back(Matrix(1, 2));
    state.ae.decoder.layer_sizes = {2, 4};
    state.ae.decoder.weights.push_back(b);
    state.ae.decoder.biases.push_back(Matrix(1, 4));

    SnapshotMatrix snap;
    snap.grid = state.grid;
    snap.u = matmul_nt(z, b);  // z * b^T
    state.u_all = snap.u;
    state.dataset.push_back(std::move(snap));
    state.dataset_params.push_back(ParameterVector{{1.0, 1.0}, {"a", "w"}});
    state.xi.slices.push_back(
        least_squares_fit(make_trajectory(z, state.grid.dt), lib));

    // Adam pack order must mirror the trainer: encoder, decoder, Xi
    std::vector<const Matrix*> pack{
        &state.ae.encoder.weights[0], &state.ae.encoder.biases[0],
        &state.ae.decoder.weights[0], &state.ae.decoder.biases[0],
        &state.xi.slices[0]};
    state.adam = make_adam_state(pack, state.config.learning_rate);

    for (int e = 0; e < 2000; ++e) train_epoch(state);

    const Matrix& xi = state.xi.slices[0];
    const double joint_err = std::max(
        std::max(std::abs(xi(0, 0) + 1.0), std::abs(xi(1, 1) + 2.0)),
        std::max(std::abs(xi(0, 1)), std::abs(xi(1, 0))));
    detail = "least-squares deviation " + fmt(ls_err) + ", joint deviation " +
             fmt(joint_err);
    return joint_err < 5e-2;
}

// ---- criterion 3: GP exactness with noise 1e-8 ----------------------------

bool check_gp_exactness(std::string& detail) {
    Matrix x(5, 1);
    std::vector<double> y;
    for (std::size_t i = 0; i < 5; ++i) {
        x(i, 0) = 0.25 * static_cast<double>(i);
        y.push_back(3.0 + std::sin(2.0 * x(i, 0)));
    }
    const RBFKernelParams kp{1.0, {0.4}, 1e-8};
    const GPModel m = fit_fixed(x, y, kp);

    double worst_mean = 0.0, worst_std = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        auto [mean, sd] = predict(m, ParameterVector{{x(i, 0)}, {}});
        worst_mean = std::max(worst_mean, std::abs(mean - y[i]));
        worst_std = std::max(worst_std, sd / m.target_std);
    }
    auto [far_mean, far_sd] = predict(m, ParameterVector{{1e3}, {}});
    (void)far_mean;
    const double prior_sd = std::sqrt(kp.signal_variance + kp.noise_variance);
    const double reversion = std::abs(far_sd / m.target_std - prior_sd) / prior_sd;

    detail = "worst |mean err| " + fmt(worst_mean) + ", worst std " + fmt(worst_std) +
             ", prior reversion " + fmt(reversion);
    return worst_mean < 1e-3 && worst_std < 1e-2 && reversion < 0.01;
}

// ---- criterion 4: forward Euler first order -------------------------------

bool check_euler_order(std::string& detail) {
    const SindyLibrary lib{1, false};
    const Matrix xi(1, 1, -1.0);
    const double exact = std::exp(-1.0);
    const std::size_t n = 100;
    const double e1 =
        std::abs(integrate_latent(xi, {1.0}, n, 1.0 / n, lib)(n, 0) - exact);
    const double e2 =
        std::abs(integrate_latent(xi, {1.0}, 2 * n, 0.5 / n, lib)(2 * n, 0) - exact);
    const double ratio = e1 / e2;
    detail = "error ratio " + fmt(ratio);
    return ratio > 1.8 && ratio < 2.2;
}

// ---- criterion 5: Eq. 5 metric --------------------------------------------

bool check_metric(std::string& detail) {
    Matrix u(3, 4);
    for (std::size_t i = 0; i < u.size(); ++i)
        u.raw()[i] = 0.1 * static_cast<double>(i + 1);
    const double ident = max_relative_error(u, u);
    const double homog = max_relative_error(u, scale(u, 1.1));
    detail = "identity " + fmt(ident) + ", 1.1x case " + fmt(homog);
    return ident == 0.0 && std::abs(homog - 0.1) < 1e-12;
}

// ---- criterion 6: Eq. 4 acquisition ---------------------------------------

bool check_acquisition(std::string& detail) {
    // hand-constructed variance fields [[1,3],[2,0]] vs all zeros
    if (argmax_variance({3.0, 0.0}) != 0) {
        detail = "argmax on hand fields";
        return false;
    }
    if (argmax_variance({2.0, 2.0, 1.0}) != 0 || argmax_variance({1.0, 2.0, 2.0}) != 1) {
        detail = "tie-break";
        return false;
    }

    // real acquisition on a small grid: std at the acquired point must drop
    // after the GP refit for every non-degenerate coefficient
    const SpaceTimeGrid st = make_grid(16, 40, -3.0, 3.0, 1.0);
    const double nu = 0.02;
    ParameterGrid grid = make_parameter_grid({{0.7, 0.8, 0.9}, {0.9, 1.0, 1.1}},
                                             {"a", "w"});
    TrainerConfig cfg;
    cfg.max_epochs = 100;
    cfg.greedy_interval = 50;
    cfg.learning_rate = 1e-3;
    cfg.n_samples = 5;
    cfg.fom_budget = 1;
    cfg.seed = 13;
    cfg.latent_dim = 2;
    cfg.encoder_hidden = {8};
    const FomSolver fom = [&](const ParameterVector& mu) { return solve(mu, st, nu); };
    TrainingState state = init_training(cfg, grid_corners(grid), grid, st, fom);
    for (int e = 0; e < 50; ++e) train_epoch(state);

    state.surrogate = fit_all(state.xi, state.dataset_params, cfg.seed);
    const GPCoefficientSurrogate before = state.surrogate;
    greedy_acquire(state, grid, fom);
    const ParameterVector acquired = state.acquisition_log.back().mu;
    const GPCoefficientSurrogate after =
        fit_all(state.xi, state.dataset_params, cfg.seed);

    std::size_t checked = 0;
    for (std::size_t j = 0; j < before.latent_dim; ++j)
        for (std::size_t k = 0; k < before.num_terms; ++k) {
            if (before.model(j, k).degenerate || after.model(j, k).degenerate) continue;
            ++checked;
            const double sd_b = predict(before.model(j, k), acquired).second;
            const double sd_a = predict(after.model(j, k), acquired).second;
            if (!(sd_a < sd_b)) {
                detail = "std did not drop for coefficient (" + std::to_string(j) +
                         "," + std::to_string(k) + ")";
                return false;
            }
        }
    detail = "argmax + tie-break ok, std dropped for " + std::to_string(checked) +
             " non-degenerate coefficients";
    return checked > 0;
}

// ---- criteria 7/8/9: desk run ---------------------------------------------

struct DeskResult {
    TrainingState state;
    SpaceTimeGrid st;
    double seconds = 0.0;
};

RunConfig desk_config() {
    RunConfig cfg;
    cfg.fom = FomConfig{128, 200, -3.0, 3.0, 1.0, 0.02};
    cfg.pgrid.names = {"a", "w"};
    cfg.pgrid.min = {0.7, 0.9};
    cfg.pgrid.max = {0.9, 1.1};
    cfg.pgrid.count = {11, 11};
    cfg.trainer.max_epochs = 60000;
    cfg.trainer.greedy_interval = 8000;  // 6 acquisitions by epoch 48000
    cfg.trainer.sindy_weight = 0.25;
    cfg.trainer.learning_rate = 1e-4;
    cfg.trainer.n_samples = 20;
    cfg.trainer.fom_budget = 6;
    cfg.trainer.latent_dim = 3;
    cfg.trainer.encoder_hidden = {32};
    cfg.trainer.seed = 2023;
    cfg.seed = 2023;
    return cfg;
}

DeskResult run_desk() {
    const RunConfig cfg = desk_config();
    DeskResult r;
    r.st = space_time_grid(cfg.fom);
    ParameterGrid grid = parameter_grid(cfg.pgrid);
    const FomSolver fom = [&](const ParameterVector& mu) {
        return solve(mu, r.st, cfg.fom.viscosity);
    };
    const double t0 = now_seconds();
    r.state = run_training(cfg.trainer, grid_corners(grid), grid, r.st, fom);
    r.seconds = now_seconds() - t0;
    return r;
}

// regression bound pinned from the first converged run (measured 6.3% worst
// max relative error over the 11x11 grid; spec allows up to 10%)
constexpr double kDeskErrorBound = 0.08;

bool check_desk_run(const DeskResult& desk, std::string& detail) {
    const RunConfig cfg = desk_config();
    if (desk.state.dataset.size() != 10) {
        detail = "dataset size " + std::to_string(desk.state.dataset.size());
        return false;
    }
    const ParameterGrid grid = parameter_grid(cfg.pgrid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.num_points(); ++i) {
        const SnapshotMatrix truth = solve(grid.points[i], desk.st, cfg.fom.viscosity);
        const ROMPrediction pred =
            rom_predict(desk.state.ae, desk.state.surrogate, grid.points[i], desk.st,
                        desk.state.lib, cfg.trainer.n_samples, 1000 + i);
        worst = std::max(worst, max_relative_error(truth.u, pred.mean));
    }
    detail = "worst max relative error " + fmt(worst * 100.0) + "% over 11x11, " +
             std::to_string(desk.state.dataset.size()) + " snapshots, training " +
             fmt(desk.seconds) + " s";
    return worst <= kDeskErrorBound;
}

bool check_speedup(const DeskResult& desk, std::string& detail) {
    const RunConfig cfg = desk_config();
    const ParameterVector mu{{0.8, 1.0}, {"a", "w"}};
    double fom_total = 0.0, rom_total = 0.0;
    for (int run = 0; run < 20; ++run) {
        double t0 = now_seconds();
        const SnapshotMatrix truth = solve(mu, desk.st, cfg.fom.viscosity);
        fom_total += now_seconds() - t0;
        (void)truth;
        t0 = now_seconds();
        const ROMPrediction pred =
            rom_predict(desk.state.ae, desk.state.surrogate, mu, desk.st,
                        desk.state.lib, 1, 42 + run);
        rom_total += now_seconds() - t0;
        (void)pred;
    }
    const double speedup = fom_total / rom_total;
    detail = "mean FOM " + fmt(fom_total / 20.0 * 1e3) + " ms, mean ROM " +
             fmt(rom_total / 20.0 * 1e3) + " ms, speed-up " + fmt(speedup) + "x";
    return speedup >= 100.0;
}

bool check_determinism(const DeskResult& a, const DeskResult& b, std::string& detail) {
    if (a.state.loss_history.size() != b.state.loss_history.size()) {
        detail = "loss history lengths differ";
        return false;
    }
    if (a.state.loss_history.back().total != b.state.loss_history.back().total ||
        a.state.loss_history.back().l_ae != b.state.loss_history.back().l_ae ||
        a.state.loss_history.back().l_sindy != b.state.loss_history.back().l_sindy) {
        detail = "final losses differ";
        return false;
    }
    if (a.state.acquisition_log.size() != b.state.acquisition_log.size()) {
        detail = "acquisition counts differ";
        return false;
    }
    for (std::size_t i = 0; i < a.state.acquisition_log.size(); ++i) {
        const auto& x = a.state.acquisition_log[i];
        const auto& y = b.state.acquisition_log[i];
        if (x.epoch != y.epoch || !(x.mu == y.mu) || x.max_std != y.max_std) {
            detail = "acquisition " + std::to_string(i) + " differs";
            return false;
        }
    }
    detail = "acquisition log and final loss bit-identical across two runs";
    return true;
}

// ---- supplementary: CLI exit codes ----------------------------------------

int run_cli(const std::string& cli, const std::string& args) {
    const int rc = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool check_cli(const std::string& cli, std::string& detail) {
    const fs::path dir =
        fs::temp_directory_path() / ("larom_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string bad_cfg = (dir / "bad.json").string();
    {
        std::ofstream out(bad_cfg);
        out << "{not json";
    }
    const int bad_config_rc = run_cli(cli, "train --config " + bad_cfg);
    const int missing_ckpt_rc =
        run_cli(cli, "predict --checkpoint " + (dir / "none.json").string() +
                         " --mu 0.8,1.0 --out " + (dir / "p").string());
    std::error_code ec;
    fs::remove_all(dir, ec);
    detail = "bad config -> " + std::to_string(bad_config_rc) +
             ", missing checkpoint -> " + std::to_string(missing_ckpt_rc);
    return bad_config_rc == 2 && missing_ckpt_rc == 4;
}

}  // namespace

int main(int argc, char** argv) {
    std::string detail;
    double t0;

    t0 = now_seconds();
    bool ok = check_gradients(detail);
    report(1, "joint-loss gradients vs finite differences",
           ok && now_seconds() - t0 < 10.0, detail + ", " + fmt(now_seconds() - t0) + " s");

    t0 = now_seconds();
    ok = check_sindy_recovery(detail);
    report(2, "SINDy recovery of diag(-1,-2)", ok && now_seconds() - t0 < 60.0,
           detail + ", " + fmt(now_seconds() - t0) + " s");

    t0 = now_seconds();
    ok = check_gp_exactness(detail);
    report(3, "GP exactness and prior reversion", ok && now_seconds() - t0 < 5.0,
           detail);

    t0 = now_seconds();
    ok = check_euler_order(detail);
    report(4, "forward Euler first-order convergence", ok && now_seconds() - t0 < 1.0,
           detail);

    report(5, "max relative error metric", check_metric(detail), detail);
    report(6, "variance-argmax acquisition", check_acquisition(detail), detail);

    const DeskResult desk = run_desk();
    report(7, "end-to-end desk run", check_desk_run(desk, detail), detail);
    report(8, "ROM/FOM speed-up at desk scale", check_speedup(desk, detail), detail);

    const DeskResult desk2 = run_desk();
    report(9, "determinism of the desk run", check_determinism(desk, desk2, detail),
           detail);

    if (argc > 1) {
        ok = check_cli(argv[1], detail);
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " supplementary: CLI exit codes ("
                  << detail << ")" << std::endl;
        if (!ok) ++g_failures;
    }

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                  : std::to_string(g_failures) + " CRITERIA FAILED")
              << std::endl;
    return g_failures;
}
