#include "larom/io.hpp"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace larom {

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.raw()}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.size()) throw IoError("checkpoint: matrix payload size mismatch");
    m.raw() = data;
    return m;
}

json mlp_to_json(const MLPParams& net) {
    json j;
    j["layer_sizes"] = net.layer_sizes;
    for (const auto& w : net.weights) j["weights"].push_back(matrix_to_json(w));
    for (const auto& b : net.biases) j["biases"].push_back(matrix_to_json(b));
    return j;
}

MLPParams mlp_from_json(const json& j) {
    MLPParams net;
    net.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    for (const auto& w : j.at("weights")) net.weights.push_back(matrix_from_json(w));
    for (const auto& b : j.at("biases")) net.biases.push_back(matrix_from_json(b));
    return net;
}

json gp_to_json(const GPModel& m) {
    json j;
    j["degenerate"] = m.degenerate;
    j["degenerate_value"] = m.degenerate_value;
    j["signal_variance"] = m.kernel.signal_variance;
    j["lengthscales"] = m.kernel.lengthscales;
    j["noise_variance"] = m.kernel.noise_variance;
    j["input_lo"] = m.input_lo;
    j["input_hi"] = m.input_hi;
    j["target_mean"] = m.target_mean;
    j["target_std"] = m.target_std;
    j["log_marginal"] = m.log_marginal;
    if (!m.degenerate) {
        j["train_inputs"] = matrix_to_json(m.train_inputs);
        j["train_targets"] = matrix_to_json(m.train_targets);
    }
    return j;
}

GPModel gp_from_json(const json& j) {
    GPModel m;
    m.degenerate = j.at("degenerate").get<bool>();
    m.degenerate_value = j.at("degenerate_value").get<double>();
    m.kernel.signal_variance = j.at("signal_variance").get<double>();
    m.kernel.lengthscales = j.at("lengthscales").get<std::vector<double>>();
    m.kernel.noise_variance = j.at("noise_variance").get<double>();
    m.input_lo = j.at("input_lo").get<std::vector<double>>();
    m.input_hi = j.at("input_hi").get<std::vector<double>>();
    m.target_mean = j.at("target_mean").get<double>();
    m.target_std = j.at("target_std").get<double>();
    m.log_marginal = j.at("log_marginal").get<double>();
    if (!m.degenerate) {
        m.train_inputs = matrix_from_json(j.at("train_inputs"));
        m.train_targets = matrix_from_json(j.at("train_targets"));
        // rebuild the cached factorization from the stored exact doubles
        Matrix k(m.train_inputs.rows(), m.train_inputs.rows());
        for (std::size_t a = 0; a < k.rows(); ++a)
            for (std::size_t b = 0; b < k.rows(); ++b) {
                std::vector<double> xa(m.train_inputs.cols()), xb(m.train_inputs.cols());
                for (std::size_t d = 0; d < m.train_inputs.cols(); ++d) {
                    xa[d] = m.train_inputs(a, d);
                    xb[d] = m.train_inputs(b, d);
                }
                k(a, b) = rbf_kernel(xa, xb, m.kernel);
            }
        for (std::size_t a = 0; a < k.rows(); ++a) k(a, a) += m.kernel.noise_variance;
        m.chol = cholesky(k, 1e-10);
        m.alpha = solve_posdef(m.chol, m.train_targets);
    }
    m.fitted = true;
    return m;
}

void append_u32(std::string& s, std::uint32_t v) {
    char buf[4];
    std::memcpy(buf, &v, 4);
    s.append(buf, 4);
}

void append_f64(std::string& s, double v) {
    char buf[8];
    std::memcpy(buf, &v, 8);
    s.append(buf, 8);
}

std::uint32_t read_u32(const std::string& s, std::size_t& off) {
    if (off + 4 > s.size()) throw IoError("snapshot: truncated header");
    std::uint32_t v;
    std::memcpy(&v, s.data() + off, 4);
    off += 4;
    return v;
}

double read_f64(const std::string& s, std::size_t& off) {
    if (off + 8 > s.size()) throw IoError("snapshot: truncated header");
    double v;
    std::memcpy(&v, s.data() + off, 8);
    off += 8;
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void atomic_write(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + tmp + " -> " + path + ": " + ec.message());
}

RunConfig load_config(const std::string& path) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    try {
        RunConfig cfg;
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.output_dir = j.value("output_dir", std::string{"out"});
        const json& f = j.at("fom");
        cfg.fom.n_space = f.at("n_space").get<std::size_t>();
        cfg.fom.n_time = f.at("n_time").get<std::size_t>();
        cfg.fom.x_min = f.at("x_min").get<double>();
        cfg.fom.x_max = f.at("x_max").get<double>();
        cfg.fom.t_max = f.at("t_max").get<double>();
        cfg.fom.viscosity = f.at("viscosity").get<double>();
        const json& g = j.at("parameter_grid");
        cfg.pgrid.names = g.at("names").get<std::vector<std::string>>();
        cfg.pgrid.min = g.at("min").get<std::vector<double>>();
        cfg.pgrid.max = g.at("max").get<std::vector<double>>();
        cfg.pgrid.count = g.at("count").get<std::vector<std::size_t>>();
        const json& t = j.at("trainer");
        cfg.trainer.max_epochs = t.at("max_epochs").get<std::size_t>();
        cfg.trainer.greedy_interval = t.at("greedy_interval").get<std::size_t>();
        cfg.trainer.sindy_weight = t.value("sindy_weight", 0.25);
        cfg.trainer.learning_rate = t.value("learning_rate", 1e-4);
        cfg.trainer.n_samples = t.value("n_samples", std::size_t{20});
        cfg.trainer.fom_budget = t.value("fom_budget", std::size_t{0});
        cfg.trainer.latent_dim = t.at("latent_dim").get<std::size_t>();
        cfg.trainer.encoder_hidden = t.at("encoder_hidden").get<std::vector<std::size_t>>();
        cfg.trainer.include_constant = t.value("include_constant", false);
        cfg.trainer.seed = cfg.seed;
        validate_config(cfg);
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError("config field error in " + path + ": " + e.what());
    }
}

void validate_config(const RunConfig& cfg) {
    if (cfg.pgrid.min.size() != cfg.pgrid.max.size() ||
        cfg.pgrid.min.size() != cfg.pgrid.count.size())
        throw ConfigError("parameter_grid: min/max/count lengths differ");
    if (cfg.pgrid.names.size() != cfg.pgrid.min.size())
        throw ConfigError("parameter_grid.names: length differs from min/max/count");
    for (std::size_t d = 0; d < cfg.pgrid.count.size(); ++d) {
        if (cfg.pgrid.count[d] < 2)
            throw ConfigError("parameter_grid.count: each dimension needs >= 2 points");
        if (!(cfg.pgrid.max[d] > cfg.pgrid.min[d]))
            throw ConfigError("parameter_grid.max: must exceed parameter_grid.min");
    }
    if (cfg.trainer.greedy_interval == 0 ||
        cfg.trainer.greedy_interval > cfg.trainer.max_epochs)
        throw ConfigError("trainer.greedy_interval: must be in [1, trainer.max_epochs]");
    if (cfg.trainer.latent_dim >= cfg.fom.n_space)
        throw ConfigError("trainer.latent_dim: must be < fom.n_space");
    if (cfg.fom.viscosity < 0.0) throw ConfigError("fom.viscosity: must be >= 0");

    // CFL bound at the grid corners (amplitude extremes dominate)
    const SpaceTimeGrid st = space_time_grid(cfg.fom);
    ParameterGrid pg = parameter_grid(cfg.pgrid);
    for (const auto& mu : grid_corners(pg)) {
        if (st.dt > stable_dt(mu, st, cfg.fom.viscosity))
            throw ConfigError("fom.n_time: dt violates the stability bound at corner "
                              "parameters; increase n_time");
    }
}

SpaceTimeGrid space_time_grid(const FomConfig& fom) {
    return make_grid(fom.n_space, fom.n_time, fom.x_min, fom.x_max, fom.t_max);
}

ParameterGrid parameter_grid(const GridConfig& cfg) {
    std::vector<std::vector<double>> breakpoints;
    for (std::size_t d = 0; d < cfg.count.size(); ++d) {
        std::vector<double> b(cfg.count[d]);
        for (std::size_t i = 0; i < cfg.count[d]; ++i)
            b[i] = cfg.min[d] + (cfg.max[d] - cfg.min[d]) * static_cast<double>(i) /
                                    static_cast<double>(cfg.count[d] - 1);
        breakpoints.push_back(std::move(b));
    }
    return make_parameter_grid(breakpoints, cfg.names);
}

void write_snapshot(const std::string& path, const SnapshotMatrix& snap) {
    std::string buf;
    buf.reserve(32 + snap.u.size() * 8);
    buf.append("LSNP", 4);
    append_u32(buf, 1);  // version
    append_u32(buf, static_cast<std::uint32_t>(snap.grid.n_time));
    append_u32(buf, static_cast<std::uint32_t>(snap.grid.n_space));
    append_f64(buf, snap.grid.dt);
    append_f64(buf, snap.grid.dx);
    append_u32(buf, static_cast<std::uint32_t>(snap.mu.dim()));
    for (double v : snap.mu.values) append_f64(buf, v);
    for (double v : snap.u.raw()) append_f64(buf, v);
    atomic_write(path, buf);
}

SnapshotMatrix read_snapshot(const std::string& path) {
    const std::string buf = slurp(path);
    if (buf.size() < 4 || buf.compare(0, 4, "LSNP") != 0)
        throw IoError("snapshot: bad magic in " + path);
    std::size_t off = 4;
    const std::uint32_t version = read_u32(buf, off);
    if (version != 1) throw IoError("snapshot: unsupported version");
    SnapshotMatrix snap;
    snap.grid.n_time = read_u32(buf, off);
    snap.grid.n_space = read_u32(buf, off);
    snap.grid.dt = read_f64(buf, off);
    snap.grid.dx = read_f64(buf, off);
    snap.grid.t_max = snap.grid.dt * static_cast<double>(snap.grid.n_time);
    snap.grid.x_min = 0.0;
    snap.grid.x_max = snap.grid.dx * static_cast<double>(snap.grid.n_space);
    const std::uint32_t dim = read_u32(buf, off);
    for (std::uint32_t d = 0; d < dim; ++d) snap.mu.values.push_back(read_f64(buf, off));
    const std::size_t n = (snap.grid.n_time + 1) * snap.grid.n_space;
    if (buf.size() - off != n * 8) throw IoError("snapshot: payload length mismatch");
    snap.u = Matrix(snap.grid.n_time + 1, snap.grid.n_space);
    for (std::size_t i = 0; i < n; ++i) snap.u.raw()[i] = read_f64(buf, off);
    return snap;
}

Checkpoint make_checkpoint(const RunConfig& cfg, const TrainingState& state,
                           const ParameterGrid& grid) {
    Checkpoint c;
    c.fom = cfg.fom;
    c.pgrid = cfg.pgrid;
    c.trainer = state.config;
    c.ae = state.ae;
    c.xi = state.xi;
    c.lib = state.lib;
    c.surrogate = state.surrogate;
    c.dataset_params = state.dataset_params;
    c.sampled = std::vector<bool>(grid.sampled.begin(), grid.sampled.end());
    c.fom_seconds = state.fom_seconds;
    c.seed = cfg.seed;
    return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
    json j;
    j["version"] = 1;
    j["seed"] = c.seed;
    j["fom"] = {{"n_space", c.fom.n_space}, {"n_time", c.fom.n_time},
                {"x_min", c.fom.x_min},     {"x_max", c.fom.x_max},
                {"t_max", c.fom.t_max},     {"viscosity", c.fom.viscosity}};
    j["parameter_grid"] = {{"names", c.pgrid.names},
                           {"min", c.pgrid.min},
                           {"max", c.pgrid.max},
                           {"count", c.pgrid.count}};
    j["trainer"] = {{"max_epochs", c.trainer.max_epochs},
                    {"greedy_interval", c.trainer.greedy_interval},
                    {"sindy_weight", c.trainer.sindy_weight},
                    {"learning_rate", c.trainer.learning_rate},
                    {"n_samples", c.trainer.n_samples},
                    {"fom_budget", c.trainer.fom_budget},
                    {"latent_dim", c.trainer.latent_dim},
                    {"encoder_hidden", c.trainer.encoder_hidden},
                    {"include_constant", c.trainer.include_constant}};
    j["encoder"] = mlp_to_json(c.ae.encoder);
    j["decoder"] = mlp_to_json(c.ae.decoder);
    j["latent_dim"] = c.ae.latent_dim;
    for (const auto& s : c.xi.slices) j["xi"].push_back(matrix_to_json(s));
    j["library"] = {{"latent_dim", c.lib.latent_dim},
                    {"include_constant", c.lib.include_constant}};
    j["gp"] = {{"latent_dim", c.surrogate.latent_dim},
               {"num_terms", c.surrogate.num_terms}};
    for (const auto& m : c.surrogate.models) j["gp"]["models"].push_back(gp_to_json(m));
    for (const auto& p : c.dataset_params) j["dataset_params"].push_back(p.values);
    j["sampled"] = c.sampled;
    j["fom_seconds"] = c.fom_seconds;
    atomic_write(path, j.dump());
}

Checkpoint load_checkpoint(const std::string& path) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw IoError("checkpoint parse error in " + path + ": " + e.what());
    }
    try {
        Checkpoint c;
        c.seed = j.at("seed").get<std::uint64_t>();
        const json& f = j.at("fom");
        c.fom = {f.at("n_space").get<std::size_t>(), f.at("n_time").get<std::size_t>(),
                 f.at("x_min").get<double>(),        f.at("x_max").get<double>(),
                 f.at("t_max").get<double>(),        f.at("viscosity").get<double>()};
        const json& g = j.at("parameter_grid");
        c.pgrid.names = g.at("names").get<std::vector<std::string>>();
        c.pgrid.min = g.at("min").get<std::vector<double>>();
        c.pgrid.max = g.at("max").get<std::vector<double>>();
        c.pgrid.count = g.at("count").get<std::vector<std::size_t>>();
        const json& t = j.at("trainer");
        c.trainer.max_epochs = t.at("max_epochs").get<std::size_t>();
        c.trainer.greedy_interval = t.at("greedy_interval").get<std::size_t>();
        c.trainer.sindy_weight = t.at("sindy_weight").get<double>();
        c.trainer.learning_rate = t.at("learning_rate").get<double>();
        c.trainer.n_samples = t.at("n_samples").get<std::size_t>();
        c.trainer.fom_budget = t.at("fom_budget").get<std::size_t>();
        c.trainer.latent_dim = t.at("latent_dim").get<std::size_t>();
        c.trainer.encoder_hidden = t.at("encoder_hidden").get<std::vector<std::size_t>>();
        c.trainer.include_constant = t.at("include_constant").get<bool>();
        c.trainer.seed = c.seed;
        c.ae.encoder = mlp_from_json(j.at("encoder"));
        c.ae.decoder = mlp_from_json(j.at("decoder"));
        c.ae.latent_dim = j.at("latent_dim").get<std::size_t>();
        for (const auto& s : j.at("xi")) c.xi.slices.push_back(matrix_from_json(s));
        c.lib.latent_dim = j.at("library").at("latent_dim").get<std::size_t>();
        c.lib.include_constant = j.at("library").at("include_constant").get<bool>();
        c.surrogate.latent_dim = j.at("gp").at("latent_dim").get<std::size_t>();
        c.surrogate.num_terms = j.at("gp").at("num_terms").get<std::size_t>();
        for (const auto& m : j.at("gp").at("models"))
            c.surrogate.models.push_back(gp_from_json(m));
        for (const auto& p : j.at("dataset_params")) {
            ParameterVector mu;
            mu.values = p.get<std::vector<double>>();
            mu.names = c.pgrid.names;
            c.dataset_params.push_back(std::move(mu));
        }
        c.sampled = j.at("sampled").get<std::vector<bool>>();
        c.fom_seconds = j.at("fom_seconds").get<std::vector<double>>();
        return c;
    } catch (const json::exception& e) {
        throw IoError("checkpoint field error in " + path + ": " + e.what());
    }
}

// ---- commands ------------------------------------------------------------

void cmd_generate(const RunConfig& cfg) {
    validate_config(cfg);
    fs::create_directories(cfg.output_dir);
    const SpaceTimeGrid st = space_time_grid(cfg.fom);
    ParameterGrid pg = parameter_grid(cfg.pgrid);

    json manifest;
    double total = 0.0;
    const auto corners = grid_corners(pg);
    for (std::size_t i = 0; i < corners.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const SnapshotMatrix snap = solve(corners[i], st, cfg.fom.viscosity);
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        total += secs;
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.snap", i);
        const std::string file = (fs::path(cfg.output_dir) / name).string();
        write_snapshot(file, snap);
        manifest["snapshots"].push_back(
            {{"file", name}, {"mu", corners[i].values}, {"runtime_seconds", secs}});
    }
    manifest["total_seconds"] = total;
    atomic_write((fs::path(cfg.output_dir) / "manifest.json").string(), manifest.dump(2));
    std::cout << "wrote " << corners.size() << " snapshots to " << cfg.output_dir << "\n";
}

void cmd_train(const RunConfig& cfg) {
    validate_config(cfg);
    fs::create_directories(cfg.output_dir);
    const SpaceTimeGrid st = space_time_grid(cfg.fom);
    ParameterGrid pg = parameter_grid(cfg.pgrid);
    const FomSolver fom = [&](const ParameterVector& mu) {
        return solve(mu, st, cfg.fom.viscosity);
    };
    const std::string ckpt_path = (fs::path(cfg.output_dir) / "checkpoint.json").string();

    const auto write_outputs = [&](const TrainingState& state) {
        save_checkpoint(ckpt_path, make_checkpoint(cfg, state, pg));
        std::ostringstream loss;
        loss << "epoch,l_ae,l_sindy,total\n";
        loss.precision(17);
        for (std::size_t e = 0; e < state.loss_history.size(); ++e)
            loss << (e + 1) << ',' << state.loss_history[e].l_ae << ','
                 << state.loss_history[e].l_sindy << ',' << state.loss_history[e].total
                 << '\n';
        atomic_write((fs::path(cfg.output_dir) / "loss.csv").string(), loss.str());
        std::ostringstream acq;
        acq << "epoch";
        for (const auto& n : cfg.pgrid.names) acq << ',' << n;
        acq << ",max_std,fom_seconds\n";
        acq.precision(17);
        for (const auto& a : state.acquisition_log) {
            acq << a.epoch;
            for (double v : a.mu.values) acq << ',' << v;
            acq << ',' << a.max_std << ',' << a.fom_seconds << '\n';
        }
        atomic_write((fs::path(cfg.output_dir) / "acquisitions.csv").string(), acq.str());
    };

    TrainingState state = run_training(cfg.trainer, grid_corners(pg), pg, st, fom,
                                       /*on_error=*/write_outputs);
    write_outputs(state);
    std::cout << "training complete: " << state.epoch << " epochs, "
              << state.dataset.size() << " snapshots, final loss "
              << state.loss_history.back().total << "\n";
}

EvalSummary cmd_evaluate(const RunConfig& cfg, const std::string& checkpoint_path) {
    const Checkpoint c = load_checkpoint(checkpoint_path);
    fs::create_directories(cfg.output_dir);
    const SpaceTimeGrid st = space_time_grid(c.fom);
    ParameterGrid pg = parameter_grid(c.pgrid);
    if (c.sampled.size() == pg.num_points())
        pg.sampled.assign(c.sampled.begin(), c.sampled.end());

    EvalSummary sum;
    std::ostringstream csv;
    csv << "p1,p2,max_rel_error,max_std,sampled\n";
    csv.precision(17);
    double fom_total = 0.0, rom_total = 0.0;
    for (std::size_t i = 0; i < pg.num_points(); ++i) {
        const ParameterVector& mu = pg.points[i];
        const auto f0 = std::chrono::steady_clock::now();
        const SnapshotMatrix truth = solve(mu, st, c.fom.viscosity);
        const auto f1 = std::chrono::steady_clock::now();
        fom_total += std::chrono::duration<double>(f1 - f0).count();
        const auto r0 = std::chrono::steady_clock::now();
        const ROMPrediction pred = rom_predict(c.ae, c.surrogate, mu, st, c.lib,
                                               c.trainer.n_samples, mix_seed(c.seed, i));
        const auto r1 = std::chrono::steady_clock::now();
        rom_total += std::chrono::duration<double>(r1 - r0).count();
        const double err = max_relative_error(truth.u, pred.mean);
        sum.worst_error = std::max(sum.worst_error, err);
        csv << mu.values[0] << ',' << (mu.dim() > 1 ? mu.values[1] : 0.0) << ',' << err
            << ',' << pred.max_std << ',' << (pg.sampled[i] ? 1 : 0) << '\n';
        ++sum.rows;
    }
    atomic_write((fs::path(cfg.output_dir) / "heatmap.csv").string(), csv.str());
    sum.mean_fom_seconds = fom_total / static_cast<double>(sum.rows);
    sum.mean_rom_seconds = rom_total / static_cast<double>(sum.rows);
    sum.speedup = sum.mean_fom_seconds / sum.mean_rom_seconds;
    std::cout << "worst max relative error: " << sum.worst_error * 100.0 << "%\n"
              << "mean speed-up (FOM/ROM): " << sum.speedup << "x\n";
    return sum;
}

void cmd_predict(const std::string& checkpoint_path, const ParameterVector& mu,
                 std::size_t n_samples, std::uint64_t seed, const std::string& out_dir) {
    const Checkpoint c = load_checkpoint(checkpoint_path);
    if (mu.dim() != c.pgrid.min.size())
        throw ConfigError("--mu: expected " + std::to_string(c.pgrid.min.size()) +
                          " comma-separated values");
    for (std::size_t d = 0; d < mu.dim(); ++d)
        if (mu.values[d] < c.pgrid.min[d] || mu.values[d] > c.pgrid.max[d])
            std::cerr << "warning: mu outside the training parameter box "
                         "(extrapolation)\n";
    fs::create_directories(out_dir);
    const SpaceTimeGrid st = space_time_grid(c.fom);

    const auto t0 = std::chrono::steady_clock::now();
    const ROMPrediction pred =
        rom_predict(c.ae, c.surrogate, mu, st, c.lib, n_samples, seed);
    const auto t1 = std::chrono::steady_clock::now();

    SnapshotMatrix mean_snap{pred.mean, mu, st};
    SnapshotMatrix var_snap{pred.variance, mu, st};
    write_snapshot((fs::path(out_dir) / "mean.snap").string(), mean_snap);
    write_snapshot((fs::path(out_dir) / "variance.snap").string(), var_snap);
    json summary = {{"max_std", pred.max_std},
                    {"runtime_seconds", std::chrono::duration<double>(t1 - t0).count()},
                    {"samples_used", pred.samples_used},
                    {"samples_diverged", pred.samples_diverged},
                    {"mu", mu.values}};
    atomic_write((fs::path(out_dir) / "summary.json").string(), summary.dump(2));
    std::cout << "max predictive std: " << pred.max_std << "\n";
}

}  // namespace larom
