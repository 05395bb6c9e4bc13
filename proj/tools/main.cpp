// Command-line front end: generate / train / evaluate / predict.
//
// Exit codes: 0 success, 2 config error, 3 numeric divergence, 4 IO error.

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "larom/io.hpp"

namespace {

larom::ParameterVector parse_mu(const std::string& s) {
    larom::ParameterVector mu;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            mu.values.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw larom::ConfigError("--mu: cannot parse '" + tok + "' as a float");
        }
    }
    if (mu.values.empty()) throw larom::ConfigError("--mu: no values given");
    return mu;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent-dynamics reduced-order modeling with GP-driven greedy sampling"};
    app.require_subcommand(1);

    std::string config_path, checkpoint_path, mu_str, out_dir;
    std::size_t n_samples = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto* gen = app.add_subcommand("generate", "Run the FOM at the corner parameters");
    gen->add_option("--config", config_path, "JSON run configuration")->required();

    auto* train = app.add_subcommand("train", "Joint training with greedy FOM acquisition");
    train->add_option("--config", config_path, "JSON run configuration")->required();

    auto* eval = app.add_subcommand("evaluate", "FOM-vs-ROM error/uncertainty heatmap");
    eval->add_option("--config", config_path, "JSON run configuration")->required();
    eval->add_option("--checkpoint", checkpoint_path, "Trained checkpoint")->required();

    auto* pred = app.add_subcommand("predict", "ROM prediction at one parameter");
    pred->add_option("--checkpoint", checkpoint_path, "Trained checkpoint")->required();
    pred->add_option("--mu", mu_str, "Comma-separated parameter values")->required();
    pred->add_option("--samples", n_samples, "GP sample count (1 = predictive mean)");
    pred->add_option("--seed", seed, "Sampling seed")->each([&](const std::string&) {
        seed_set = true;
    });
    pred->add_option("--out", out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            larom::cmd_generate(larom::load_config(config_path));
        } else if (train->parsed()) {
            larom::cmd_train(larom::load_config(config_path));
        } else if (eval->parsed()) {
            larom::cmd_evaluate(larom::load_config(config_path), checkpoint_path);
        } else if (pred->parsed()) {
            if (!seed_set) seed = 0;
            larom::cmd_predict(checkpoint_path, parse_mu(mu_str), n_samples, seed, out_dir);
        }
    } catch (const larom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const larom::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const larom::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const larom::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
