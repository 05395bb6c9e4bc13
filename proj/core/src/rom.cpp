#include "larom/rom.hpp"

#include <cmath>
#include <random>

namespace larom {

std::vector<Matrix> sample_coefficients(const GPCoefficientSurrogate& surrogate,
                                        const ParameterVector& mu_star, std::size_t n_samples,
                                        std::uint64_t seed) {
    if (!surrogate.fitted()) throw StateError("sample_coefficients: surrogate not fitted");
    if (n_samples < 1) throw ConfigError("sample_coefficients: n_samples must be >= 1");

    const std::size_t nz = surrogate.latent_dim;
    const std::size_t nl = surrogate.num_terms;
    Matrix means(nz, nl), stds(nz, nl);
    for (std::size_t j = 0; j < nz; ++j)
        for (std::size_t k = 0; k < nl; ++k) {
            auto [m, s] = predict(surrogate.model(j, k), mu_star);
            means(j, k) = m;
            stds(j, k) = s;
        }

    std::vector<Matrix> samples;
    samples.reserve(n_samples);
    if (n_samples == 1) {
        samples.push_back(means);
        return samples;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t d = 0; d < n_samples; ++d) {
        Matrix s = means;
        for (std::size_t j = 0; j < nz; ++j)
            for (std::size_t k = 0; k < nl; ++k)
                if (stds(j, k) > 0.0) s(j, k) += stds(j, k) * normal(rng);
        samples.push_back(std::move(s));
    }
    return samples;
}

Matrix integrate_latent(const Matrix& xi_slice, const std::vector<double>& z0,
                        std::size_t n_time, double dt, const SindyLibrary& lib) {
    if (z0.size() != lib.latent_dim) throw ShapeError("integrate_latent: z0 length != N_z");
    if (xi_slice.rows() != lib.latent_dim || xi_slice.cols() != lib.num_terms())
        throw ShapeError("integrate_latent: xi slice must be N_z x N_l");
    if (!(dt > 0.0)) throw ConfigError("integrate_latent: dt must be > 0");

    const std::size_t nz = lib.latent_dim;
    Matrix z(n_time + 1, nz);
    std::vector<double> cur = z0;
    for (std::size_t j = 0; j < nz; ++j) z(0, j) = cur[j];
    std::vector<double> next(nz);
    for (std::size_t n = 1; n <= n_time; ++n) {
        const auto theta = build_library_row(lib, cur);
        for (std::size_t j = 0; j < nz; ++j) {
            double dz = 0.0;
            for (std::size_t k = 0; k < theta.size(); ++k) dz += xi_slice(j, k) * theta[k];
            next[j] = cur[j] + dt * dz;
            if (!std::isfinite(next[j]))
                throw DivergenceError("integrate_latent: non-finite state at step " +
                                          std::to_string(n),
                                      n);
        }
        cur = next;
        for (std::size_t j = 0; j < nz; ++j) z(n, j) = cur[j];
    }
    return z;
}

std::vector<double> encode_initial_condition(const Autoencoder& ae,
                                             const std::vector<double>& u0) {
    if (u0.size() != ae.encoder.input_size())
        throw ShapeError("encode_initial_condition: u0 length != encoder input size");
    Matrix x(1, u0.size());
    for (std::size_t j = 0; j < u0.size(); ++j) x(0, j) = u0[j];
    const Matrix z = forward(ae.encoder, x);
    std::vector<double> z0(z.cols());
    for (std::size_t j = 0; j < z.cols(); ++j) z0[j] = z(0, j);
    return z0;
}

ROMPrediction rom_predict(const Autoencoder& ae, const GPCoefficientSurrogate& surrogate,
                          const ParameterVector& mu_star, const SpaceTimeGrid& grid,
                          const SindyLibrary& lib, std::size_t n_samples, std::uint64_t seed) {
    const auto u0 = initial_condition(mu_star, grid);
    const auto z0 = encode_initial_condition(ae, u0);
    const auto xi_samples = sample_coefficients(surrogate, mu_star, n_samples, seed);

    // fully degenerate posterior: every sample is bit-identical, so the
    // ensemble collapses to one trajectory with exactly zero variance
    bool all_same = true;
    for (std::size_t s = 1; s < xi_samples.size() && all_same; ++s)
        all_same = xi_samples[s].raw() == xi_samples[0].raw();
    if (all_same && xi_samples.size() > 1) {
        const Matrix z = integrate_latent(xi_samples[0], z0, grid.n_time, grid.dt, lib);
        ROMPrediction out;
        out.mu_star = mu_star;
        out.samples_used = xi_samples.size();
        out.mean = forward(ae.decoder, z);
        out.variance = Matrix(out.mean.rows(), out.mean.cols());
        return out;
    }

    std::vector<Matrix> decoded;
    decoded.reserve(n_samples);
    std::size_t diverged = 0;
    for (const Matrix& xi : xi_samples) {
        try {
            const Matrix z = integrate_latent(xi, z0, grid.n_time, grid.dt, lib);
            decoded.push_back(forward(ae.decoder, z));
        } catch (const NumericError&) {
            ++diverged;  // unstable sampled ODE: drop from the ensemble
        }
    }
    if (decoded.empty() || (n_samples >= 2 && decoded.size() < 2))
        throw DivergenceError("rom_predict: too few surviving samples (" +
                                  std::to_string(decoded.size()) + " of " +
                                  std::to_string(n_samples) + ")",
                              0);

    const std::size_t rows = decoded[0].rows();
    const std::size_t cols = decoded[0].cols();
    ROMPrediction out;
    out.mu_star = mu_star;
    out.samples_used = decoded.size();
    out.samples_diverged = diverged;
    out.mean = Matrix(rows, cols);
    out.variance = Matrix(rows, cols);
    const double inv_n = 1.0 / static_cast<double>(decoded.size());
    for (const Matrix& d : decoded)
        for (std::size_t i = 0; i < d.size(); ++i) out.mean.raw()[i] += d.raw()[i] * inv_n;
    if (decoded.size() > 1) {
        const double inv_nm1 = 1.0 / static_cast<double>(decoded.size() - 1);
        for (const Matrix& d : decoded)
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double r = d.raw()[i] - out.mean.raw()[i];
                out.variance.raw()[i] += r * r * inv_nm1;
            }
    }
    double vmax = 0.0;
    for (double v : out.variance.raw()) vmax = std::max(vmax, v);
    out.max_std = std::sqrt(vmax);
    return out;
}

double max_relative_error(const Matrix& u_true, const Matrix& u_pred_mean) {
    if (!u_true.same_shape(u_pred_mean)) throw ShapeError("max_relative_error: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < u_true.rows(); ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < u_true.cols(); ++j) {
            const double d = u_pred_mean(i, j) - u_true(i, j);
            num += d * d;
            den += u_true(i, j) * u_true(i, j);
        }
        if (den == 0.0)
            throw NumericError("max_relative_error: zero-norm reference row " +
                               std::to_string(i));
        worst = std::max(worst, std::sqrt(num / den));
    }
    return worst;
}

}  // namespace larom
