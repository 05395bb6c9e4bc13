#include "larom/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace larom {

double rbf_kernel(const std::vector<double>& x1, const std::vector<double>& x2,
                  const RBFKernelParams& params) {
    if (x1.size() != x2.size() || x1.size() != params.lengthscales.size())
        throw ShapeError("rbf_kernel: dimension mismatch");
    double q = 0.0;
    for (std::size_t d = 0; d < x1.size(); ++d) {
        const double r = (x1[d] - x2[d]) / params.lengthscales[d];
        q += r * r;
    }
    return params.signal_variance * std::exp(-0.5 * q);
}

namespace {

constexpr double kJitter = 1e-10;

Matrix kernel_matrix(const Matrix& x, const RBFKernelParams& p) {
    const std::size_t n = x.rows();
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double q = 0.0;
            for (std::size_t d = 0; d < x.cols(); ++d) {
                const double r = (x(i, d) - x(j, d)) / p.lengthscales[d];
                q += r * r;
            }
            const double v = p.signal_variance * std::exp(-0.5 * q);
            k(i, j) = v;
            k(j, i) = v;
        }
        k(i, i) += p.noise_variance;
    }
    return k;
}

struct LogBounds {
    double lo, hi;
};

// log-space box constraints: sf2, then one per lengthscale, then sn2
std::vector<LogBounds> hyper_bounds(std::size_t dim) {
    std::vector<LogBounds> b;
    b.push_back({std::log(1e-4), std::log(1e2)});
    for (std::size_t d = 0; d < dim; ++d) b.push_back({std::log(1e-2), std::log(1e2)});
    b.push_back({std::log(1e-8), std::log(1e-1)});
    return b;
}

RBFKernelParams unpack(const std::vector<double>& p, std::size_t dim) {
    RBFKernelParams k;
    k.signal_variance = std::exp(p[0]);
    k.lengthscales.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) k.lengthscales[d] = std::exp(p[1 + d]);
    k.noise_variance = std::exp(p[dim + 1]);
    return k;
}

// Log marginal likelihood and its gradient w.r.t. the log hyperparameters.
bool lml_and_grad(const Matrix& x, const Matrix& y, const std::vector<double>& p, double& lml,
                  std::vector<double>& grad) {
    const std::size_t n = x.rows();
    const std::size_t dim = x.cols();
    const RBFKernelParams kp = unpack(p, dim);
    const Matrix k = kernel_matrix(x, kp);
    CholeskyFactor f;
    try {
        f = cholesky(k, kJitter);
    } catch (const NotPositiveDefiniteError&) {
        return false;
    }
    const Matrix alpha = solve_posdef(f, y);
    double logdet = 0.0;
    for (std::size_t i = 0; i < n; ++i) logdet += std::log(f.lower(i, i));
    double fit_term = 0.0;
    for (std::size_t i = 0; i < n; ++i) fit_term += y(i, 0) * alpha(i, 0);
    lml = -0.5 * fit_term - logdet - 0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);

    // A = alpha alpha^T - K^-1 ; dLML/dtheta = 0.5 tr(A dK/dtheta)
    const Matrix kinv = solve_posdef(f, Matrix::identity(n));
    grad.assign(p.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double a = alpha(i, 0) * alpha(j, 0) - kinv(i, j);
            const double kse = k(i, j) - (i == j ? kp.noise_variance : 0.0);
            grad[0] += 0.5 * a * kse;  // d/dlog sf2
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = x(i, d) - x(j, d);
                grad[1 + d] += 0.5 * a * kse * (diff * diff) /
                               (kp.lengthscales[d] * kp.lengthscales[d]);
            }
            if (i == j) grad[dim + 1] += 0.5 * a * kp.noise_variance;
        }
    }
    return std::isfinite(lml);
}

}  // namespace

double log_marginal_likelihood(const Matrix& inputs, const Matrix& targets,
                               const RBFKernelParams& kernel) {
    const Matrix k = kernel_matrix(inputs, kernel);
    const CholeskyFactor f = cholesky(k, kJitter);
    const Matrix alpha = solve_posdef(f, targets);
    double logdet = 0.0;
    for (std::size_t i = 0; i < f.dim; ++i) logdet += std::log(f.lower(i, i));
    double fit_term = 0.0;
    for (std::size_t i = 0; i < f.dim; ++i) fit_term += targets(i, 0) * alpha(i, 0);
    return -0.5 * fit_term - logdet -
           0.5 * static_cast<double>(f.dim) * std::log(2.0 * M_PI);
}

namespace {

// Shared by fit/fit_fixed: input normalization, target standardization, and
// the constant-target degenerate path.
GPModel prepare_model(const Matrix& inputs, const std::vector<double>& targets) {
    const std::size_t n = inputs.rows();
    const std::size_t dim = inputs.cols();
    if (n != targets.size()) throw ShapeError("gp fit: inputs/targets length mismatch");
    if (n < 2) throw DegenerateDataError("gp fit: need at least 2 training points");

    bool any_distinct = false;
    for (std::size_t i = 1; i < n && !any_distinct; ++i)
        for (std::size_t d = 0; d < dim; ++d)
            if (inputs(i, d) != inputs(0, d)) any_distinct = true;
    if (!any_distinct) throw DegenerateDataError("gp fit: all training inputs identical");

    GPModel m;
    m.input_lo.resize(dim);
    m.input_hi.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        double lo = inputs(0, d), hi = inputs(0, d);
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, inputs(i, d));
            hi = std::max(hi, inputs(i, d));
        }
        m.input_lo[d] = lo;
        m.input_hi[d] = hi;
    }
    m.train_inputs = Matrix(n, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) {
            const double span = m.input_hi[d] - m.input_lo[d];
            m.train_inputs(i, d) =
                span > 0.0 ? (inputs(i, d) - m.input_lo[d]) / span : 0.0;
        }

    double mean = 0.0;
    for (double t : targets) mean += t;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double t : targets) var += (t - mean) * (t - mean);
    var /= static_cast<double>(n);
    m.target_mean = mean;
    m.target_std = std::sqrt(var);

    if (m.target_std < 1e-12) {
        m.degenerate = true;
        m.degenerate_value = mean;
        m.target_std = 1.0;
        m.fitted = true;
        return m;
    }

    m.train_targets = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        m.train_targets(i, 0) = (targets[i] - mean) / m.target_std;
    return m;
}

void finalize_model(GPModel& m) {
    const Matrix k = kernel_matrix(m.train_inputs, m.kernel);
    m.chol = cholesky(k, kJitter);
    m.alpha = solve_posdef(m.chol, m.train_targets);
    m.fitted = true;
}

}  // namespace

GPModel fit_fixed(const Matrix& inputs, const std::vector<double>& targets,
                  const RBFKernelParams& kernel) {
    GPModel m = prepare_model(inputs, targets);
    if (m.degenerate) return m;
    m.kernel = kernel;
    m.log_marginal = log_marginal_likelihood(m.train_inputs, m.train_targets, kernel);
    finalize_model(m);
    return m;
}

GPModel fit(const Matrix& inputs, const std::vector<double>& targets, std::uint64_t seed) {
    GPModel m = prepare_model(inputs, targets);
    if (m.degenerate) return m;
    const std::size_t dim = inputs.cols();

    // Multistart gradient ascent on the log marginal likelihood.
    const auto bounds = hyper_bounds(dim);
    const std::size_t np = bounds.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    constexpr int kRestarts = 5;
    constexpr int kIters = 200;
    constexpr double kStep = 0.05;

    std::vector<double> best_p;
    double best_lml = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < kRestarts; ++r) {
        std::vector<double> p(np);
        if (r == 0) {
            p[0] = std::log(1.0);
            for (std::size_t d = 0; d < dim; ++d) p[1 + d] = std::log(0.5);
            p[dim + 1] = std::log(1e-4);
        } else {
            p[0] = std::log(0.1) + unit(rng) * (std::log(10.0) - std::log(0.1));
            for (std::size_t d = 0; d < dim; ++d)
                p[1 + d] = std::log(0.1) + unit(rng) * (std::log(2.0) - std::log(0.1));
            p[dim + 1] = std::log(1e-6) + unit(rng) * (std::log(1e-2) - std::log(1e-6));
        }
        double lml;
        std::vector<double> grad;
        if (!lml_and_grad(m.train_inputs, m.train_targets, p, lml, grad)) continue;
        if (lml > best_lml) {
            best_lml = lml;
            best_p = p;
        }
        for (int it = 0; it < kIters; ++it) {
            double gmax = 0.0;
            for (double g : grad) gmax = std::max(gmax, std::abs(g));
            const double scale = gmax > 1.0 ? 1.0 / gmax : 1.0;
            for (std::size_t i = 0; i < np; ++i) {
                p[i] += kStep * scale * grad[i];
                p[i] = std::clamp(p[i], bounds[i].lo, bounds[i].hi);
            }
            if (!lml_and_grad(m.train_inputs, m.train_targets, p, lml, grad)) break;
            if (lml > best_lml) {
                best_lml = lml;
                best_p = p;
            }
        }
    }
    if (best_p.empty())
        throw NotPositiveDefiniteError("gp fit: all hyperparameter candidates failed");

    m.kernel = unpack(best_p, dim);
    m.log_marginal = best_lml;
    finalize_model(m);
    return m;
}

std::pair<double, double> predict(const GPModel& model, const ParameterVector& mu_star) {
    if (!model.fitted) throw StateError("gp predict: model not fitted");
    if (model.degenerate) return {model.degenerate_value, 0.0};
    const std::size_t dim = model.train_inputs.cols();
    if (mu_star.dim() != dim) throw ShapeError("gp predict: parameter dimension mismatch");

    std::vector<double> xs(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const double span = model.input_hi[d] - model.input_lo[d];
        xs[d] = span > 0.0 ? (mu_star.values[d] - model.input_lo[d]) / span : 0.0;
    }
    const std::size_t n = model.train_inputs.rows();
    Matrix ks(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> xi(dim);
        for (std::size_t d = 0; d < dim; ++d) xi[d] = model.train_inputs(i, d);
        ks(i, 0) = rbf_kernel(xs, xi, model.kernel);
    }
    double mean_std = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_std += ks(i, 0) * model.alpha(i, 0);
    const Matrix kinv_ks = solve_posdef(model.chol, ks);
    double reduction = 0.0;
    for (std::size_t i = 0; i < n; ++i) reduction += ks(i, 0) * kinv_ks(i, 0);
    double var = model.kernel.signal_variance + model.kernel.noise_variance - reduction;
    if (var < 0.0) var = 0.0;
    const double mean = model.target_mean + model.target_std * mean_std;
    const double std_dev = model.target_std * std::sqrt(var);
    return {mean, std_dev};
}

GPCoefficientSurrogate fit_all(const CoefficientTensor& xi,
                               const std::vector<ParameterVector>& params,
                               std::uint64_t seed) {
    if (xi.num_slices() != params.size())
        throw ShapeError("fit_all: slice count != parameter count");
    if (xi.num_slices() == 0) throw DegenerateDataError("fit_all: empty coefficient tensor");

    const std::size_t nz = xi.slices[0].rows();
    const std::size_t nl = xi.slices[0].cols();
    const std::size_t dim = params[0].dim();
    Matrix inputs(params.size(), dim);
    for (std::size_t i = 0; i < params.size(); ++i)
        for (std::size_t d = 0; d < dim; ++d) inputs(i, d) = params[i].values[d];

    GPCoefficientSurrogate s;
    s.latent_dim = nz;
    s.num_terms = nl;
    s.models.reserve(nz * nl);
    for (std::size_t j = 0; j < nz; ++j) {
        for (std::size_t k = 0; k < nl; ++k) {
            std::vector<double> targets(params.size());
            for (std::size_t i = 0; i < params.size(); ++i) targets[i] = xi.slices[i](j, k);
            try {
                s.models.push_back(fit(inputs, targets, seed + j * nl + k));
            } catch (const Error& e) {
                throw Error("fit_all: coefficient (" + std::to_string(j) + "," +
                            std::to_string(k) + "): " + e.what());
            }
        }
    }
    return s;
}

}  // namespace larom
