#include "larom/sindy.hpp"

namespace larom {

Matrix estimate_time_derivative(const Matrix& z, double dt) {
    const std::size_t n = z.rows();
    if (n < 3) throw ShapeError("estimate_time_derivative: need at least 3 rows");
    if (!(dt > 0.0)) throw ConfigError("estimate_time_derivative: dt must be > 0");
    const double inv2dt = 1.0 / (2.0 * dt);
    Matrix d(n, z.cols());
    for (std::size_t j = 0; j < z.cols(); ++j) {
        d(0, j) = (-3.0 * z(0, j) + 4.0 * z(1, j) - z(2, j)) * inv2dt;
        for (std::size_t i = 1; i + 1 < n; ++i)
            d(i, j) = (z(i + 1, j) - z(i - 1, j)) * inv2dt;
        d(n - 1, j) = (3.0 * z(n - 1, j) - 4.0 * z(n - 2, j) + z(n - 3, j)) * inv2dt;
    }
    return d;
}

/// Adjoint of the stencil above: accumulates dL/dz from g = dL/dz_dot.
static void add_time_derivative_adjoint(const Matrix& g, double dt, Matrix& z_grad) {
    const std::size_t n = g.rows();
    const double inv2dt = 1.0 / (2.0 * dt);
    for (std::size_t j = 0; j < g.cols(); ++j) {
        z_grad(0, j) += -3.0 * g(0, j) * inv2dt;
        z_grad(1, j) += 4.0 * g(0, j) * inv2dt;
        z_grad(2, j) += -1.0 * g(0, j) * inv2dt;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            z_grad(i + 1, j) += g(i, j) * inv2dt;
            z_grad(i - 1, j) -= g(i, j) * inv2dt;
        }
        z_grad(n - 1, j) += 3.0 * g(n - 1, j) * inv2dt;
        z_grad(n - 2, j) += -4.0 * g(n - 1, j) * inv2dt;
        z_grad(n - 3, j) += 1.0 * g(n - 1, j) * inv2dt;
    }
}

LatentTrajectory make_trajectory(const Matrix& z, double dt) {
    LatentTrajectory t;
    t.z = z;
    t.z_dot = estimate_time_derivative(z, dt);
    t.dt = dt;
    return t;
}

std::vector<double> build_library_row(const SindyLibrary& lib, const std::vector<double>& z_row) {
    if (z_row.size() != lib.latent_dim)
        throw ShapeError("build_library_row: row length != latent dim");
    std::vector<double> out;
    out.reserve(lib.num_terms());
    if (lib.include_constant) out.push_back(1.0);
    out.insert(out.end(), z_row.begin(), z_row.end());
    return out;
}

Matrix build_library(const SindyLibrary& lib, const Matrix& z) {
    if (z.cols() != lib.latent_dim) throw ShapeError("build_library: z cols != latent dim");
    const std::size_t off = lib.include_constant ? 1 : 0;
    Matrix theta(z.rows(), lib.num_terms());
    for (std::size_t i = 0; i < z.rows(); ++i) {
        if (lib.include_constant) theta(i, 0) = 1.0;
        for (std::size_t j = 0; j < z.cols(); ++j) theta(i, off + j) = z(i, j);
    }
    return theta;
}

SindyResidual sindy_residual(const LatentTrajectory& traj, const Matrix& xi_slice,
                             const SindyLibrary& lib) {
    if (xi_slice.rows() != lib.latent_dim || xi_slice.cols() != lib.num_terms())
        throw ShapeError("sindy_residual: xi slice must be N_z x N_l");
    if (traj.z.cols() != lib.latent_dim) throw ShapeError("sindy_residual: z cols != latent dim");

    const Matrix theta = build_library(lib, traj.z);
    Matrix resid = sub(traj.z_dot, matmul_nt(theta, xi_slice));  // (N_t+1) x N_z
    const double m = static_cast<double>(resid.size());
    SindyResidual out;
    for (double v : resid.raw()) out.loss += v * v;
    out.loss /= m;

    // dL/dresid = 2 resid / m
    Matrix dr = scale(resid, 2.0 / m);
    out.xi_grad = scale(matmul_tn(dr, theta), -1.0);  // N_z x N_l
    // through the library columns (linear terms only contribute to z)
    Matrix dtheta = scale(matmul(dr, xi_slice), -1.0);  // (N_t+1) x N_l
    out.z_grad = Matrix(traj.z.rows(), traj.z.cols());
    const std::size_t off = lib.include_constant ? 1 : 0;
    for (std::size_t i = 0; i < out.z_grad.rows(); ++i)
        for (std::size_t j = 0; j < out.z_grad.cols(); ++j)
            out.z_grad(i, j) = dtheta(i, off + j);
    // through the finite-difference estimate of z_dot
    add_time_derivative_adjoint(dr, traj.dt, out.z_grad);
    return out;
}

Matrix least_squares_fit(const LatentTrajectory& traj, const SindyLibrary& lib) {
    const Matrix theta = build_library(lib, traj.z);
    if (theta.rows() < theta.cols())
        throw ShapeError("least_squares_fit: fewer rows than library terms");
    const Matrix gram = matmul_tn(theta, theta);  // N_l x N_l
    CholeskyFactor f;
    try {
        f = cholesky(gram, 1e-10);
    } catch (const NotPositiveDefiniteError&) {
        throw SingularityError("least_squares_fit: rank-deficient library matrix");
    }
    const Matrix rhs = matmul_tn(theta, traj.z_dot);  // N_l x N_z
    return transpose(solve_posdef(f, rhs));           // N_z x N_l
}

}  // namespace larom
