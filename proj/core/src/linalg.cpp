#include "larom/linalg.hpp"

#include <cblas.h>

#include <cmath>
#include <string>

namespace larom {

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + ")");
    }
    Matrix c(a.rows(), b.cols());
    if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) return c;
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()),
                static_cast<int>(b.cols()), static_cast<int>(a.cols()), 1.0, a.data(),
                static_cast<int>(a.cols()), b.data(), static_cast<int>(b.cols()), 0.0,
                c.data(), static_cast<int>(c.cols()));
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw ShapeError("matmul_nt: inner dimensions differ");
    Matrix c(a.rows(), b.rows());
    if (a.rows() == 0 || b.rows() == 0 || a.cols() == 0) return c;
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, static_cast<int>(a.rows()),
                static_cast<int>(b.rows()), static_cast<int>(a.cols()), 1.0, a.data(),
                static_cast<int>(a.cols()), b.data(), static_cast<int>(b.cols()), 0.0,
                c.data(), static_cast<int>(c.cols()));
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw ShapeError("matmul_tn: inner dimensions differ");
    Matrix c(a.cols(), b.cols());
    if (a.cols() == 0 || b.cols() == 0 || a.rows() == 0) return c;
    cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, static_cast<int>(a.cols()),
                static_cast<int>(b.cols()), static_cast<int>(a.rows()), 1.0, a.data(),
                static_cast<int>(a.cols()), b.data(), static_cast<int>(b.cols()), 0.0,
                c.data(), static_cast<int>(c.cols()));
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeError("add: shape mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.raw()[i] += b.raw()[i];
    return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeError("sub: shape mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.raw()[i] -= b.raw()[i];
    return c;
}

Matrix scale(const Matrix& a, double s) {
    Matrix c = a;
    for (double& v : c.raw()) v *= s;
    return c;
}

namespace {

// Left-looking Cholesky; returns false on a non-positive pivot.
bool try_cholesky(const Matrix& a, double jitter, Matrix& lower) {
    const std::size_t n = a.rows();
    lower = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j) + jitter;
        for (std::size_t k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
        if (!(d > 0.0)) return false;
        lower(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            lower(i, j) = s / lower(j, j);
        }
    }
    return true;
}

}  // namespace

CholeskyFactor cholesky(const Matrix& a, double jitter) {
    if (a.rows() != a.cols()) throw ShapeError("cholesky: matrix must be square");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-10)
                throw ShapeError("cholesky: matrix not symmetric within 1e-10");

    constexpr double kMaxJitter = 1e-4;
    Matrix lower;
    double j = jitter;
    while (true) {
        if (try_cholesky(a, j, lower)) return CholeskyFactor{lower, a.rows()};
        if (jitter == 0.0) break;  // exact mode: no escalation
        j *= 10.0;
        if (j > kMaxJitter) break;
    }
    throw NotPositiveDefiniteError("cholesky: non-positive pivot (jitter up to " +
                                   std::to_string(j) + ")");
}

Matrix solve_posdef(const CholeskyFactor& f, const Matrix& b) {
    const std::size_t n = f.dim;
    if (b.rows() != n) throw ShapeError("solve_posdef: rhs rows != factor dim");
    const Matrix& L = f.lower;
    Matrix x = b;
    // forward substitution L y = b
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * x(k, c);
            x(i, c) = s / L(i, i);
        }
        // back substitution L^T x = y
        for (std::size_t ii = n; ii-- > 0;) {
            double s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= L(k, ii) * x(k, c);
            x(ii, c) = s / L(ii, ii);
        }
    }
    return x;
}

}  // namespace larom
