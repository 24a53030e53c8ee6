#include "ordwalk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ordwalk/errors.hpp"

namespace ordwalk {

SquareMatrix::SquareMatrix(int d, std::vector<double> e) : dim(d), entries(std::move(e)) {
    if (dim < 1) throw DimensionError("SquareMatrix: dim must be >= 1");
    if (entries.size() != static_cast<size_t>(dim) * dim)
        throw DimensionError("SquareMatrix: entry count does not match dim^2");
}

SquareMatrix SquareMatrix::identity(int d) {
    SquareMatrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

namespace {

void check_finite(const SquareMatrix& m) {
    for (double v : m.entries)
        if (!std::isfinite(v)) throw InvalidInputError("matrix has non-finite entries");
}

// In-place LU with partial pivoting; returns (sign, sum of log|pivot|),
// sign 0 when a pivot is exactly zero.
LogSigned lu_log_det(SquareMatrix& a) {
    const int n = a.dim;
    int sign = 1;
    double logsum = 0.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return LogSigned::zero();
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            sign = -sign;
        }
        double pivot = a(k, k);
        if (pivot < 0) sign = -sign;
        logsum += std::log(std::abs(pivot));
        for (int i = k + 1; i < n; ++i) {
            double f = a(i, k) / pivot;
            a(i, k) = f;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return LogSigned(sign, logsum);
}

}  // namespace

LogSigned log_det(const SquareMatrix& m) {
    if (m.dim < 1) throw DimensionError("log_det: dim must be >= 1");
    check_finite(m);
    SquareMatrix a = m;
    // Row equilibration: factor out each row's largest magnitude.
    double logscale = 0.0;
    for (int i = 0; i < a.dim; ++i) {
        double rowmax = 0.0;
        for (int j = 0; j < a.dim; ++j) rowmax = std::max(rowmax, std::abs(a(i, j)));
        if (rowmax == 0.0) return LogSigned::zero();
        logscale += std::log(rowmax);
        for (int j = 0; j < a.dim; ++j) a(i, j) /= rowmax;
    }
    LogSigned det = lu_log_det(a);
    if (det.is_zero()) return det;
    return LogSigned(det.sign, det.logmag + logscale);
}

ScaledDet log_det_logmatrix_scaled(const std::vector<LogSigned>& entries, int dim) {
    if (dim < 1) throw DimensionError("log_det_logmatrix: dim must be >= 1");
    if (entries.size() != static_cast<size_t>(dim) * dim)
        throw DimensionError("log_det_logmatrix: entry count does not match dim^2");
    SquareMatrix a(dim);
    double logscale = 0.0;
    for (int i = 0; i < dim; ++i) {
        double rowmax = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < dim; ++j) {
            const LogSigned& v = entries[static_cast<size_t>(i) * dim + j];
            if (!v.is_zero()) rowmax = std::max(rowmax, v.logmag);
        }
        if (rowmax == -std::numeric_limits<double>::infinity())
            return {LogSigned::zero(), 0.0};
        logscale += rowmax;
        for (int j = 0; j < dim; ++j) {
            const LogSigned& v = entries[static_cast<size_t>(i) * dim + j];
            a(i, j) = v.is_zero() ? 0.0 : v.sign * std::exp(v.logmag - rowmax);
        }
    }
    LogSigned det = lu_log_det(a);
    if (det.is_zero()) return {det, logscale};
    return {LogSigned(det.sign, det.logmag + logscale), logscale};
}

LogSigned log_det_logmatrix(const std::vector<LogSigned>& entries, int dim) {
    return log_det_logmatrix_scaled(entries, dim).det;
}

LogSigned pfaffian(const SquareMatrix& m) {
    const int n = m.dim;
    if (n % 2 != 0) throw DimensionError("pfaffian: dimension must be even");
    check_finite(m);
    double maxabs = 0.0;
    for (double v : m.entries) maxabs = std::max(maxabs, std::abs(v));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(m(i, j) + m(j, i)) > 1e-12 * std::max(maxabs, 1e-300))
                throw InvalidInputError("pfaffian: matrix is not skew-symmetric within tolerance");

    SquareMatrix a = m;
    int sign = 1;
    double logsum = 0.0;
    for (int k = 0; k + 1 < n; k += 2) {
        // Greedy pivot: bring the largest |a(k, j)|, j > k, into position (k, k+1).
        int piv = k + 1;
        double best = std::abs(a(k, k + 1));
        for (int j = k + 2; j < n; ++j) {
            double v = std::abs(a(k, j));
            if (v > best) { best = v; piv = j; }
        }
        if (best == 0.0) return LogSigned::zero();
        if (piv != k + 1) {
            for (int j = 0; j < n; ++j) std::swap(a(k + 1, j), a(piv, j));
            for (int i = 0; i < n; ++i) std::swap(a(i, k + 1), a(i, piv));
            sign = -sign;
        }
        double b = a(k, k + 1);
        if (b < 0) sign = -sign;
        logsum += std::log(std::abs(b));
        // Skew Schur complement: C -= (u v^T - v u^T)/b with u = a(k, .), v = a(k+1, .).
        for (int i = k + 2; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double upd = (a(k, i) * a(k + 1, j) - a(k + 1, i) * a(k, j)) / b;
                a(i, j) -= upd;
                a(j, i) = -a(i, j);
            }
        }
    }
    return LogSigned(sign, logsum);
}

SquareMatrix mat_inverse(const SquareMatrix& m) {
    const int n = m.dim;
    if (n < 1) throw DimensionError("mat_inverse: dim must be >= 1");
    check_finite(m);

    // Gauss-Jordan with partial pivoting on [A | I].
    SquareMatrix a = m;
    SquareMatrix inv = SquareMatrix::identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0)
            throw SingularityError("mat_inverse: exactly singular matrix",
                                   std::numeric_limits<double>::infinity());
        if (piv != k) {
            for (int j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        }
        double pivot = a(k, k);
        for (int j = 0; j < n; ++j) {
            a(k, j) /= pivot;
            inv(k, j) /= pivot;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            double f = a(i, k);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }

    auto inf_norm = [n](const SquareMatrix& w) {
        double best = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += std::abs(w(i, j));
            best = std::max(best, s);
        }
        return best;
    };
    double cond = inf_norm(m) * inf_norm(inv);
    if (!(cond < 1e12)) throw SingularityError("mat_inverse: ill-conditioned matrix", cond);

    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? -1.0 : 0.0;
            for (int k = 0; k < n; ++k) s += m(i, k) * inv(k, j);
            resid = std::max(resid, std::abs(s));
        }
    }
    if (resid > 1e-8 * n)
        throw SingularityError("mat_inverse: residual check failed", cond);
    return inv;
}

}  // namespace ordwalk
