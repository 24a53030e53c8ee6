#pragma once

#include <vector>

#include "ordwalk/logsigned.hpp"

namespace ordwalk {

struct SquareMatrix {
    int dim = 0;
    std::vector<double> entries;  // row-major

    SquareMatrix() = default;
    explicit SquareMatrix(int d) : dim(d), entries(static_cast<size_t>(d) * d, 0.0) {}
    SquareMatrix(int d, std::vector<double> e);

    double& operator()(int i, int j) { return entries[static_cast<size_t>(i) * dim + j]; }
    double operator()(int i, int j) const { return entries[static_cast<size_t>(i) * dim + j]; }

    static SquareMatrix identity(int d);
};

// Determinant by row-equilibrated, partially pivoted elimination.
// A pivot that underflows to zero gives an exact zero sign.
LogSigned log_det(const SquareMatrix& m);

// Determinant of a matrix whose entries are already in log-signed form.
// Rows are scaled by their largest magnitude before elimination so the
// double-precision LU never overflows.
LogSigned log_det_logmatrix(const std::vector<LogSigned>& entries, int dim);

// Same, but also reports the accumulated row scale: det.logmag - log_scale
// is the log magnitude of the determinant of the row-normalized matrix,
// which is the natural yardstick for "negative beyond roundoff" checks.
struct ScaledDet {
    LogSigned det;
    double log_scale;
};
ScaledDet log_det_logmatrix_scaled(const std::vector<LogSigned>& entries, int dim);

// Pfaffian of an even-dimensional skew-symmetric matrix by Parlett-Reid
// skew elimination with greedy pivoting. Relative skew-symmetry tolerance
// is 1e-12 of the largest entry.
LogSigned pfaffian(const SquareMatrix& m);

// Inverse with residual check ||M M^-1 - I||_max <= 1e-8 * dim; throws
// SingularityError carrying the condition estimate when it exceeds 1e12.
SquareMatrix mat_inverse(const SquareMatrix& m);

}  // namespace ordwalk
