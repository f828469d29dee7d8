#include "svp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace svp {

namespace {

void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw Error(kind, msg);
}

}  // namespace

Matrix::Matrix(int n) : n_(n) {
    require(n >= 1, ErrorKind::InvalidInput, "matrix dimension must be positive");
    entries_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

Matrix::Matrix(int n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
    require(n >= 1, ErrorKind::InvalidInput, "matrix dimension must be positive");
    require(entries_.size() == static_cast<std::size_t>(n) * n,
            ErrorKind::InvalidInput, "matrix entry count does not match dimension");
    for (double v : entries_)
        require(std::isfinite(v), ErrorKind::InvalidInput, "matrix entries must be finite");
}

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& entries) {
    Matrix m(static_cast<int>(entries.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = entries[i];
    return m;
}

double Matrix::max_abs_entry() const {
    double m = 0.0;
    for (double v : entries_) m = std::max(m, std::abs(v));
    return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    require(a.dim() == b.dim(), ErrorKind::InvalidInput, "matrix dimensions do not match");
    const int n = a.dim();
    Matrix out(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

double determinant(const Matrix& a) {
    const int n = a.dim();
    require(n >= 1, ErrorKind::InvalidInput, "determinant of an empty matrix");
    std::vector<double> lu = a.entries();
    auto at = [&](int r, int c) -> double& { return lu[static_cast<std::size_t>(r) * n + c]; };
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        if (at(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(at(pivot, c), at(col, c));
            det = -det;
        }
        det *= at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = at(r, col) / at(col, col);
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) at(r, c) -= f * at(col, c);
        }
    }
    return det;
}

Matrix inverse(const Matrix& a) {
    const int n = a.dim();
    std::vector<double> m = a.entries();
    Matrix inv = Matrix::identity(n);
    auto at = [&](int r, int c) -> double& { return m[static_cast<std::size_t>(r) * n + c]; };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        require(at(pivot, col) != 0.0, ErrorKind::InvalidInput, "matrix is singular");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(at(pivot, c), at(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        }
        const double d = at(col, col);
        for (int c = 0; c < n; ++c) {
            at(col, c) /= d;
            inv(col, c) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = at(r, col);
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                at(r, c) -= f * at(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

std::vector<double> singular_values(const Matrix& a) {
    const int n = a.dim();
    require(n >= 1, ErrorKind::InvalidInput, "singular values of an empty matrix");

    // S = A^T A, symmetric positive semi-definite.
    std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int r, int c) -> double& { return s[static_cast<std::size_t>(r) * n + c]; };
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += a(k, r) * a(k, c);
            at(r, c) = acc;
            at(c, r) = acc;
        }

    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += at(i, i);

    auto off_norm = [&] {
        double acc = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (r != c) acc += at(r, c) * at(r, c);
        return std::sqrt(acc);
    };

    // Cyclic plane rotations; quadratic convergence makes the sweep cap generous.
    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps && off_norm() > 1e-14 * trace; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double spq = at(p, q);
                if (spq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * spq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0)
                                 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {  // S <- S J
                    const double skp = at(k, p), skq = at(k, q);
                    at(k, p) = c * skp - sn * skq;
                    at(k, q) = sn * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {  // S <- J^T S
                    const double spk = at(p, k), sqk = at(q, k);
                    at(p, k) = c * spk - sn * sqk;
                    at(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }
    require(sweep < max_sweeps, ErrorKind::Internal, "eigensolver failed to converge");

    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = std::sqrt(std::max(at(i, i), 0.0));
    std::sort(values.begin(), values.end(), std::greater<double>());
    require(values.back() > values.front() * 1e-15 * n,
            ErrorKind::InvalidInput, "matrix is numerically singular");
    return values;
}

bool is_upper_triangular(const Matrix& a, double tol) {
    for (int r = 1; r < a.dim(); ++r)
        for (int c = 0; c < r; ++c)
            if (std::abs(a(r, c)) > tol) return false;
    return true;
}

bool is_lower_triangular(const Matrix& a, double tol) {
    for (int r = 0; r < a.dim(); ++r)
        for (int c = r + 1; c < a.dim(); ++c)
            if (std::abs(a(r, c)) > tol) return false;
    return true;
}

bool is_diagonal(const Matrix& a, double tol) {
    return is_upper_triangular(a, tol) && is_lower_triangular(a, tol);
}

bool is_contracting(const Matrix& a) {
    return singular_values(a).front() < 1.0;
}

bool is_nonsingular(const Matrix& a) {
    const double scale = a.max_abs_entry();
    if (scale == 0.0) return false;
    return std::abs(determinant(a)) > kSingularDetFactor * std::pow(scale, a.dim());
}

MatrixSystem MatrixSystem::create(std::vector<Matrix> matrices, std::vector<std::string> labels) {
    require(!matrices.empty(), ErrorKind::InvalidInput, "a system needs at least one matrix");
    const int n = matrices.front().dim();
    for (const Matrix& m : matrices) {
        require(m.dim() == n, ErrorKind::InvalidInput, "all matrices must share one dimension");
        require(is_nonsingular(m), ErrorKind::InvalidInput, "all matrices must be invertible");
    }
    require(labels.empty() || labels.size() == matrices.size(),
            ErrorKind::InvalidInput, "label count does not match matrix count");
    MatrixSystem sys;
    sys.n = n;
    sys.matrices = std::move(matrices);
    sys.labels = std::move(labels);
    return sys;
}

ConjugationResult conjugate_to_triangular(const MatrixSystem& system,
                                          const Matrix& basis,
                                          double tol) {
    require(basis.dim() == system.n, ErrorKind::InvalidInput,
            "basis dimension does not match the system");
    require(is_nonsingular(basis), ErrorKind::InvalidInput, "basis matrix is singular");
    const Matrix binv = inverse(basis);

    std::vector<Matrix> conjugated;
    conjugated.reserve(system.matrices.size());
    for (const Matrix& m : system.matrices)
        conjugated.push_back(multiply(binv, multiply(m, basis)));

    ConjugationResult result;
    bool all_upper = true, all_lower = true;
    for (const Matrix& m : conjugated) {
        all_upper = all_upper && is_upper_triangular(m, tol);
        all_lower = all_lower && is_lower_triangular(m, tol);
    }
    if (!all_upper && !all_lower) return result;

    result.triangular = true;
    result.upper = all_upper;
    for (const Matrix& m : conjugated) {
        std::vector<double> diag(system.n);
        for (int i = 0; i < system.n; ++i) diag[i] = std::abs(m(i, i));
        result.abs_diagonals.push_back(std::move(diag));
    }
    return result;
}

bool verify_conjugation_basis(const MatrixSystem& system, const Matrix& basis, double tol) {
    return conjugate_to_triangular(system, basis, tol).triangular;
}

}  // namespace svp
