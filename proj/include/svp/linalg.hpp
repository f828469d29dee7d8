#pragma once

#include <string>
#include <vector>

#include "svp/error.hpp"

namespace svp {

// Absolute tolerance under which an off-triangle entry counts as zero when
// classifying a matrix as upper or lower triangular.
inline constexpr double kTriangularTol = 1e-9;

// Non-singularity test: |det A| must exceed this factor times (max |entry|)^n.
inline constexpr double kSingularDetFactor = 1e-12;

/// Dense n-by-n real matrix, row-major storage.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n);
    Matrix(int n, std::vector<double> entries);

    static Matrix identity(int n);
    static Matrix diagonal(const std::vector<double>& entries);

    int dim() const noexcept { return n_; }
    double operator()(int r, int c) const { return entries_[static_cast<std::size_t>(r) * n_ + c]; }
    double& operator()(int r, int c) { return entries_[static_cast<std::size_t>(r) * n_ + c]; }
    const std::vector<double>& entries() const noexcept { return entries_; }

    double max_abs_entry() const;

private:
    int n_ = 0;
    std::vector<double> entries_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

// Signed determinant by LU factorisation with partial pivoting.
double determinant(const Matrix& a);

// Inverse by Gauss-Jordan elimination; throws InvalidInput when singular.
Matrix inverse(const Matrix& a);

/// Singular values in descending order, each > 0.
///
/// Computed as square roots of the eigenvalues of A^T A; the symmetric
/// eigenproblem is solved by cyclic plane rotations iterated until the
/// off-diagonal Frobenius norm falls below 1e-14 * trace(A^T A).
/// Throws InvalidInput when the input is numerically singular.
std::vector<double> singular_values(const Matrix& a);

bool is_upper_triangular(const Matrix& a, double tol = kTriangularTol);
bool is_lower_triangular(const Matrix& a, double tol = kTriangularTol);
bool is_diagonal(const Matrix& a, double tol = kTriangularTol);

// True when the largest singular value is strictly below 1.
bool is_contracting(const Matrix& a);

bool is_nonsingular(const Matrix& a);

/// A finite family of same-dimension invertible matrices.
struct MatrixSystem {
    int n = 0;
    std::vector<Matrix> matrices;
    std::vector<std::string> labels;  // empty, or one label per matrix

    int count() const noexcept { return static_cast<int>(matrices.size()); }

    // Validates dimensions, non-singularity and label arity.
    static MatrixSystem create(std::vector<Matrix> matrices,
                               std::vector<std::string> labels = {});
};

/// Result of conjugating a system by a candidate basis B: every matrix is
/// replaced by B^{-1} A B and tested for a common triangular orientation.
struct ConjugationResult {
    bool triangular = false;  // all conjugates upper, or all lower
    bool upper = false;       // meaningful only when triangular
    std::vector<std::vector<double>> abs_diagonals;  // per matrix, when triangular
};

ConjugationResult conjugate_to_triangular(const MatrixSystem& system,
                                          const Matrix& basis,
                                          double tol = kTriangularTol);

/// True when B^{-1} A_i B is upper triangular for every i, or lower
/// triangular for every i, within tol.
bool verify_conjugation_basis(const MatrixSystem& system,
                              const Matrix& basis,
                              double tol = kTriangularTol);

}  // namespace svp
