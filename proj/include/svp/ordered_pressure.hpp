#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svp/dirichlet.hpp"
#include "svp/linalg.hpp"

namespace svp {

/// Reduced form of a simultaneously-triangularisable system: only the
/// absolute diagonal entries c[i][l] > 0 survive, one row per matrix.
/// Coordinates l are 1-based throughout, matrix indices i are 0-based.
struct DiagonalSystem {
    int n = 0;
    std::vector<std::vector<double>> rows;      // rows[i][l-1] = c_l(i)
    std::vector<std::vector<double>> log_rows;  // elementwise log
    bool all_contracting = false;
    std::vector<std::string> labels;

    int count() const noexcept { return static_cast<int>(rows.size()); }
    double entry(int i, int l) const { return rows[i][l - 1]; }
    double log_entry(int i, int l) const { return log_rows[i][l - 1]; }

    /// Build directly from diagonal entries (signs are discarded). Entries
    /// must be non-zero; the system counts as contracting when every
    /// absolute entry is below 1.
    static DiagonalSystem from_values(std::vector<std::vector<double>> values,
                                      std::vector<std::string> labels = {});
};

/// Canonical representative of a coordinate ordering on [m, m+1): the
/// unordered set of m head coordinates whose entries are taken in full,
/// plus the pivot coordinate carrying the fractional exponent s - m.
struct OrderedKey {
    std::vector<int> head;  // sorted ascending, values in 1..n
    int pivot = 0;          // in 1..n, never in head

    int level() const noexcept { return static_cast<int>(head.size()); }
    std::string serial() const;  // e.g. "{3 4 6}/5", "{}/2"

    bool operator==(const OrderedKey&) const = default;
};

/// Reduce a system of triangular (or triangularisable-by-basis) matrices to
/// its diagonal data. Throws Precondition when no common triangular
/// orientation exists. A system whose matrices are not all contracting is
/// still reduced, with all_contracting = false on the result.
DiagonalSystem reduce_to_diagonal(const MatrixSystem& system,
                                  const std::optional<Matrix>& basis = {},
                                  double tol = kTriangularTol);

/// All keys with |head| = m over coordinates 1..n, in deterministic order:
/// heads lexicographic, then pivots ascending. Size n * C(n-1, m).
std::vector<OrderedKey> enumerate_keys(int n, int m);

/// Ordered singular value function of a single matrix index:
/// prod_{l in head} c_l(i) * c_pivot(i)^(s - m), for s in [m, m+1].
double ordered_svf(const DiagonalSystem& ds, const OrderedKey& key, int i, double s);

/// Same, for a word over the matrix indices; multiplicative over
/// concatenation because each coordinate multiplies independently.
double ordered_svf_word(const DiagonalSystem& ds, const OrderedKey& key,
                        const std::vector<int>& word, double s);

/// The level sum sum_i ordered_svf(i, s) as a Dirichlet polynomial in s:
/// coefficient prod_head c / c_pivot^m against base c_pivot, per matrix,
/// merged into canonical form.
DirichletPolynomial ordered_pressure_poly(const DiagonalSystem& ds, const OrderedKey& key);

/// log sum_i ordered_svf(i, s), valid on the closed interval [m, m+1].
double ordered_pressure_eval(const DiagonalSystem& ds, const OrderedKey& key, double s);

/// The diagonal matrices carrying the absolute entries of ds.
MatrixSystem to_matrix_system(const DiagonalSystem& ds);

}  // namespace svp
