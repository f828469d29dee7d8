#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "svp/linalg.hpp"

namespace svp {

// Default ceiling on the number of words an exhaustive enumeration may visit.
inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

/// A finite word over the matrix indices 0..count-1.
struct Word {
    std::vector<int> indices;
};

/// Singular value function of the word product: with m = floor(s) and
/// singular values a_1 >= ... >= a_n of the product,
///   phi^s = a_1 * ... * a_m * a_{m+1}^(s-m).
/// Defined for 0 <= s < n; always evaluated from the singular values of the
/// explicitly multiplied product.
double phi(const MatrixSystem& system, const Word& word, double s);

double log_phi(const MatrixSystem& system, const Word& word, double s);

/// Finite-level estimate of the subadditive pressure at s. The bracket
/// [lower, upper] always has width log(n!)/k.
struct OracleEstimate {
    int k = 0;
    double lower = 0;
    double upper = 0;
    double value = 0;  // (1/k) log sum over all words of length k of phi^s
};

/// Exhaustive sum of phi^s over all count^k words of length k, in
/// lexicographic order, combined by a max-shifted exponential sum.
///
/// When the closed-form level sum max_sigma P_sigma(s) is supplied, the
/// bracket is [closed_form_lower, closed_form_lower + log(n!)/k] and the
/// value is expected to fall inside it; otherwise the bracket is
/// [value - log(n!)/k, value].
///
/// Diagonal systems take a fast path that multiplies diagonal entries only.
/// Throws ResourceCap when count^k exceeds cap.
OracleEstimate finite_k_pressure(const MatrixSystem& system, double s, int k,
                                 std::optional<double> closed_form_lower = {},
                                 std::uint64_t cap = kDefaultEnumerationCap);

/// log sum_i |det A_i|^(s/n), the closed form of the pressure for s >= n,
/// where no k-limit is needed. Throws InvalidInput for s < n.
double det_pressure(const MatrixSystem& system, double s);

}  // namespace svp
