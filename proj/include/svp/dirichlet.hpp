#pragma once

#include <vector>

#include "svp/error.hpp"

namespace svp {

// Two bases whose logs differ by at most this much are merged into one term.
inline constexpr double kBaseMergeTol = 1e-12;

// A merged cluster whose signed coefficient sum is this small, relative to the
// cluster's largest coefficient, is treated as an exact cancellation.
inline constexpr double kCancellationTol = 1e-12;

// A sign-free value this small, relative to the largest term magnitude at the
// same point, counts as zero during root isolation.
inline constexpr double kTouchThreshold = 1e-10;

inline constexpr double kDefaultRootTol = 1e-12;

/// One term sign * exp(log_abs_coeff) * exp(log_base * s) of a finite sum
/// sum_i a_i b_i^s with every base b_i > 0.
struct DirichletTerm {
    int sign = 1;              // +1 or -1
    double log_abs_coeff = 0;  // log |a_i|
    double log_base = 0;       // log b_i
};

/// Finite signed sum of exponentials a_i b_i^s, kept in log form.
/// Canonical means: bases strictly descending with pairwise log-gaps above
/// kBaseMergeTol, and no term with a vanished coefficient. An empty canonical
/// polynomial is identically zero.
struct DirichletPolynomial {
    std::vector<DirichletTerm> terms;
    bool canonical = false;

    bool zero() const noexcept { return canonical && terms.empty(); }
    int term_count() const noexcept { return static_cast<int>(terms.size()); }
};

/// Merge terms with coinciding bases, drop exact cancellations, sort bases
/// in descending order. Idempotent.
DirichletPolynomial canonicalize(const DirichletPolynomial& p);

// Convenience: canonicalize a raw term list.
DirichletPolynomial make_polynomial(std::vector<DirichletTerm> terms);

/// Signed value sum_i a_i b_i^s, max-shifted for stability. Empty -> 0.
double eval(const DirichletPolynomial& p, double s);

/// Largest single-term magnitude max_i |a_i| b_i^s; the natural scale for
/// deciding whether eval(p, s) is effectively zero.
double local_magnitude(const DirichletPolynomial& p, double s);

/// Termwise derivative: a_i b_i^s picks up a factor log(b_i); terms with
/// base exactly 1 vanish. The result is canonical.
DirichletPolynomial derivative(const DirichletPolynomial& p);

/// Upper bound (term count minus one) on the number of real zeros.
/// Throws InvalidInput for a non-canonical or identically-zero polynomial.
int zero_bound(const DirichletPolynomial& p);

DirichletPolynomial negate(const DirichletPolynomial& p);

// Canonical form of a - b.
DirichletPolynomial difference(const DirichletPolynomial& a, const DirichletPolynomial& b);

/// Structural equality of canonical forms: equal term counts, signs, and
/// per-term log-base / log-coefficient agreement within the given tolerances.
bool identical(const DirichletPolynomial& a, const DirichletPolynomial& b,
               double coeff_tol = 1e-9, double base_tol = kBaseMergeTol);

/// log(sum_i a_i b_i^s); requires the sum to be strictly positive.
double log_sum_eval(const DirichletPolynomial& p, double s);

/// d/ds log(sum_i a_i b_i^s) = (sum_i a_i b_i^s log b_i) / (sum_i a_i b_i^s).
double log_sum_derivative(const DirichletPolynomial& p, double s);

enum class RootKind { Simple, Tangential };

struct DirichletRoot {
    double location = 0;
    RootKind kind = RootKind::Simple;
};

/// All real zeros of p in [lo, hi], located to within tol and sorted
/// ascending. Zeros with a sign change are Simple; points where p touches
/// zero without changing sign are Tangential.
///
/// Works by recursion on the term count: after normalising away the smallest
/// base, the derivative has one term fewer, and its zeros split [lo, hi]
/// into monotone pieces that each contain at most one sign change.
std::vector<DirichletRoot> isolate_zeros(const DirichletPolynomial& p,
                                         double lo, double hi,
                                         double tol = kDefaultRootTol);

}  // namespace svp
