#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svp/dirichlet.hpp"
#include "svp/ordered_pressure.hpp"

namespace svp {

// Grid resolution per unit interval used to bracket envelope hand-overs
// before each one is pinned down by exact root isolation.
inline constexpr int kDefaultGridPerUnit = 2048;

// One-sided derivative jumps at or below this size leave a boundary as a
// higher-order candidate rather than a confirmed kink.
inline constexpr double kKinkTol = 1e-9;

/// Maximal piece of one unit interval on which a single ordered pressure
/// realises the envelope.
struct PressureSegment {
    double lo = 0, hi = 0;  // m <= lo < hi <= m+1
    int level = 0;          // the interval [m, m+1] this piece lives in
    OrderedKey key;         // representative key of the active class
    DirichletPolynomial poly;
};

/// Piecewise closed form of the pressure: segments cover [0, n], and the
/// tail polynomial (bases |det A_i|^{1/n}) covers s >= n.
struct PressureProfile {
    int n = 0;
    DiagonalSystem system;
    std::vector<PressureSegment> segments;
    DirichletPolynomial tail;

    double value(double s) const;
    const PressureSegment* segment_at(double s) const;  // null for s > n
};

enum class TransitionKind { IntegerPoint, EnvelopeCrossing, CandidateHigherOrder };

struct PhaseTransition {
    double s = 0;
    double left_derivative = 0;
    double right_derivative = 0;
    TransitionKind kind = TransitionKind::EnvelopeCrossing;
};

const char* to_string(TransitionKind kind);

/// Pressure at a single point: the max over level-floor(s) ordered pressures
/// for s in [0, n), the determinant branch for s >= n.
double pressure(const DiagonalSystem& ds, double s);

/// Assemble the full piecewise description. Per unit interval: enumerate
/// keys, collapse duplicate polynomials, scan a grid for argmax hand-overs,
/// isolate each hand-over as a zero of the difference polynomial, and verify
/// the result at segment midpoints.
PressureProfile build_profile(const DiagonalSystem& ds,
                              int grid_per_unit = kDefaultGridPerUnit);

/// One-sided derivatives {left, right} of the pressure at s. The left value
/// at s = 0 is NaN; for s above the last junction both come from the tail.
std::pair<double, double> one_sided_derivatives(const PressureProfile& profile, double s);

/// All phase transitions: interior envelope hand-overs, integer junctions
/// with a derivative jump, and boundaries where the jump is below kKinkTol
/// (reported as candidates). Junctions whose adjacent closed forms are one
/// and the same polynomial are analytic continuations, not transitions.
std::vector<PhaseTransition> find_transitions(const PressureProfile& profile);

/// Unique zero of the pressure for a contracting system, by bisection to
/// 1e-12; a system with P(0) <= 0 has dimension 0. Throws Precondition when
/// some matrix is not contracting.
double affinity_dimension(const PressureProfile& profile);

/// Exact integer upper bound on the number of phase transitions of a
/// pressure built from `count` matrices in dimension n:
///   n + (2 count - 1) * (n^2 C(2n-2, n-1) - 2^(n-1) n) / 2.
long long transition_bound(int n, int count);

/// Search for a key witnessing that on [m, m+1] the ordered singular values
/// come from one fixed coordinate order for every matrix: the head must
/// carry the m largest entries (as a multiset) and the pivot the (m+1)-th,
/// in every row. When such a key exists the pressure is analytic on the
/// open interval.
std::optional<OrderedKey> check_analyticity_condition(const DiagonalSystem& ds, int m);

struct CurveColumn {
    int level = 0;
    OrderedKey key;
};

/// Tabulated curve: s and P always; one column per key of every unit
/// interval the range meets, filled only where the key's interval applies
/// (integer points carry both sides); the serial of the active key, or
/// "det" beyond s = n.
struct CurveTable {
    std::vector<CurveColumn> columns;
    std::vector<double> s;
    std::vector<double> pressure;
    std::vector<std::vector<std::optional<double>>> values;  // [row][column]
    std::vector<std::string> active;
};

CurveTable curve_data(const PressureProfile& profile, double s_lo, double s_hi, int points);

}  // namespace svp
