#include "svp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace svp {

namespace {

constexpr double kJunctionSnap = 1e-9;   // grid points this close to an integer are the integer
constexpr double kDegenerateCut = 1e-9;  // cuts this close to an interval end are dropped

double snap_to_integer(double s) {
    const double r = std::round(s);
    return std::abs(s - r) <= kJunctionSnap * std::max(1.0, std::abs(s)) ? r : s;
}

// Tail polynomial: one positive term per matrix with base |det A_i|^{1/n}.
DirichletPolynomial tail_polynomial(const DiagonalSystem& ds) {
    std::vector<DirichletTerm> terms;
    terms.reserve(ds.count());
    for (int i = 0; i < ds.count(); ++i) {
        double log_det = 0.0;
        for (int l = 1; l <= ds.n; ++l) log_det += ds.log_entry(i, l);
        terms.push_back(DirichletTerm{1, 0.0, log_det / ds.n});
    }
    return make_polynomial(std::move(terms));
}

struct KeyedPoly {
    OrderedKey key;
    DirichletPolynomial poly;
};

// Collapse keys with the same level sum. Structural comparison first; a
// coarse value comparison catches polynomials that agree only numerically.
std::vector<KeyedPoly> dedup_level_polys(const DiagonalSystem& ds, int m) {
    std::vector<KeyedPoly> reps;
    for (const OrderedKey& key : enumerate_keys(ds.n, m)) {
        DirichletPolynomial poly = ordered_pressure_poly(ds, key);
        bool found = false;
        for (const KeyedPoly& rep : reps) {
            if (identical(rep.poly, poly)) {
                found = true;
                break;
            }
            bool close = true;
            for (int g = 0; g <= 63 && close; ++g) {
                const double s = m + g / 63.0;
                close = std::abs(log_sum_eval(rep.poly, s) - log_sum_eval(poly, s)) <= 1e-10;
            }
            if (close) {
                found = true;
                break;
            }
        }
        if (!found) reps.push_back(KeyedPoly{key, std::move(poly)});
    }
    return reps;
}

int argmax_at(const std::vector<KeyedPoly>& reps, double s) {
    int best = 0;
    double best_val = log_sum_eval(reps[0].poly, s);
    for (int r = 1; r < static_cast<int>(reps.size()); ++r) {
        const double v = log_sum_eval(reps[r].poly, s);
        if (v > best_val) {
            best = r;
            best_val = v;
        }
    }
    return best;
}

}  // namespace

const char* to_string(TransitionKind kind) {
    switch (kind) {
        case TransitionKind::IntegerPoint: return "integer-point";
        case TransitionKind::EnvelopeCrossing: return "envelope-crossing";
        case TransitionKind::CandidateHigherOrder: return "candidate-higher-order";
    }
    return "unknown";
}

double pressure(const DiagonalSystem& ds, double s) {
    s = snap_to_integer(s);
    if (!(s >= 0.0))
        throw Error(ErrorKind::InvalidInput, "pressure is defined for s >= 0");
    if (s >= ds.n) return log_sum_eval(tail_polynomial(ds), s);

    const int m = static_cast<int>(std::floor(s));
    double best = -std::numeric_limits<double>::infinity();
    for (const OrderedKey& key : enumerate_keys(ds.n, m))
        best = std::max(best, ordered_pressure_eval(ds, key, s));
    return best;
}

double PressureProfile::value(double s) const {
    s = snap_to_integer(s);
    if (!(s >= 0.0))
        throw Error(ErrorKind::InvalidInput, "pressure is defined for s >= 0");
    if (s >= n) return log_sum_eval(tail, s);
    return log_sum_eval(segment_at(s)->poly, s);
}

const PressureSegment* PressureProfile::segment_at(double s) const {
    s = snap_to_integer(s);
    if (s > n) return nullptr;
    for (const PressureSegment& seg : segments)
        if (s >= seg.lo - kJunctionSnap && s <= seg.hi + kJunctionSnap) return &seg;
    return nullptr;
}

PressureProfile build_profile(const DiagonalSystem& ds, int grid_per_unit) {
    if (grid_per_unit < 8)
        throw Error(ErrorKind::InvalidInput, "grid resolution is too coarse");

    PressureProfile profile;
    profile.n = ds.n;
    profile.system = ds;
    profile.tail = tail_polynomial(ds);

    for (int m = 0; m < ds.n; ++m) {
        const std::vector<KeyedPoly> reps = dedup_level_polys(ds, m);
        const double lo = m, hi = m + 1;

        // Grid walk: note every cell in which the argmax changes hands.
        std::vector<double> cuts;
        int active = argmax_at(reps, lo);
        for (int j = 1; j <= grid_per_unit; ++j) {
            const double s = m + static_cast<double>(j) / grid_per_unit;
            const double held = log_sum_eval(reps[active].poly, s);
            int challenger = active;
            double challenger_val = held;
            for (int r = 0; r < static_cast<int>(reps.size()); ++r) {
                if (r == active) continue;
                const double v = log_sum_eval(reps[r].poly, s);
                if (v > challenger_val) {
                    challenger = r;
                    challenger_val = v;
                }
            }
            if (challenger == active) continue;

            const double cell_lo = m + static_cast<double>(j - 1) / grid_per_unit;
            const DirichletPolynomial diff =
                difference(reps[active].poly, reps[challenger].poly);
            double cut = 0.5 * (cell_lo + s);
            if (!diff.zero()) {
                const std::vector<DirichletRoot> roots = isolate_zeros(diff, cell_lo, s);
                if (!roots.empty()) cut = roots.front().location;
            }
            cuts.push_back(cut);
            active = challenger;
        }

        std::sort(cuts.begin(), cuts.end());
        std::vector<double> pts{lo};
        for (double c : cuts) {
            if (c <= pts.back() + kDegenerateCut) continue;
            if (c >= hi - kDegenerateCut) break;
            pts.push_back(c);
        }
        pts.push_back(hi);

        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double mid = 0.5 * (pts[i] + pts[i + 1]);
            const int r = argmax_at(reps, mid);

            // The recorded class must actually win its own midpoint.
            const double rv = log_sum_eval(reps[r].poly, mid);
            for (int o = 0; o < static_cast<int>(reps.size()); ++o)
                if (log_sum_eval(reps[o].poly, mid) > rv + 1e-9)
                    throw Error(ErrorKind::Internal, "envelope midpoint check failed");

            if (!profile.segments.empty()) {
                PressureSegment& last = profile.segments.back();
                if (last.level == m && last.key == reps[r].key) {
                    last.hi = pts[i + 1];  // spurious cut, same class on both sides
                    continue;
                }
            }
            PressureSegment seg;
            seg.lo = pts[i];
            seg.hi = pts[i + 1];
            seg.level = m;
            seg.key = reps[r].key;
            seg.poly = reps[r].poly;
            profile.segments.push_back(std::move(seg));
        }
    }

    // The closed form must stitch continuously at every junction.
    for (std::size_t i = 0; i + 1 < profile.segments.size(); ++i) {
        const double s = profile.segments[i].hi;
        const double a = log_sum_eval(profile.segments[i].poly, s);
        const double b = log_sum_eval(profile.segments[i + 1].poly, s);
        if (std::abs(a - b) > 1e-9)
            throw Error(ErrorKind::Internal, "pressure profile is discontinuous");
    }
    const double at_n = log_sum_eval(profile.segments.back().poly, ds.n);
    if (std::abs(at_n - log_sum_eval(profile.tail, ds.n)) > 1e-9)
        throw Error(ErrorKind::Internal, "pressure profile is discontinuous at s = n");

    return profile;
}

std::pair<double, double> one_sided_derivatives(const PressureProfile& profile, double s) {
    s = snap_to_integer(s);
    if (!(s >= 0.0))
        throw Error(ErrorKind::InvalidInput, "derivatives are defined for s >= 0");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (s >= profile.n) {
        const double tail = log_sum_derivative(profile.tail, s);
        if (s > profile.n) return {tail, tail};
        // At s = n the left side belongs to the last segment.
        return {log_sum_derivative(profile.segments.back().poly, s), tail};
    }

    const DirichletPolynomial* left = nullptr;
    const DirichletPolynomial* right = nullptr;
    for (const PressureSegment& seg : profile.segments) {
        if (s > seg.lo + kJunctionSnap && s < seg.hi - kJunctionSnap) {
            left = right = &seg.poly;
            break;
        }
        if (std::abs(s - seg.hi) <= kJunctionSnap) left = &seg.poly;
        if (std::abs(s - seg.lo) <= kJunctionSnap) right = &seg.poly;
    }
    return {left ? log_sum_derivative(*left, s) : nan,
            right ? log_sum_derivative(*right, s) : nan};
}

std::vector<PhaseTransition> find_transitions(const PressureProfile& profile) {
    std::vector<PhaseTransition> out;

    auto classify = [&](double s, const DirichletPolynomial& left,
                        const DirichletPolynomial& right, bool integer_junction) {
        if (identical(left, right)) return;  // one analytic formula continues through
        PhaseTransition t;
        t.s = s;
        t.left_derivative = log_sum_derivative(left, s);
        t.right_derivative = log_sum_derivative(right, s);
        if (std::abs(t.left_derivative - t.right_derivative) <= kKinkTol)
            t.kind = TransitionKind::CandidateHigherOrder;
        else
            t.kind = integer_junction ? TransitionKind::IntegerPoint
                                      : TransitionKind::EnvelopeCrossing;
        out.push_back(t);
    };

    for (std::size_t i = 0; i + 1 < profile.segments.size(); ++i) {
        const PressureSegment& a = profile.segments[i];
        const PressureSegment& b = profile.segments[i + 1];
        classify(a.hi, a.poly, b.poly, a.level != b.level);
    }
    classify(profile.n, profile.segments.back().poly, profile.tail, true);

    std::sort(out.begin(), out.end(),
              [](const PhaseTransition& a, const PhaseTransition& b) { return a.s < b.s; });
    return out;
}

double affinity_dimension(const PressureProfile& profile) {
    if (!profile.system.all_contracting)
        throw Error(ErrorKind::Precondition,
                    "affinity dimension requires every matrix to be contracting");

    if (profile.value(0.0) <= 0.0) return 0.0;

    double lo = 0.0, hi = profile.n;
    if (profile.value(hi) > 0.0) {
        // The zero lies on the determinant tail; grow the bracket geometrically.
        double step = std::max(1.0, static_cast<double>(profile.n));
        while (profile.value(hi) > 0.0) {
            lo = hi;
            hi += step;
            step *= 2.0;
            if (hi > 1e6)
                throw Error(ErrorKind::Internal, "failed to bracket the pressure zero");
        }
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (profile.value(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

long long transition_bound(int n, int count) {
    if (n < 1 || count < 1)
        throw Error(ErrorKind::InvalidInput, "dimension and matrix count must be positive");

    // C(2n-2, n-1) by the multiplicative rule, watching for overflow.
    long long binom = 1;
    for (int i = 1; i <= n - 1; ++i) {
        if (binom > std::numeric_limits<long long>::max() / (n - 1 + i))
            throw Error(ErrorKind::ResourceCap, "transition bound overflows");
        binom = binom * (n - 1 + i) / i;  // exact: prefix products are binomials
    }

    long long pow2 = 1;  // 2^(n-1)
    for (int i = 1; i < n; ++i) {
        if (pow2 > std::numeric_limits<long long>::max() / 2)
            throw Error(ErrorKind::ResourceCap, "transition bound overflows");
        pow2 *= 2;
    }

    // (n^2 * binom - 2^(n-1) * n) is even, so the division is exact.
    long long nn = static_cast<long long>(n) * n;
    if (binom != 0 && nn > std::numeric_limits<long long>::max() / binom)
        throw Error(ErrorKind::ResourceCap, "transition bound overflows");
    const long long inner = (nn * binom - pow2 * n) / 2;
    const long long factor = 2LL * count - 1;
    if (inner != 0 && factor > std::numeric_limits<long long>::max() / inner)
        throw Error(ErrorKind::ResourceCap, "transition bound overflows");
    return n + factor * inner;
}

std::optional<OrderedKey> check_analyticity_condition(const DiagonalSystem& ds, int m) {
    if (m < 0 || m >= ds.n)
        throw Error(ErrorKind::InvalidInput, "interval level must satisfy 0 <= m < n");

    // Per row: the m largest entries (with multiplicity) and the next one.
    std::vector<std::vector<double>> top(ds.count());
    std::vector<double> next(ds.count());
    for (int i = 0; i < ds.count(); ++i) {
        std::vector<double> sorted = ds.rows[i];
        std::sort(sorted.begin(), sorted.end(), std::greater<double>());
        top[i].assign(sorted.begin(), sorted.begin() + m);
        next[i] = sorted[m];
    }

    auto matches = [](double x, double y) {
        return std::abs(x - y) <= 1e-9 * std::max({std::abs(x), std::abs(y), 1.0});
    };

    for (const OrderedKey& key : enumerate_keys(ds.n, m)) {
        bool ok = true;
        for (int i = 0; i < ds.count() && ok; ++i) {
            std::vector<double> head_vals;
            head_vals.reserve(m);
            for (int l : key.head) head_vals.push_back(ds.entry(i, l));
            std::sort(head_vals.begin(), head_vals.end(), std::greater<double>());
            for (int t = 0; t < m && ok; ++t) ok = matches(head_vals[t], top[i][t]);
            ok = ok && matches(ds.entry(i, key.pivot), next[i]);
        }
        if (ok) return key;
    }
    return std::nullopt;
}

CurveTable curve_data(const PressureProfile& profile, double s_lo, double s_hi, int points) {
    if (!(s_lo >= 0.0) || !(s_hi > s_lo))
        throw Error(ErrorKind::InvalidInput, "curve range needs 0 <= lo < hi");
    if (points < 2)
        throw Error(ErrorKind::InvalidInput, "curve needs at least two points");

    CurveTable table;
    for (int m = 0; m < profile.n; ++m) {
        if (m > s_hi || m + 1 < s_lo) continue;
        for (const OrderedKey& key : enumerate_keys(profile.n, m))
            table.columns.push_back(CurveColumn{m, key});
    }

    for (int j = 0; j < points; ++j) {
        const double raw = s_lo + (s_hi - s_lo) * j / (points - 1);
        const double s = snap_to_integer(raw);
        table.s.push_back(s);
        table.pressure.push_back(profile.value(s));

        std::vector<std::optional<double>> row;
        row.reserve(table.columns.size());
        for (const CurveColumn& col : table.columns) {
            if (s >= col.level && s <= col.level + 1)
                row.push_back(ordered_pressure_eval(profile.system, col.key, s));
            else
                row.push_back(std::nullopt);
        }
        table.values.push_back(std::move(row));

        if (s >= profile.n)
            table.active.emplace_back("det");
        else
            table.active.push_back(profile.segment_at(s)->key.serial());
    }
    return table;
}

}  // namespace svp
