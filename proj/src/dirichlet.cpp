#include "svp/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace svp {

namespace {

void check_canonical(const DirichletPolynomial& p, const char* op) {
    if (!p.canonical)
        throw Error(ErrorKind::InvalidInput,
                    std::string(op) + " requires a canonical polynomial");
}

// Signed sum of the given terms at s = 0 scale, i.e. of sign * exp(log_abs),
// max-shifted. Returns the shift and the mantissa sum.
struct ShiftedSum {
    double shift;     // max log magnitude, -inf when empty
    double mantissa;  // sum of sign * exp(log_abs - shift)
};

ShiftedSum shifted_coefficient_sum(const std::vector<DirichletTerm>& terms) {
    ShiftedSum out{-std::numeric_limits<double>::infinity(), 0.0};
    for (const DirichletTerm& t : terms) out.shift = std::max(out.shift, t.log_abs_coeff);
    if (!std::isfinite(out.shift)) return out;
    for (const DirichletTerm& t : terms)
        out.mantissa += t.sign * std::exp(t.log_abs_coeff - out.shift);
    return out;
}

}  // namespace

DirichletPolynomial canonicalize(const DirichletPolynomial& p) {
    std::vector<DirichletTerm> sorted = p.terms;
    for (const DirichletTerm& t : sorted) {
        if (t.sign != 1 && t.sign != -1)
            throw Error(ErrorKind::InvalidInput, "term sign must be +1 or -1");
        if (!std::isfinite(t.log_abs_coeff) || !std::isfinite(t.log_base))
            throw Error(ErrorKind::InvalidInput, "term logs must be finite");
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const DirichletTerm& a, const DirichletTerm& b) {
                         return a.log_base > b.log_base;
                     });

    DirichletPolynomial out;
    out.canonical = true;
    std::size_t i = 0;
    while (i < sorted.size()) {
        // Gather the cluster of bases within the merge tolerance of each other.
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j - 1].log_base - sorted[j].log_base <= kBaseMergeTol)
            ++j;
        std::vector<DirichletTerm> cluster(sorted.begin() + i, sorted.begin() + j);
        const ShiftedSum sum = shifted_coefficient_sum(cluster);
        double gross = 0.0;
        for (const DirichletTerm& t : cluster) gross += std::exp(t.log_abs_coeff - sum.shift);
        if (std::abs(sum.mantissa) > kCancellationTol * gross) {
            DirichletTerm merged;
            merged.sign = sum.mantissa > 0.0 ? 1 : -1;
            merged.log_abs_coeff = sum.shift + std::log(std::abs(sum.mantissa));
            merged.log_base = cluster.front().log_base;
            out.terms.push_back(merged);
        }
        i = j;
    }
    return out;
}

DirichletPolynomial make_polynomial(std::vector<DirichletTerm> terms) {
    DirichletPolynomial raw;
    raw.terms = std::move(terms);
    return canonicalize(raw);
}

double eval(const DirichletPolynomial& p, double s) {
    check_canonical(p, "eval");
    if (p.terms.empty()) return 0.0;
    double shift = -std::numeric_limits<double>::infinity();
    for (const DirichletTerm& t : p.terms)
        shift = std::max(shift, t.log_abs_coeff + s * t.log_base);
    double sum = 0.0;
    for (const DirichletTerm& t : p.terms)
        sum += t.sign * std::exp(t.log_abs_coeff + s * t.log_base - shift);
    return sum * std::exp(shift);
}

double local_magnitude(const DirichletPolynomial& p, double s) {
    check_canonical(p, "local_magnitude");
    if (p.terms.empty()) return 0.0;
    double shift = -std::numeric_limits<double>::infinity();
    for (const DirichletTerm& t : p.terms)
        shift = std::max(shift, t.log_abs_coeff + s * t.log_base);
    return std::exp(shift);
}

DirichletPolynomial derivative(const DirichletPolynomial& p) {
    check_canonical(p, "derivative");
    DirichletPolynomial out;
    out.canonical = true;
    for (const DirichletTerm& t : p.terms) {
        if (t.log_base == 0.0) continue;  // d/ds of a constant
        DirichletTerm d;
        d.sign = t.log_base > 0.0 ? t.sign : -t.sign;
        d.log_abs_coeff = t.log_abs_coeff + std::log(std::abs(t.log_base));
        d.log_base = t.log_base;
        out.terms.push_back(d);
    }
    // Bases are inherited, so descending order and gap discipline survive.
    return out;
}

int zero_bound(const DirichletPolynomial& p) {
    check_canonical(p, "zero_bound");
    if (p.terms.empty())
        throw Error(ErrorKind::InvalidInput, "zero bound of the identically-zero polynomial");
    return p.term_count() - 1;
}

DirichletPolynomial negate(const DirichletPolynomial& p) {
    DirichletPolynomial out = p;
    for (DirichletTerm& t : out.terms) t.sign = -t.sign;
    return out;
}

DirichletPolynomial difference(const DirichletPolynomial& a, const DirichletPolynomial& b) {
    DirichletPolynomial raw;
    raw.terms = a.terms;
    for (DirichletTerm t : b.terms) {
        t.sign = -t.sign;
        raw.terms.push_back(t);
    }
    return canonicalize(raw);
}

bool identical(const DirichletPolynomial& a, const DirichletPolynomial& b,
               double coeff_tol, double base_tol) {
    if (!a.canonical || !b.canonical)
        throw Error(ErrorKind::InvalidInput, "identical requires canonical polynomials");
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const DirichletTerm& x = a.terms[i];
        const DirichletTerm& y = b.terms[i];
        if (x.sign != y.sign) return false;
        if (std::abs(x.log_base - y.log_base) > base_tol) return false;
        if (std::abs(x.log_abs_coeff - y.log_abs_coeff) > coeff_tol) return false;
    }
    return true;
}

double log_sum_eval(const DirichletPolynomial& p, double s) {
    check_canonical(p, "log_sum_eval");
    if (p.terms.empty())
        throw Error(ErrorKind::Precondition, "log of an empty sum");
    double shift = -std::numeric_limits<double>::infinity();
    for (const DirichletTerm& t : p.terms)
        shift = std::max(shift, t.log_abs_coeff + s * t.log_base);
    double sum = 0.0;
    for (const DirichletTerm& t : p.terms)
        sum += t.sign * std::exp(t.log_abs_coeff + s * t.log_base - shift);
    if (sum <= 0.0)
        throw Error(ErrorKind::Precondition, "log of a non-positive sum");
    return shift + std::log(sum);
}

double log_sum_derivative(const DirichletPolynomial& p, double s) {
    check_canonical(p, "log_sum_derivative");
    if (p.terms.empty())
        throw Error(ErrorKind::Precondition, "derivative of the log of an empty sum");
    double shift = -std::numeric_limits<double>::infinity();
    for (const DirichletTerm& t : p.terms)
        shift = std::max(shift, t.log_abs_coeff + s * t.log_base);
    double num = 0.0, den = 0.0;
    for (const DirichletTerm& t : p.terms) {
        const double w = t.sign * std::exp(t.log_abs_coeff + s * t.log_base - shift);
        num += w * t.log_base;
        den += w;
    }
    if (den <= 0.0)
        throw Error(ErrorKind::Precondition, "derivative of the log of a non-positive sum");
    return num / den;
}

namespace {

// Divide every term by the smallest base, so the last term becomes constant.
// Zeros are unchanged; signs at every point are unchanged.
DirichletPolynomial normalize_smallest_base(const DirichletPolynomial& p) {
    DirichletPolynomial out = p;
    const double lb = p.terms.back().log_base;
    for (DirichletTerm& t : out.terms) t.log_base -= lb;
    out.terms.back().log_base = 0.0;  // exact, not merely tiny
    return out;
}

// The signed sum divided by the largest single-term magnitude at the same
// point. Equal in sign to the true value and always finite, even where the
// unscaled value would overflow; |result| <= kTouchThreshold is the
// scale-free test for an effective zero.
double relative_value(const DirichletPolynomial& p, double s) {
    double shift = -std::numeric_limits<double>::infinity();
    for (const DirichletTerm& t : p.terms)
        shift = std::max(shift, t.log_abs_coeff + s * t.log_base);
    double sum = 0.0;
    for (const DirichletTerm& t : p.terms)
        sum += t.sign * std::exp(t.log_abs_coeff + s * t.log_base - shift);
    return sum;
}

double bisect_simple_root(const DirichletPolynomial& p, double lo, double hi,
                          double flo, double tol) {
    const bool lo_positive = flo > 0.0;
    int guard = 0;
    while (hi - lo > tol && ++guard < 200) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = relative_value(p, mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == lo_positive)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<DirichletRoot> isolate_zeros(const DirichletPolynomial& p,
                                         double lo, double hi, double tol) {
    check_canonical(p, "isolate_zeros");
    if (p.terms.empty())
        throw Error(ErrorKind::InvalidInput, "cannot isolate zeros of the zero polynomial");
    if (!(lo < hi))
        throw Error(ErrorKind::InvalidInput, "zero isolation needs lo < hi");
    if (!(tol > 0.0))
        throw Error(ErrorKind::InvalidInput, "zero isolation tolerance must be positive");

    if (p.term_count() == 1) return {};  // a single term never vanishes

    const DirichletPolynomial q = normalize_smallest_base(p);
    const DirichletPolynomial dq = derivative(q);  // one term fewer

    std::vector<double> breakpoints{lo};
    for (const DirichletRoot& r : isolate_zeros(dq, lo, hi, tol))
        if (r.location > lo && r.location < hi) breakpoints.push_back(r.location);
    breakpoints.push_back(hi);
    std::sort(breakpoints.begin(), breakpoints.end());

    std::vector<double> values(breakpoints.size());
    std::vector<bool> zero_at(breakpoints.size());
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        values[i] = relative_value(q, breakpoints[i]);
        zero_at[i] = std::abs(values[i]) <= kTouchThreshold;
    }

    std::vector<DirichletRoot> roots;

    auto neighbour_sign = [&](std::size_t from, int step) -> int {
        for (std::size_t i = from; /* bounds below */; ) {
            if (step < 0 && i == 0) return 0;
            i = static_cast<std::size_t>(static_cast<long long>(i) + step);
            if (i >= breakpoints.size()) return 0;
            if (!zero_at[i]) return values[i] > 0.0 ? 1 : -1;
        }
    };

    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!zero_at[i]) continue;
        DirichletRoot root;
        root.location = breakpoints[i];
        const int before = neighbour_sign(i, -1);
        const int after = neighbour_sign(i, +1);
        root.kind = (before != 0 && before == after) ? RootKind::Tangential : RootKind::Simple;
        roots.push_back(root);
    }

    // Monotone pieces between breakpoints: one bisection per sign change.
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (zero_at[i] || zero_at[i + 1]) continue;
        if ((values[i] > 0.0) == (values[i + 1] > 0.0)) continue;
        const double r = bisect_simple_root(q, breakpoints[i], breakpoints[i + 1],
                                            values[i], tol);
        roots.push_back({r, RootKind::Simple});
    }

    std::sort(roots.begin(), roots.end(),
              [](const DirichletRoot& a, const DirichletRoot& b) {
                  return a.location < b.location;
              });
    std::vector<DirichletRoot> unique;
    for (const DirichletRoot& r : roots) {
        if (!unique.empty() && r.location - unique.back().location <= 2.0 * tol) continue;
        unique.push_back(r);
    }
    if (static_cast<int>(unique.size()) > zero_bound(p))
        throw Error(ErrorKind::Internal, "root count exceeded the structural bound");
    return unique;
}

}  // namespace svp
