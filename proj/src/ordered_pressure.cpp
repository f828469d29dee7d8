#include "svp/ordered_pressure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace svp {

DiagonalSystem DiagonalSystem::from_values(std::vector<std::vector<double>> values,
                                           std::vector<std::string> labels) {
    if (values.empty())
        throw Error(ErrorKind::InvalidInput, "a diagonal system needs at least one row");
    const int n = static_cast<int>(values.front().size());
    if (n < 1)
        throw Error(ErrorKind::InvalidInput, "diagonal rows must be non-empty");
    if (!labels.empty() && labels.size() != values.size())
        throw Error(ErrorKind::InvalidInput, "label count does not match row count");

    DiagonalSystem ds;
    ds.n = n;
    ds.labels = std::move(labels);
    ds.all_contracting = true;
    for (std::vector<double>& row : values) {
        if (static_cast<int>(row.size()) != n)
            throw Error(ErrorKind::InvalidInput, "all diagonal rows must have length n");
        std::vector<double> logs(n);
        for (int l = 0; l < n; ++l) {
            const double v = std::abs(row[l]);
            if (!(v > 0.0) || !std::isfinite(v))
                throw Error(ErrorKind::InvalidInput,
                            "diagonal entries must be non-zero and finite");
            row[l] = v;
            logs[l] = std::log(v);
            if (v >= 1.0) ds.all_contracting = false;
        }
        ds.rows.push_back(std::move(row));
        ds.log_rows.push_back(std::move(logs));
    }
    return ds;
}

std::string OrderedKey::serial() const {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (i) out << ' ';
        out << head[i];
    }
    out << "}/" << pivot;
    return out.str();
}

DiagonalSystem reduce_to_diagonal(const MatrixSystem& system,
                                  const std::optional<Matrix>& basis,
                                  double tol) {
    std::vector<std::vector<double>> diagonals;
    if (basis) {
        const ConjugationResult conj = conjugate_to_triangular(system, *basis, tol);
        if (!conj.triangular)
            throw Error(ErrorKind::Precondition,
                        "the supplied basis does not triangularise the system");
        diagonals = conj.abs_diagonals;
    } else {
        bool all_upper = true, all_lower = true;
        for (const Matrix& m : system.matrices) {
            all_upper = all_upper && is_upper_triangular(m, tol);
            all_lower = all_lower && is_lower_triangular(m, tol);
        }
        if (!all_upper && !all_lower)
            throw Error(ErrorKind::Precondition,
                        "system is not triangular in a common orientation; supply a "
                        "conjugating basis, or fall back to the finite-word oracle");
        for (const Matrix& m : system.matrices) {
            std::vector<double> diag(system.n);
            for (int l = 0; l < system.n; ++l) diag[l] = std::abs(m(l, l));
            diagonals.push_back(std::move(diag));
        }
    }

    DiagonalSystem ds = DiagonalSystem::from_values(std::move(diagonals), system.labels);
    // Contraction is a property of the source matrices, not of the diagonal
    // part alone: a triangular matrix can expand while its diagonal does not.
    ds.all_contracting = true;
    for (const Matrix& m : system.matrices)
        if (!is_contracting(m)) {
            ds.all_contracting = false;
            break;
        }
    return ds;
}

std::vector<OrderedKey> enumerate_keys(int n, int m) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
    if (m < 0 || m >= n)
        throw Error(ErrorKind::InvalidInput, "key level must satisfy 0 <= m < n");

    std::vector<OrderedKey> keys;
    std::vector<int> head(m);
    // Heads are the m-subsets of 1..n in lexicographic order.
    auto emit_with_pivots = [&](const std::vector<int>& h) {
        for (int pivot = 1; pivot <= n; ++pivot) {
            if (std::find(h.begin(), h.end(), pivot) != h.end()) continue;
            keys.push_back(OrderedKey{h, pivot});
        }
    };
    if (m == 0) {
        emit_with_pivots({});
        return keys;
    }
    for (int i = 0; i < m; ++i) head[i] = i + 1;
    while (true) {
        emit_with_pivots(head);
        int i = m - 1;
        while (i >= 0 && head[i] == n - (m - 1 - i)) --i;
        if (i < 0) break;
        ++head[i];
        for (int j = i + 1; j < m; ++j) head[j] = head[j - 1] + 1;
    }
    return keys;
}

namespace {

void check_key(const DiagonalSystem& ds, const OrderedKey& key) {
    const int m = key.level();
    if (m >= ds.n)
        throw Error(ErrorKind::InvalidInput, "key head is too large for the system");
    int prev = 0;
    for (int l : key.head) {
        if (l < 1 || l > ds.n || l <= prev)
            throw Error(ErrorKind::InvalidInput, "key head must be sorted within 1..n");
        prev = l;
    }
    if (key.pivot < 1 || key.pivot > ds.n)
        throw Error(ErrorKind::InvalidInput, "key pivot must lie in 1..n");
    if (std::find(key.head.begin(), key.head.end(), key.pivot) != key.head.end())
        throw Error(ErrorKind::InvalidInput, "key pivot cannot also be a head coordinate");
}

void check_interval(const OrderedKey& key, double s) {
    const double m = key.level();
    if (!(s >= m - 1e-9) || !(s <= m + 1.0 + 1e-9))
        throw Error(ErrorKind::InvalidInput,
                    "s must lie in [m, m+1] for a level-m key");
}

double log_ordered_svf(const DiagonalSystem& ds, const OrderedKey& key, int i, double s) {
    const int m = key.level();
    double acc = 0.0;
    for (int l : key.head) acc += ds.log_entry(i, l);
    acc += (s - m) * ds.log_entry(i, key.pivot);
    return acc;
}

}  // namespace

double ordered_svf(const DiagonalSystem& ds, const OrderedKey& key, int i, double s) {
    check_key(ds, key);
    check_interval(key, s);
    if (i < 0 || i >= ds.count())
        throw Error(ErrorKind::InvalidInput, "matrix index out of range");
    return std::exp(log_ordered_svf(ds, key, i, s));
}

double ordered_svf_word(const DiagonalSystem& ds, const OrderedKey& key,
                        const std::vector<int>& word, double s) {
    check_key(ds, key);
    check_interval(key, s);
    if (word.empty())
        throw Error(ErrorKind::InvalidInput, "word must be non-empty");
    // Each coordinate of a diagonal product is the product over the word, so
    // the ordered value of the word is the product of per-letter values.
    double acc = 0.0;
    for (int i : word) {
        if (i < 0 || i >= ds.count())
            throw Error(ErrorKind::InvalidInput, "word index out of range");
        acc += log_ordered_svf(ds, key, i, s);
    }
    return std::exp(acc);
}

DirichletPolynomial ordered_pressure_poly(const DiagonalSystem& ds, const OrderedKey& key) {
    check_key(ds, key);
    const int m = key.level();
    std::vector<DirichletTerm> terms;
    terms.reserve(ds.count());
    for (int i = 0; i < ds.count(); ++i) {
        DirichletTerm t;
        t.sign = 1;
        double la = 0.0;
        for (int l : key.head) la += ds.log_entry(i, l);
        t.log_abs_coeff = la - m * ds.log_entry(i, key.pivot);
        t.log_base = ds.log_entry(i, key.pivot);
        terms.push_back(t);
    }
    return make_polynomial(std::move(terms));
}

double ordered_pressure_eval(const DiagonalSystem& ds, const OrderedKey& key, double s) {
    check_key(ds, key);
    check_interval(key, s);
    return log_sum_eval(ordered_pressure_poly(ds, key), s);
}

MatrixSystem to_matrix_system(const DiagonalSystem& ds) {
    std::vector<Matrix> matrices;
    matrices.reserve(ds.rows.size());
    for (const std::vector<double>& row : ds.rows)
        matrices.push_back(Matrix::diagonal(row));
    return MatrixSystem::create(std::move(matrices), ds.labels);
}

}  // namespace svp
