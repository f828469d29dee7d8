#include "svp/svf_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace svp {

namespace {

void check_s_range(const MatrixSystem& system, double s) {
    if (!(s >= 0.0) || !(s < system.n))
        throw Error(ErrorKind::InvalidInput,
                    "the singular value function needs 0 <= s < n");
}

void check_word(const MatrixSystem& system, const Word& word) {
    if (word.indices.empty())
        throw Error(ErrorKind::InvalidInput, "word must be non-empty");
    for (int i : word.indices)
        if (i < 0 || i >= system.count())
            throw Error(ErrorKind::InvalidInput, "word index out of range");
}

// phi^s from the logs of singular values sorted in descending order.
double log_phi_from_logs(const std::vector<double>& log_sv, double s) {
    const int m = static_cast<int>(std::floor(s));
    double acc = 0.0;
    for (int l = 0; l < m; ++l) acc += log_sv[l];
    acc += (s - m) * log_sv[m];
    return acc;
}

double log_factorial(int n) {
    double acc = 0.0;
    for (int i = 2; i <= n; ++i) acc += std::log(static_cast<double>(i));
    return acc;
}

}  // namespace

double log_phi(const MatrixSystem& system, const Word& word, double s) {
    check_s_range(system, s);
    check_word(system, word);
    Matrix product = system.matrices[word.indices.front()];
    for (std::size_t j = 1; j < word.indices.size(); ++j)
        product = multiply(product, system.matrices[word.indices[j]]);
    const std::vector<double> sv = singular_values(product);
    std::vector<double> logs(sv.size());
    for (std::size_t l = 0; l < sv.size(); ++l) logs[l] = std::log(sv[l]);
    return log_phi_from_logs(logs, s);
}

double phi(const MatrixSystem& system, const Word& word, double s) {
    return std::exp(log_phi(system, word, s));
}

OracleEstimate finite_k_pressure(const MatrixSystem& system, double s, int k,
                                 std::optional<double> closed_form_lower,
                                 std::uint64_t cap) {
    check_s_range(system, s);
    if (k < 1) throw Error(ErrorKind::InvalidInput, "word length k must be at least 1");

    const int count = system.count();
    std::uint64_t total = 1;
    for (int j = 0; j < k; ++j) {
        if (total > cap / static_cast<std::uint64_t>(count))
            throw Error(ErrorKind::ResourceCap,
                        "word enumeration would exceed the configured cap");
        total *= static_cast<std::uint64_t>(count);
    }
    if (total > cap)
        throw Error(ErrorKind::ResourceCap,
                    "word enumeration would exceed the configured cap");

    const int n = system.n;
    bool diagonal = true;
    for (const Matrix& m : system.matrices)
        diagonal = diagonal && is_diagonal(m, 0.0);

    std::vector<double> log_values;
    log_values.reserve(total);

    if (diagonal) {
        // Per-coordinate log products accumulate along the word; the product
        // matrix never needs to be formed.
        std::vector<std::vector<double>> log_diag(count, std::vector<double>(n));
        for (int i = 0; i < count; ++i)
            for (int l = 0; l < n; ++l)
                log_diag[i][l] = std::log(std::abs(system.matrices[i](l, l)));

        std::vector<double> prefix(n, 0.0);
        std::vector<double> sorted(n);
        std::function<void(int)> walk = [&](int depth) {
            if (depth == k) {
                sorted = prefix;
                std::sort(sorted.begin(), sorted.end(), std::greater<double>());
                log_values.push_back(log_phi_from_logs(sorted, s));
                return;
            }
            for (int i = 0; i < count; ++i) {
                for (int l = 0; l < n; ++l) prefix[l] += log_diag[i][l];
                walk(depth + 1);
                for (int l = 0; l < n; ++l) prefix[l] -= log_diag[i][l];
            }
        };
        walk(0);
    } else {
        std::vector<Matrix> prefix(k + 1);
        prefix[0] = Matrix::identity(n);
        std::vector<double> logs(n);
        std::function<void(int)> walk = [&](int depth) {
            if (depth == k) {
                const std::vector<double> sv = singular_values(prefix[k]);
                for (int l = 0; l < n; ++l) logs[l] = std::log(sv[l]);
                log_values.push_back(log_phi_from_logs(logs, s));
                return;
            }
            for (int i = 0; i < count; ++i) {
                prefix[depth + 1] = multiply(prefix[depth], system.matrices[i]);
                walk(depth + 1);
            }
        };
        walk(0);
    }

    double shift = -std::numeric_limits<double>::infinity();
    for (double v : log_values) shift = std::max(shift, v);
    double sum = 0.0;
    for (double v : log_values) sum += std::exp(v - shift);

    OracleEstimate est;
    est.k = k;
    est.value = (shift + std::log(sum)) / k;
    const double slack = log_factorial(n) / k;
    if (closed_form_lower) {
        est.lower = *closed_form_lower;
        est.upper = *closed_form_lower + slack;
    } else {
        est.lower = est.value - slack;
        est.upper = est.value;
    }
    return est;
}

double det_pressure(const MatrixSystem& system, double s) {
    if (!(s >= system.n))
        throw Error(ErrorKind::InvalidInput,
                    "the determinant branch of the pressure needs s >= n");
    const double n = system.n;
    std::vector<double> log_terms;
    log_terms.reserve(system.matrices.size());
    for (const Matrix& m : system.matrices) {
        const double det = determinant(m);
        if (det == 0.0)
            throw Error(ErrorKind::InvalidInput, "determinant vanished");
        log_terms.push_back((s / n) * std::log(std::abs(det)));
    }
    const double shift = *std::max_element(log_terms.begin(), log_terms.end());
    double sum = 0.0;
    for (double v : log_terms) sum += std::exp(v - shift);
    return shift + std::log(sum);
}

}  // namespace svp
