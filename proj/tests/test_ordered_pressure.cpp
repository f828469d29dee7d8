#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "svp/ordered_pressure.hpp"
#include "svp/system_io.hpp"

using namespace svp;

namespace {

DiagonalSystem two_by_two_pair() {
    // diag(0.9, 0.4) and diag(0.6, 0.2)
    return DiagonalSystem::from_values({{0.9, 0.4}, {0.6, 0.2}});
}

DiagonalSystem three_by_three_pair() {
    return DiagonalSystem::from_values({{0.8, 0.5, 0.3}, {0.7, 0.4, 0.2}});
}

OrderedKey make_key(std::vector<int> head, int pivot) {
    OrderedKey k;
    k.head = std::move(head);
    k.pivot = pivot;
    return k;
}

double level_max(const DiagonalSystem& ds, int m, double s) {
    double best = -1e300;
    for (const OrderedKey& key : enumerate_keys(ds.n, m))
        best = std::max(best, ordered_pressure_eval(ds, key, s));
    return best;
}

}  // namespace

TEST_CASE("from_values validates and normalises") {
    CHECK_THROWS_AS(DiagonalSystem::from_values({}), Error);
    CHECK_THROWS_AS(DiagonalSystem::from_values({{0.5, 0.2}, {0.3}}), Error);
    CHECK_THROWS_AS(DiagonalSystem::from_values({{0.5, 0.0}}), Error);

    const DiagonalSystem ds = DiagonalSystem::from_values({{-0.9, 0.4}});
    CHECK(ds.entry(0, 1) == doctest::Approx(0.9));  // absolute value taken
    CHECK(ds.log_entry(0, 1) == doctest::Approx(std::log(0.9)));
    CHECK(ds.all_contracting);

    const DiagonalSystem big = DiagonalSystem::from_values({{1.5, 0.4}});
    CHECK_FALSE(big.all_contracting);
}

TEST_CASE("reduction accepts diagonal and triangular systems") {
    SUBCASE("already diagonal") {
        const MatrixSystem sys = MatrixSystem::create(
            {Matrix::diagonal({0.9, 0.4}), Matrix::diagonal({0.6, 0.2})});
        const DiagonalSystem ds = reduce_to_diagonal(sys);
        CHECK(ds.n == 2);
        CHECK(ds.entry(0, 1) == doctest::Approx(0.9));
        CHECK(ds.entry(1, 2) == doctest::Approx(0.2));
        CHECK(ds.all_contracting);
    }
    SUBCASE("upper triangular keeps the diagonal") {
        const MatrixSystem sys = MatrixSystem::create(
            {Matrix(2, {0.5, 0.3, 0.0, 0.25})});
        const DiagonalSystem ds = reduce_to_diagonal(sys);
        CHECK(ds.entry(0, 1) == doctest::Approx(0.5));
        CHECK(ds.entry(0, 2) == doctest::Approx(0.25));
    }
    SUBCASE("lower triangular works too") {
        const MatrixSystem sys = MatrixSystem::create(
            {Matrix(2, {0.5, 0.0, 0.3, 0.25})});
        const DiagonalSystem ds = reduce_to_diagonal(sys);
        CHECK(ds.entry(0, 1) == doctest::Approx(0.5));
    }
    SUBCASE("mixed triangularity is rejected") {
        const MatrixSystem sys = MatrixSystem::create(
            {Matrix(2, {0.5, 0.3, 0.0, 0.25}), Matrix(2, {0.5, 0.0, 0.3, 0.25})});
        CHECK_THROWS_AS(reduce_to_diagonal(sys), Error);
    }
    SUBCASE("a rotation cannot be reduced without a basis") {
        const MatrixSystem sys = MatrixSystem::create(
            {Matrix(2, {0.0, -0.5, 0.5, 0.0})});
        try {
            reduce_to_diagonal(sys);
            FAIL("expected a precondition error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Precondition);
        }
    }
    SUBCASE("a basis unlocks a conjugated system") {
        const Matrix basis(2, {1.0, 1.0, 0.0, 1.0});
        const Matrix hidden = multiply(
            basis, multiply(Matrix::diagonal({0.8, 0.2}), inverse(basis)));
        const MatrixSystem sys = MatrixSystem::create({hidden});
        const DiagonalSystem ds = reduce_to_diagonal(sys, basis);
        CHECK(ds.entry(0, 1) == doctest::Approx(0.8));
        CHECK(ds.entry(0, 2) == doctest::Approx(0.2));
    }
    SUBCASE("contraction is judged on the original matrices") {
        // Strong shear: diagonal entries small, but the matrix expands.
        const MatrixSystem sys = MatrixSystem::create(
            {Matrix(2, {0.5, 10.0, 0.0, 0.5})});
        const DiagonalSystem ds = reduce_to_diagonal(sys);
        CHECK_FALSE(ds.all_contracting);
    }
}

TEST_CASE("key enumeration counts and shape") {
    SUBCASE("n=3 per-level counts are 3, 6, 3") {
        CHECK(enumerate_keys(3, 0).size() == 3);
        CHECK(enumerate_keys(3, 1).size() == 6);
        CHECK(enumerate_keys(3, 2).size() == 3);
    }
    SUBCASE("n=7, m=3 gives 7 * C(6,3) = 140") {
        const auto keys = enumerate_keys(7, 3);
        CHECK(keys.size() == 140);
        std::set<std::string> serials;
        for (const auto& k : keys) {
            CHECK(static_cast<int>(k.head.size()) == 3);
            CHECK(k.level() == 3);
            for (int h : k.head) CHECK(h != k.pivot);
            serials.insert(k.serial());
        }
        CHECK(serials.size() == keys.size());  // all distinct
    }
    SUBCASE("serial format") {
        CHECK(make_key({3, 4, 6}, 5).serial() == "{3 4 6}/5");
        CHECK(make_key({}, 2).serial() == "{}/2");
    }
    SUBCASE("bad arguments throw") {
        CHECK_THROWS_AS(enumerate_keys(0, 0), Error);
        CHECK_THROWS_AS(enumerate_keys(3, 3), Error);
        CHECK_THROWS_AS(enumerate_keys(3, -1), Error);
    }
}

TEST_CASE("ordered value function on single letters") {
    const DiagonalSystem ds = two_by_two_pair();
    const OrderedKey head1 = make_key({1}, 2);
    // Matrix 0 = diag(.9,.4): value at s in [1,2] is .9 * .4^(s-1).
    CHECK(ordered_svf(ds, head1, 0, 1.0) == doctest::Approx(0.9));
    CHECK(ordered_svf(ds, head1, 0, 1.5) == doctest::Approx(0.9 * std::sqrt(0.4)));
    CHECK(ordered_svf(ds, head1, 0, 2.0) == doctest::Approx(0.9 * 0.4));

    const OrderedKey head2 = make_key({2}, 1);
    // Uses coordinate 2 first: .4 * .9^(s-1).
    CHECK(ordered_svf(ds, head2, 0, 1.0) == doctest::Approx(0.4));
    CHECK(ordered_svf(ds, head2, 0, 2.0) == doctest::Approx(0.4 * 0.9));
}

TEST_CASE("ordered value function is multiplicative over words") {
    const DiagonalSystem ds = three_by_three_pair();
    for (int m = 0; m < 3; ++m) {
        for (const OrderedKey& key : enumerate_keys(3, m)) {
            for (double s : {static_cast<double>(m), m + 0.3, m + 1.0}) {
                const std::vector<int> word = {0, 1, 1, 0};
                double prod = 1.0;
                for (int letter : word) prod *= ordered_svf(ds, key, letter, s);
                CHECK(ordered_svf_word(ds, key, word, s) ==
                      doctest::Approx(prod).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("per-key pressure polynomial matches direct evaluation") {
    const DiagonalSystem ds = two_by_two_pair();
    const OrderedKey key = make_key({1}, 2);
    const DirichletPolynomial p = ordered_pressure_poly(ds, key);
    // Sum over both matrices of c_{i,1} * c_{i,2}^(s-1):
    //   matrix 0: .9 * .4^(s-1),  matrix 1: .6 * .2^(s-1).
    for (double s : {1.0, 1.4, 2.0}) {
        const double direct =
            0.9 * std::pow(0.4, s - 1.0) + 0.6 * std::pow(0.2, s - 1.0);
        CHECK(eval(p, s) == doctest::Approx(direct).epsilon(1e-12));
    }
    // Coefficient structure: a_i = prod(head) / pivot^m, base = pivot value.
    REQUIRE(p.term_count() == 2);
    CHECK(std::exp(p.terms[0].log_abs_coeff) == doctest::Approx(0.9 / 0.4));
    CHECK(p.terms[0].log_base == doctest::Approx(std::log(0.4)));

    // The log evaluator agrees on the closed interval.
    for (double s : {1.0, 1.7, 2.0})
        CHECK(ordered_pressure_eval(ds, key, s) ==
              doctest::Approx(std::log(eval(p, s))).epsilon(1e-12));
}

TEST_CASE("equal coordinate values merge inside the polynomial") {
    // With both matrices sharing the base value on the pivot coordinate the
    // two terms share a base and collapse to one.
    const DiagonalSystem ds = DiagonalSystem::from_values({{0.5, 0.5}, {0.5, 0.5}});
    const DirichletPolynomial p = ordered_pressure_poly(ds, make_key({1}, 2));
    REQUIRE(p.term_count() == 1);
    CHECK(std::exp(p.terms[0].log_abs_coeff) == doctest::Approx(2.0));
    CHECK(p.terms[0].log_base == doctest::Approx(std::log(0.5)));
}

TEST_CASE("level maxima join continuously at integer points") {
    // At s = m the best level-(m-1) value and the best level-m value agree:
    // both reduce to the largest m-entry product sum.
    const DiagonalSystem ds = three_by_three_pair();
    for (int m = 1; m < 3; ++m) {
        const double left = level_max(ds, m - 1, static_cast<double>(m));
        const double right = level_max(ds, m, static_cast<double>(m));
        CHECK(left == doctest::Approx(right).epsilon(1e-12));
    }
}

TEST_CASE("per-key evaluation rejects out-of-interval arguments") {
    const DiagonalSystem ds = two_by_two_pair();
    CHECK_THROWS_AS(ordered_pressure_eval(ds, make_key({}, 1), 1.5), Error);
    CHECK_THROWS_AS(ordered_pressure_eval(ds, make_key({1}, 2), 0.5), Error);
    CHECK_NOTHROW(ordered_pressure_eval(ds, make_key({}, 1), 1.0));  // closed end
    CHECK_NOTHROW(ordered_pressure_eval(ds, make_key({1}, 2), 1.0));
}

TEST_CASE("keys validate against the system") {
    const DiagonalSystem ds = two_by_two_pair();
    CHECK_THROWS_AS(ordered_svf(ds, make_key({1}, 3), 0, 1.5), Error);
    CHECK_THROWS_AS(ordered_svf(ds, make_key({1}, 1), 0, 1.5), Error);
    CHECK_THROWS_AS(ordered_svf(ds, make_key({1}, 2), 5, 1.5), Error);
}

TEST_CASE("round trip through a matrix system") {
    const DiagonalSystem ds = two_by_two_pair();
    const MatrixSystem sys = to_matrix_system(ds);
    CHECK(sys.n == 2);
    CHECK(sys.count() == 2);
    CHECK(sys.matrices[0](0, 0) == doctest::Approx(0.9));
    CHECK(sys.matrices[1](1, 1) == doctest::Approx(0.2));
    const DiagonalSystem back = reduce_to_diagonal(sys);
    for (int i = 0; i < 2; ++i)
        for (int l = 1; l <= 2; ++l)
            CHECK(back.entry(i, l) == doctest::Approx(ds.entry(i, l)));
}

TEST_CASE("builtin 7x7 pair reduces to its absolute diagonals") {
    const SystemFile file = builtin_example("fraser-7x7");
    const MatrixSystem sys = to_matrix_system(file);
    CHECK(sys.n == 7);
    const DiagonalSystem ds = reduce_to_diagonal(sys);
    CHECK(ds.n == 7);
    CHECK_FALSE(ds.all_contracting);  // integer entries well above 1

    const std::vector<double> expect0 = {2, 1, 10, 8, 5, 7, 4};
    const std::vector<double> expect1 = {3, 1, 14, 11, 4, 15, 2};
    for (int l = 1; l <= 7; ++l) {
        CHECK(ds.entry(0, l) == doctest::Approx(expect0[l - 1]));
        CHECK(ds.entry(1, l) == doctest::Approx(expect1[l - 1]));
    }
}
