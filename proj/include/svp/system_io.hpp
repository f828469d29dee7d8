#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "svp/analysis.hpp"
#include "svp/linalg.hpp"
#include "svp/ordered_pressure.hpp"

namespace svp {

/// On-disk description of a matrix system. Exactly one of `matrices`
/// (full n-by-n row arrays) or `diagonals` (entry lists of length n) is
/// present; `basis` is only allowed alongside `matrices`.
struct SystemFile {
    int n = 0;
    std::vector<std::vector<std::vector<double>>> matrices;
    std::vector<std::vector<double>> diagonals;
    std::optional<std::vector<std::vector<double>>> basis;
    std::vector<std::string> labels;

    bool diagonal_form() const noexcept { return !diagonals.empty(); }
};

SystemFile parse_system_file(const nlohmann::json& doc);
SystemFile load_system_file(const std::string& path);
nlohmann::json to_json(const SystemFile& file);

/// The built-in example systems: fraser-ex1, fraser-ex2, fraser-ex3
/// (3-dimensional diagonal pairs) and fraser-7x7 (a triangular pair).
SystemFile builtin_example(const std::string& name);
std::vector<std::string> builtin_example_names();

MatrixSystem to_matrix_system(const SystemFile& file);

/// Reduce the file's system to diagonal data, applying the file's basis or
/// the override (the override wins) when one is given.
DiagonalSystem to_diagonal_system(const SystemFile& file,
                                  const std::optional<Matrix>& basis_override = {},
                                  double tol = kTriangularTol);

/// Curve table as CSV: header "s,P,<key serials...>,active", LF line ends,
/// 12 significant digits, empty cells where a key's interval does not apply.
std::string format_curve_csv(const CurveTable& table);

}  // namespace svp
