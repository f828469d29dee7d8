#include "svp/system_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace svp {

namespace {

using nlohmann::json;

std::vector<std::vector<double>> parse_rows(const json& node, int n, int rows,
                                            const char* what) {
    if (!node.is_array() || static_cast<int>(node.size()) != rows)
        throw Error(ErrorKind::InvalidInput,
                    std::string(what) + " must be an array with one row per matrix");
    std::vector<std::vector<double>> out;
    for (const json& row : node) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw Error(ErrorKind::InvalidInput,
                        std::string(what) + " rows must have length n");
        std::vector<double> values;
        for (const json& v : row) {
            if (!v.is_number())
                throw Error(ErrorKind::InvalidInput,
                            std::string(what) + " entries must be numbers");
            const double d = v.get<double>();
            if (!std::isfinite(d))
                throw Error(ErrorKind::InvalidInput,
                            std::string(what) + " entries must be finite");
            values.push_back(d);
        }
        out.push_back(std::move(values));
    }
    return out;
}

std::vector<std::vector<double>> parse_square(const json& node, int n, const char* what) {
    return parse_rows(node, n, n, what);
}

}  // namespace

SystemFile parse_system_file(const json& doc) {
    if (!doc.is_object())
        throw Error(ErrorKind::InvalidInput, "system file must be a JSON object");
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw Error(ErrorKind::InvalidInput, "system file needs an integer field n");

    SystemFile file;
    file.n = doc["n"].get<int>();
    if (file.n < 1)
        throw Error(ErrorKind::InvalidInput, "n must be a positive integer");

    const bool has_matrices = doc.contains("matrices");
    const bool has_diagonals = doc.contains("diagonals");
    if (has_matrices == has_diagonals)
        throw Error(ErrorKind::InvalidInput,
                    "provide exactly one of \"matrices\" or \"diagonals\"");

    if (has_matrices) {
        const json& ms = doc["matrices"];
        if (!ms.is_array() || ms.empty())
            throw Error(ErrorKind::InvalidInput, "matrices must be a non-empty array");
        for (const json& m : ms)
            file.matrices.push_back(parse_square(m, file.n, "matrix"));
    } else {
        const json& ds = doc["diagonals"];
        if (!ds.is_array() || ds.empty())
            throw Error(ErrorKind::InvalidInput, "diagonals must be a non-empty array");
        file.diagonals = parse_rows(ds, file.n, static_cast<int>(ds.size()), "diagonals");
    }

    if (doc.contains("basis")) {
        if (file.diagonal_form())
            throw Error(ErrorKind::InvalidInput,
                        "the diagonal-only form does not accept a basis");
        file.basis = parse_square(doc["basis"], file.n, "basis");
    }

    if (doc.contains("labels")) {
        const json& ls = doc["labels"];
        const std::size_t count = has_matrices ? file.matrices.size() : file.diagonals.size();
        if (!ls.is_array() || ls.size() != count)
            throw Error(ErrorKind::InvalidInput, "labels must list one string per matrix");
        for (const json& l : ls) {
            if (!l.is_string())
                throw Error(ErrorKind::InvalidInput, "labels must be strings");
            file.labels.push_back(l.get<std::string>());
        }
    }
    return file;
}

SystemFile load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::InvalidInput, "cannot open system file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput,
                    "system file is not valid JSON: " + std::string(e.what()));
    }
    return parse_system_file(doc);
}

json to_json(const SystemFile& file) {
    json doc;
    doc["n"] = file.n;
    if (file.diagonal_form())
        doc["diagonals"] = file.diagonals;
    else
        doc["matrices"] = file.matrices;
    if (file.basis) doc["basis"] = *file.basis;
    if (!file.labels.empty()) doc["labels"] = file.labels;
    return doc;
}

std::vector<std::string> builtin_example_names() {
    return {"fraser-ex1", "fraser-ex2", "fraser-ex3", "fraser-7x7"};
}

SystemFile builtin_example(const std::string& name) {
    SystemFile file;
    file.labels = {"T1", "T2"};
    if (name == "fraser-ex1") {
        file.n = 3;
        file.diagonals = {{0.9, 0.4, 0.6}, {0.1, 0.4, 0.2}};
    } else if (name == "fraser-ex2") {
        file.n = 3;
        file.diagonals = {{0.1, 0.2, 0.9}, {0.9, 0.4, 0.2}};
    } else if (name == "fraser-ex3") {
        file.n = 3;
        file.diagonals = {{0.9, 0.5, 0.8}, {0.9, 0.5, 0.01}};
    } else if (name == "fraser-7x7") {
        file.n = 7;
        file.matrices = {
            {{2, -6, 15, 0, -2, 0, 2},
             {0, -1, 0, 1, -6, 0, 0},
             {0, 0, 10, 4, 9, 6, 0},
             {0, 0, 0, 8, -2, 0, 1},
             {0, 0, 0, 0, -5, -3, 4},
             {0, 0, 0, 0, 0, 7, 7},
             {0, 0, 0, 0, 0, 0, 4}},
            {{3, 2, 5, 0, -6, -4, 2},
             {0, 1, 2, 8, 6, 1, 6},
             {0, 0, -14, 1, 1, 13, 3},
             {0, 0, 0, 11, 9, 0, 9},
             {0, 0, 0, 0, 4, 10, 1},
             {0, 0, 0, 0, 0, -15, -5},
             {0, 0, 0, 0, 0, 0, 2}}};
    } else {
        throw Error(ErrorKind::InvalidInput, "unknown example name: " + name);
    }
    return file;
}

MatrixSystem to_matrix_system(const SystemFile& file) {
    std::vector<Matrix> matrices;
    if (file.diagonal_form()) {
        for (const std::vector<double>& d : file.diagonals)
            matrices.push_back(Matrix::diagonal(d));
    } else {
        for (const std::vector<std::vector<double>>& rows : file.matrices) {
            std::vector<double> flat;
            flat.reserve(static_cast<std::size_t>(file.n) * file.n);
            for (const std::vector<double>& row : rows)
                flat.insert(flat.end(), row.begin(), row.end());
            matrices.emplace_back(file.n, std::move(flat));
        }
    }
    return MatrixSystem::create(std::move(matrices), file.labels);
}

DiagonalSystem to_diagonal_system(const SystemFile& file,
                                  const std::optional<Matrix>& basis_override,
                                  double tol) {
    if (file.diagonal_form() && !basis_override)
        return DiagonalSystem::from_values(file.diagonals, file.labels);

    std::optional<Matrix> basis = basis_override;
    if (!basis && file.basis) {
        std::vector<double> flat;
        for (const std::vector<double>& row : *file.basis)
            flat.insert(flat.end(), row.begin(), row.end());
        basis = Matrix(file.n, std::move(flat));
    }
    return reduce_to_diagonal(to_matrix_system(file), basis, tol);
}

std::string format_curve_csv(const CurveTable& table) {
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };

    std::ostringstream out;
    out << "s,P";
    for (const CurveColumn& col : table.columns) out << ',' << col.key.serial();
    out << ",active\n";
    for (std::size_t r = 0; r < table.s.size(); ++r) {
        out << fmt(table.s[r]) << ',' << fmt(table.pressure[r]);
        for (const std::optional<double>& v : table.values[r]) {
            out << ',';
            if (v) out << fmt(*v);
        }
        out << ',' << table.active[r] << '\n';
    }
    return out.str();
}

}  // namespace svp
