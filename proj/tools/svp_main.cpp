// svp: closed forms, phase transitions and affinity dimension for the
// subadditive singular-value pressure of triangularisable matrix systems,
// with a finite-word oracle for cross-checking.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svp/analysis.hpp"
#include "svp/svf_oracle.hpp"
#include "svp/system_io.hpp"

using nlohmann::json;

namespace {

int exit_code_for(svp::ErrorKind kind) {
    switch (kind) {
        case svp::ErrorKind::InvalidInput: return 2;
        case svp::ErrorKind::Precondition: return 3;
        case svp::ErrorKind::ResourceCap: return 4;
        case svp::ErrorKind::Internal: return 1;
    }
    return 1;
}

std::optional<svp::Matrix> load_basis(const std::string& path, int n) {
    if (path.empty()) return std::nullopt;
    std::ifstream in(path);
    if (!in) throw svp::Error(svp::ErrorKind::InvalidInput, "cannot open basis file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw svp::Error(svp::ErrorKind::InvalidInput,
                         "basis file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_array() || static_cast<int>(doc.size()) != n)
        throw svp::Error(svp::ErrorKind::InvalidInput, "basis must be an n-by-n row array");
    std::vector<double> flat;
    for (const json& row : doc) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw svp::Error(svp::ErrorKind::InvalidInput, "basis rows must have length n");
        for (const json& v : row) {
            if (!v.is_number())
                throw svp::Error(svp::ErrorKind::InvalidInput, "basis entries must be numbers");
            flat.push_back(v.get<double>());
        }
    }
    return svp::Matrix(n, std::move(flat));
}

json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

void emit(const json& doc, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw svp::Error(svp::ErrorKind::InvalidInput, "cannot write to " + out_path);
    out << doc.dump(2) << "\n";
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw svp::Error(svp::ErrorKind::InvalidInput, "cannot write to " + out_path);
    out << text;
}

struct CommonOptions {
    std::string file;
    std::string basis_path;
    double tol = svp::kTriangularTol;
    int grid = svp::kDefaultGridPerUnit;
};

svp::DiagonalSystem reduce(const CommonOptions& common) {
    const svp::SystemFile file = svp::load_system_file(common.file);
    return svp::to_diagonal_system(file, load_basis(common.basis_path, file.n), common.tol);
}

void add_common(CLI::App* cmd, CommonOptions& common, bool with_grid = true) {
    cmd->add_option("file", common.file, "system description (JSON)")->required();
    cmd->add_option("--basis", common.basis_path,
                    "conjugating basis as a JSON row array; overrides the file's basis");
    cmd->add_option("--tol", common.tol, "triangularity tolerance");
    if (with_grid)
        cmd->add_option("--grid", common.grid, "envelope scan points per unit interval");
}

json transition_json(const svp::PhaseTransition& t) {
    return json{{"s", t.s},
                {"kind", svp::to_string(t.kind)},
                {"left_derivative", number_or_null(t.left_derivative)},
                {"right_derivative", number_or_null(t.right_derivative)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subadditive singular-value pressure for triangularisable systems"};
    app.require_subcommand(1);

    CommonOptions common;
    double s_value = 0.0;
    double curve_lo = 0.0, curve_hi = 0.0;
    int points = 201;
    int word_len = 8;
    int level = 0;
    int bound_n = 0, bound_count = 0;
    std::uint64_t cap = svp::kDefaultEnumerationCap;
    std::string out_path;
    std::string format = "json";
    std::string example_name;

    CLI::App* cmd_eval = app.add_subcommand("eval", "pressure and one-sided derivatives at s");
    add_common(cmd_eval, common);
    cmd_eval->add_option("s", s_value, "evaluation point")->required();

    CLI::App* cmd_transitions =
        app.add_subcommand("transitions", "locate and classify all phase transitions");
    add_common(cmd_transitions, common);
    cmd_transitions->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* cmd_dimension = app.add_subcommand("dimension", "affinity dimension");
    add_common(cmd_dimension, common);

    CLI::App* cmd_curve = app.add_subcommand("curve", "tabulate the pressure over [lo, hi]");
    add_common(cmd_curve, common);
    cmd_curve->add_option("lo", curve_lo, "range start")->required();
    cmd_curve->add_option("hi", curve_hi, "range end")->required();
    cmd_curve->add_option("--points", points, "number of grid points");
    cmd_curve->add_option("--out", out_path, "output path (default stdout)");
    std::string curve_format = "csv";
    cmd_curve->add_option("--format", curve_format, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* cmd_oracle =
        app.add_subcommand("oracle", "finite-word estimate with the closed-form cross-check");
    add_common(cmd_oracle, common, /*with_grid=*/false);
    cmd_oracle->add_option("s", s_value, "evaluation point")->required();
    cmd_oracle->add_option("--k", word_len, "word length");
    cmd_oracle->add_option("--cap", cap, "enumeration ceiling");

    CLI::App* cmd_bound = app.add_subcommand("bound", "phase transition count bound");
    cmd_bound->add_option("n", bound_n, "dimension")->required();
    cmd_bound->add_option("count", bound_count, "number of matrices")->required();

    CLI::App* cmd_check =
        app.add_subcommand("check", "search for a single dominant coordinate order on [m, m+1]");
    add_common(cmd_check, common, /*with_grid=*/false);
    cmd_check->add_option("m", level, "interval level")->required();

    CLI::App* cmd_example = app.add_subcommand("example", "write a built-in example system");
    cmd_example->add_option("name", example_name, "fraser-ex1 | fraser-ex2 | fraser-ex3 | fraser-7x7")
        ->required();
    cmd_example->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*cmd_eval) {
            const svp::DiagonalSystem ds = reduce(common);
            if (!ds.all_contracting)
                std::cerr << "warning: system is not contracting; the pressure is still "
                             "well defined, the dimension is not\n";
            const svp::PressureProfile profile = svp::build_profile(ds, common.grid);
            if (!(s_value >= 0.0))
                throw svp::Error(svp::ErrorKind::InvalidInput, "s must be non-negative");
            const auto [left, right] = svp::one_sided_derivatives(profile, s_value);
            const svp::PressureSegment* seg = profile.segment_at(s_value);
            json doc{{"s", s_value},
                     {"pressure", profile.value(s_value)},
                     {"active", seg ? seg->key.serial() : "det"},
                     {"left_derivative", number_or_null(left)},
                     {"right_derivative", number_or_null(right)}};
            emit(doc, "");
        } else if (*cmd_transitions) {
            const svp::PressureProfile profile = svp::build_profile(reduce(common), common.grid);
            const std::vector<svp::PhaseTransition> transitions = svp::find_transitions(profile);
            if (format == "csv") {
                std::string text = "s,kind,left_derivative,right_derivative\n";
                for (const svp::PhaseTransition& t : transitions) {
                    char buf[160];
                    std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%.12g\n", t.s,
                                  svp::to_string(t.kind), t.left_derivative, t.right_derivative);
                    text += buf;
                }
                emit_text(text, "");
            } else {
                json list = json::array();
                for (const svp::PhaseTransition& t : transitions)
                    list.push_back(transition_json(t));
                emit(json{{"transitions", list}}, "");
            }
        } else if (*cmd_dimension) {
            const svp::PressureProfile profile = svp::build_profile(reduce(common), common.grid);
            emit(json{{"dimension", svp::affinity_dimension(profile)}}, "");
        } else if (*cmd_curve) {
            const svp::PressureProfile profile = svp::build_profile(reduce(common), common.grid);
            const svp::CurveTable table = svp::curve_data(profile, curve_lo, curve_hi, points);
            if (curve_format == "csv") {
                emit_text(svp::format_curve_csv(table), out_path);
            } else {
                json cols = json::array();
                for (const svp::CurveColumn& c : table.columns)
                    cols.push_back(json{{"level", c.level}, {"key", c.key.serial()}});
                json rows = json::array();
                for (std::size_t r = 0; r < table.s.size(); ++r) {
                    json vals = json::array();
                    for (const std::optional<double>& v : table.values[r])
                        vals.push_back(v ? json(*v) : json(nullptr));
                    rows.push_back(json{{"s", table.s[r]},
                                        {"P", table.pressure[r]},
                                        {"values", vals},
                                        {"active", table.active[r]}});
                }
                emit(json{{"columns", cols}, {"rows", rows}}, out_path);
            }
        } else if (*cmd_oracle) {
            const svp::SystemFile file = svp::load_system_file(common.file);
            const svp::MatrixSystem system =
                svp::to_matrix_system(file);
            bool diagonal = true;
            for (const svp::Matrix& m : system.matrices)
                diagonal = diagonal && svp::is_diagonal(m, 0.0);

            std::optional<double> closed;
            try {
                closed = svp::pressure(
                    svp::to_diagonal_system(file, load_basis(common.basis_path, file.n), common.tol),
                    s_value);
            } catch (const svp::Error& e) {
                if (e.kind() != svp::ErrorKind::Precondition) throw;
            }

            const svp::OracleEstimate est = svp::finite_k_pressure(
                system, s_value, word_len,
                diagonal ? closed : std::nullopt, cap);

            json doc{{"s", s_value},
                     {"k", est.k},
                     {"value", est.value},
                     {"lower", est.lower},
                     {"upper", est.upper}};
            if (closed) {
                doc["closed_form"] = *closed;
                const double slack = 1e-10;
                const double width = est.upper - est.lower;
                const bool pass = *closed <= est.value + slack &&
                                  est.value <= *closed + width + slack;
                doc["verdict"] = pass ? "PASS" : "FAIL";
            } else {
                doc["closed_form"] = nullptr;
                doc["verdict"] = "UNAVAILABLE";
            }
            emit(doc, "");
        } else if (*cmd_bound) {
            emit(json{{"n", bound_n},
                      {"count", bound_count},
                      {"bound", svp::transition_bound(bound_n, bound_count)}},
                 "");
        } else if (*cmd_check) {
            const svp::DiagonalSystem ds = reduce(common);
            const std::optional<svp::OrderedKey> key =
                svp::check_analyticity_condition(ds, level);
            json doc{{"m", level}, {"found", key.has_value()}};
            if (key) {
                doc["head"] = key->head;
                doc["pivot"] = key->pivot;
                doc["key"] = key->serial();
            }
            emit(doc, "");
        } else if (*cmd_example) {
            const svp::SystemFile file = svp::builtin_example(example_name);
            emit(svp::to_json(file), out_path);
        }
    } catch (const svp::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_code_for(err.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
