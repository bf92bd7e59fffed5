#pragma once

#include <json.hpp>

#include "liesym/liealg.hpp"
#include "liesym/model.hpp"

namespace liesym {

inline constexpr const char* kToolVersion = "liesym 1.0.0";

using Json = nlohmann::ordered_json;

std::string fnv1a64_hex(const std::string& bytes);

/// Structured expression form used by the CLI reports:
/// {"terms": [{"coeff": "p/q", "atoms": [{"atom": "D(U,x)", "power": 2}, ...]}]}.
Json expr_json(const Expr& e);

struct ReportSection {
  std::string name;
  std::string text;
  Json data;
};

/// Deterministic analysis report: identical input and options produce
/// byte-identical text and JSON.
struct Report {
  std::string input_name;
  std::string input_hash;
  std::vector<std::pair<std::string, std::string>> options;
  std::vector<ReportSection> sections;

  std::string render_text() const;
  Json render_json() const;
};

struct ReportMeta {
  std::string input_name;
  std::string input_hash;
};

Report symmetries_report(const Model& m, const ReportMeta& meta, int degree, bool parallel);
Report verify_report(const Model& m, const ReportMeta& meta, const std::vector<std::string>& names,
                     int oracle_trials);
Report algebra_report(const Model& m, const ReportMeta& meta);
Report algebra_report_from_table(const LieAlgebra& g, const ReportMeta& meta);
Report optimal_report(const Model& m, const ReportMeta& meta, int dim);
Report reduce_report(const Model& m, const ReportMeta& meta, const std::string& field_expr);

/// Basis used by the algebra/optimal commands: the declared fields when at
/// least two are present, otherwise the solver's canonical basis.
FieldsAlgebra model_algebra(const Model& m);

/// Structure constants from a JSON file {"labels": [...], "entries":
/// [{"i":3,"j":4,"k":3,"c":"1"}, ...]} (1-based, antisymmetric closure).
LieAlgebra algebra_from_json_file(const std::string& path);

}  // namespace liesym
