#pragma once

#include "liesym/detsys.hpp"
#include "liesym/dsl.hpp"

namespace liesym {

/// A parsed and lowered analysis input: declared symbols, the polynomial
/// system with solved forms, and the named candidate fields.
struct Model {
  Context ctx;
  SourceSpec spec;
  PDESystem system;
  std::vector<std::pair<std::string, VectorField>> fields;  // declaration order
  int ansatz_degree = 2;
  int prolong_order = 2;

  const VectorField* find_field(const std::string& name) const;
  /// Parses "v1", "v1+v2", "2*v1 - v3" over the declared field names.
  VectorField combination(const std::string& text) const;
};

/// Lowers a structured spec: clears parameter denominators by multiplying
/// equations through (parameters must be declared nonzero), builds the solved
/// forms, and validates the candidate fields.
Model build_model(const SourceSpec& spec);

/// Reads and lowers a .pde file.
Model load_model(const std::string& path);

}  // namespace liesym
