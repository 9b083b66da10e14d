#pragma once

// Text matrix files. Three layouts are accepted:
//
//   {"n": 3, "re": [[...], ...], "im": [[...], ...]}      dense, "im" optional
//   {"n": 3, "diag": [...]}                               real diagonal
//   {"n": 5, "span": [[...], ...], "span_im": [...]}      projection onto the span
//
// Entries may be numbers or expression strings such as "sqrt((sqrt(10)-1)/3)"
// or "1/alpha"; names are resolved against an optional "symbols" object whose
// values are themselves expressions, evaluated in order. An optional "dims"
// list records subsystem dimensions for bipartite inputs.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bjtrace/hermitian.hpp"

namespace bjtrace {

struct MatrixFile {
  CMatrix matrix;
  std::vector<int> dims;
};

/// Evaluates +, -, *, /, unary minus, parentheses, sqrt, decimal literals and names.
double evaluate_expression(const std::string& text, const std::map<std::string, double>& symbols = {});

/// Throws Error(BadInput) naming the offending field.
MatrixFile parse_matrix(const nlohmann::ordered_json& j);
MatrixFile read_matrix_file(const std::string& path);

/// Dense layout; numbers are written in shortest round-trip form.
nlohmann::ordered_json matrix_to_json(const CMatrix& m, const std::vector<int>& dims = {});
void write_matrix_file(const std::string& path, const CMatrix& m, const std::vector<int>& dims = {});

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string read_text(const std::string& path);

}  // namespace bjtrace
