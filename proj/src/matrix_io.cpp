#include "bjtrace/matrix_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bjtrace {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::BadInput, msg); }

class ExprParser {
 public:
  ExprParser(const std::string& text, const std::map<std::string, double>& symbols) : s_(text), symbols_(symbols) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  const std::string& s_;
  const std::map<std::string, double>& symbols_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    bad("cannot evaluate \"" + s_ + "\": " + what + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }

  double primary() {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "sqrt") {
        if (!eat('(')) fail("sqrt needs '('");
        const double v = sum();
        if (!eat(')')) fail("missing ')'");
        return std::sqrt(v);
      }
      const auto it = symbols_.find(name);
      if (it == symbols_.end()) fail("unknown name '" + name + "'");
      return it->second;
    }
    fail("unexpected character");
  }
};

double entry(const nlohmann::ordered_json& e, const std::map<std::string, double>& symbols, const std::string& where) {
  if (e.is_number()) return e.get<double>();
  if (e.is_string()) return evaluate_expression(e.get<std::string>(), symbols);
  bad(where + " must be a number or an expression string");
}

CMatrix real_rows(const nlohmann::ordered_json& rows, int rows_expected, int cols, const std::map<std::string, double>& symbols,
                  const std::string& field) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != rows_expected)
    bad("\"" + field + "\" must be an array of " + std::to_string(rows_expected) + " rows");
  CMatrix out(rows_expected, cols);
  for (int i = 0; i < rows_expected; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      bad("\"" + field + "\" row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (int j = 0; j < cols; ++j)
      out(i, j) = entry(row[j], symbols, "\"" + field + "\"[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return out;
}

}  // namespace

double evaluate_expression(const std::string& text, const std::map<std::string, double>& symbols) {
  return ExprParser(text, symbols).parse();
}

MatrixFile parse_matrix(const nlohmann::ordered_json& j) {
  if (!j.is_object()) bad("matrix file must hold a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() < 1)
    bad("\"n\" must be a positive integer");
  const int n = j["n"].get<int>();

  std::map<std::string, double> symbols;
  if (j.contains("symbols")) {
    if (!j["symbols"].is_object()) bad("\"symbols\" must be an object");
    // File order: each symbol may use the ones defined before it.
    for (const auto& [name, value] : j["symbols"].items()) symbols[name] = entry(value, symbols, "symbol '" + name + "'");
  }

  MatrixFile out;
  if (j.contains("re")) {
    out.matrix = real_rows(j["re"], n, n, symbols, "re");
    if (j.contains("im")) out.matrix += Complex(0.0, 1.0) * real_rows(j["im"], n, n, symbols, "im");
  } else if (j.contains("diag")) {
    const auto& d = j["diag"];
    if (!d.is_array() || static_cast<int>(d.size()) != n) bad("\"diag\" must have n entries");
    out.matrix = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) out.matrix(i, i) = entry(d[i], symbols, "\"diag\"[" + std::to_string(i) + "]");
  } else if (j.contains("span")) {
    const auto& span = j["span"];
    if (!span.is_array() || span.empty()) bad("\"span\" must be a non-empty array of vectors");
    const int count = static_cast<int>(span.size());
    CMatrix vecs = real_rows(span, count, n, symbols, "span");
    if (j.contains("span_im")) vecs += Complex(0.0, 1.0) * real_rows(j["span_im"], count, n, symbols, "span_im");
    const CMatrix cols = vecs.transpose();
    Eigen::ColPivHouseholderQR<CMatrix> qr(cols);
    qr.setThreshold(1e-12);
    const int rank = static_cast<int>(qr.rank());
    const CMatrix q = CMatrix(qr.householderQ()).leftCols(rank);
    out.matrix = q * q.adjoint();
  } else {
    bad("matrix file needs one of \"re\", \"diag\" or \"span\"");
  }

  if (j.contains("dims")) {
    long long prod = 1;
    for (const auto& d : j["dims"]) {
      if (!d.is_number_integer() || d.get<int>() < 1) bad("\"dims\" entries must be positive integers");
      out.dims.push_back(d.get<int>());
      prod *= d.get<int>();
    }
    if (prod != n) bad("\"dims\" must multiply to n");
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MatrixFile read_matrix_file(const std::string& path) {
  const std::string text = read_text(path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(path + ": " + e.what());
  }
  try {
    return parse_matrix(j);
  } catch (const nlohmann::json::exception& e) {
    bad(path + ": " + e.what());
  }
}

nlohmann::ordered_json matrix_to_json(const CMatrix& m, const std::vector<int>& dims) {
  nlohmann::ordered_json j;
  j["n"] = m.rows();
  nlohmann::ordered_json re = nlohmann::ordered_json::array(), im = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json rr = nlohmann::ordered_json::array(), ir = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ir.push_back(m(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  j["re"] = re;
  j["im"] = im;
  if (!dims.empty()) j["dims"] = dims;
  return j;
}

void write_matrix_file(const std::string& path, const CMatrix& m, const std::vector<int>& dims) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write " + path);
  out << matrix_to_json(m, dims).dump() << '\n';
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bjtrace
