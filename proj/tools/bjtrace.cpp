// bjtrace: command-line front end.
//
// Exit codes: 0 = the property holds (orthogonal, maximal, consistent, ...),
// 1 = it does not, 2 = bad input or any other error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bjtrace/bj_orth.hpp"
#include "bjtrace/diag_orth.hpp"
#include "bjtrace/entanglement.hpp"
#include "bjtrace/errors.hpp"
#include "bjtrace/matrix_io.hpp"
#include "bjtrace/resource.hpp"

using namespace bjtrace;
using json = nlohmann::ordered_json;

namespace {

struct Flags {
  std::optional<double> tol;
  std::optional<double> zero_tol;
  std::uint64_t seed = 0;
  int restarts = 64;
  std::optional<int> max_iter;
  bool oracle = false;
  std::string json_path;
  bool psd_only = false;
  std::vector<int> dims;
  std::optional<int> k;
  int n = 0;
  int r = 1;
  std::vector<std::string> files;
};

struct Report {
  json env = json::object();
  std::vector<std::pair<std::string, std::string>> rows;  // human table
  int exit_code = 0;

  void row(const std::string& key, const std::string& value) { rows.emplace_back(key, value); }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json real_vector(const RVector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json complex_vector(const CVector& v) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return json{{"re", re}, {"im", im}};
}

json schmidt_json(const SchmidtWitness& w) {
  json x = json::array(), y = json::array();
  for (const CVector& v : w.x_vectors) x.push_back(complex_vector(v));
  for (const CVector& v : w.y_vectors) y.push_back(complex_vector(v));
  return json{{"kind", "schmidt"}, {"x", x}, {"y", y}, {"value", w.value}};
}

// A library failure tied to one input file; the message names the file.
std::runtime_error in_file(const std::string& path, const std::string& what) {
  return std::runtime_error(path + ": " + what);
}

struct Input {
  std::string path;
  MatrixFile file;
};

Input load(const std::string& path, json& inputs) {
  const std::string text = read_text(path);
  inputs.push_back(json{{"path", path}, {"fnv1a64", fnv1a_hex(text)}});
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw in_file(path, std::string("BadInput: ") + e.what());
  }
  try {
    return {path, parse_matrix(j)};
  } catch (const Error& e) {
    throw in_file(path, e.what());
  }
}

HermitianMatrix hermitian_from(const Input& in) {
  try {
    return HermitianMatrix(in.file.matrix);
  } catch (const Error& e) {
    throw in_file(in.path, e.what());
  }
}

void begin(Report& rep, const std::string& command) {
  rep.env["command"] = command;
  rep.env["inputs"] = json::array();
  rep.env["verdict"] = nullptr;
  rep.env["values"] = json::object();
  rep.env["witness"] = nullptr;
  rep.env["tolerances"] = json::object();
  rep.env["seed"] = nullptr;
}

// ---------------------------------------------------------------------------

void cmd_check(const Flags& f, Report& rep) {
  begin(rep, "check");
  const HermitianMatrix h = hermitian_from(load(f.files.at(0), rep.env["inputs"]));
  const HermitianMatrix b = hermitian_from(load(f.files.at(1), rep.env["inputs"]));
  if (h.dim() != b.dim()) throw Error(ErrorKind::BadInput, "H and B have different sizes");

  Tolerances tol;
  if (f.tol) tol.decision_tol = *f.tol;
  if (f.zero_tol) tol.zero_tol = *f.zero_tol;
  const double bscale = std::max(1.0, operator_norm(b));
  const bool psd = min_eigenvalue(b) >= -1e-9 * bscale;
  const BJVerdict v = psd ? check_bj_psd(h, b, tol) : check_bj_general(h, b, tol);

  json& values = rep.env["values"];
  values["criterion"] = psd ? "psd" : "general";
  values["trace_norm"] = trace_norm(h);
  if (psd) {
    values["margin_plus"] = v.margin_plus;
    values["margin_minus"] = v.margin_minus;
  } else {
    values["general_slack"] = v.general_slack;
  }
  rep.env["tolerances"] = json{{"decision_tol", v.decision_tol}, {"zero_tol", f.zero_tol ? json(*f.zero_tol) : json("default")}};
  rep.env["verdict"] = v.orthogonal ? "orthogonal" : "not orthogonal";
  rep.row("criterion", psd ? "psd" : "general");
  rep.row("trace norm", num(trace_norm(h)));
  if (psd) {
    rep.row("margin +", num(v.margin_plus));
    rep.row("margin -", num(v.margin_minus));
  } else {
    rep.row("general slack", num(v.general_slack));
  }
  rep.row("decision tol", num(v.decision_tol));
  if (v.witness) {
    const bool ok = verify_witness(h, b, *v.witness);
    rep.env["witness"] = json{{"kind", "matrix"},
                              {"verified", ok},
                              {"attained_trace_norm", v.witness->attained_trace_norm},
                              {"b_pairing", v.witness->b_pairing},
                              {"matrix", matrix_to_json(v.witness->m.matrix())}};
    rep.row("witness", ok ? "verified" : "NOT verified");
  }
  if (f.oracle) {
    const LineSearchResult ls = oracle_line_search(h, b);
    const double slack = 1e-7 * std::max(1.0, ls.base_value);
    const bool agrees = v.orthogonal == (ls.min_value >= ls.base_value - slack);
    values["oracle"] = json{{"lambda_star", ls.lambda_star}, {"min_value", ls.min_value}, {"slack", slack}, {"agrees", agrees}};
    rep.row("oracle min", num(ls.min_value) + " at lambda " + num(ls.lambda_star));
    rep.row("oracle agrees", agrees ? "yes" : "NO");
    if (!agrees) std::cerr << "warning: line-search oracle disagrees with the criterion (near the boundary?)\n";
  }
  rep.row("verdict", rep.env["verdict"].get<std::string>());
  rep.exit_code = v.orthogonal ? 0 : 1;
}

void cmd_diag(const Flags& f, Report& rep) {
  begin(rep, "diag");
  const HermitianMatrix h = hermitian_from(load(f.files.at(0), rep.env["inputs"]));
  DiagConfig cfg;
  if (f.tol) cfg.tol = cfg.feasibility_tol = *f.tol;
  if (f.zero_tol) cfg.zero_tol = *f.zero_tol;
  if (f.max_iter) cfg.feasibility_max_iter = *f.max_iter;
  json& values = rep.env["values"];
  values["trace_norm"] = trace_norm(h);
  rep.env["tolerances"] = json{{"tol", cfg.tol},
                               {"zero_tol", f.zero_tol ? json(*f.zero_tol) : json("default")},
                               {"oracle_tol", cfg.oracle_tol}};
  rep.row("trace norm", num(trace_norm(h)));

  if (f.psd_only) {
    const bool ok = check_psd_diag(h, cfg.tol, cfg.zero_tol);
    const SpectralSplit s = spectral_split(h, cfg.zero_tol);
    values["max_p_plus_diagonal"] = s.p_plus.diagonal().real().maxCoeff();
    values["max_p_minus_diagonal"] = s.p_minus.diagonal().real().maxCoeff();
    rep.env["verdict"] = ok ? "orthogonal to diagonal PSD" : "not orthogonal to diagonal PSD";
    rep.row("max P+ diagonal", num(values["max_p_plus_diagonal"].get<double>()));
    rep.row("max P- diagonal", num(values["max_p_minus_diagonal"].get<double>()));
    rep.row("verdict", rep.env["verdict"].get<std::string>());
    rep.exit_code = ok ? 0 : 1;
    return;
  }

  const DiagVerdict v = check_all_diag(h, cfg);
  const bool yes = is_yes(v.all_diag_orthogonal);
  values["psd_diag_orthogonal"] = v.psd_diag_orthogonal;
  values["certainty"] = to_string(v.all_diag_orthogonal);
  values["rule"] = to_string(v.rule_fired);
  rep.row("psd filter", v.psd_diag_orthogonal ? "pass" : "fail");
  rep.row("rule", to_string(v.rule_fired));
  rep.row("certainty", to_string(v.all_diag_orthogonal));
  if (v.refuting_diagonal) {
    values["refuted_value"] = v.refuted_value;
    rep.env["witness"] = json{{"kind", "refuting_diagonal"}, {"diagonal", real_vector(*v.refuting_diagonal)},
                              {"trace_norm_after_shift", v.refuted_value}};
    rep.row("refuting diagonal", [&] {
      std::string s;
      for (int i = 0; i < v.refuting_diagonal->size(); ++i) s += (i ? " " : "") + num((*v.refuting_diagonal)[i]);
      return s;
    }());
    rep.row("shifted trace norm", num(v.refuted_value));
  } else if (v.witness) {
    rep.env["witness"] = json{{"kind", "zero_diagonal_matrix"}, {"matrix", matrix_to_json(v.witness->matrix())}};
    rep.row("witness", "zero-diagonal matrix in the order interval");
  }
  if (f.oracle) {
    const DiagonalShiftResult r = min_over_diagonal(h, cfg.oracle);
    values["oracle"] = json{{"min_value", r.value}, {"low_confidence", r.low_confidence}};
    rep.row("oracle min", num(r.value));
  }
  rep.env["verdict"] = yes ? "orthogonal to all diagonals" : "not orthogonal to all diagonals";
  rep.row("verdict", rep.env["verdict"].get<std::string>());
  rep.exit_code = yes ? 0 : 1;
}

DensityMatrix density_from(const Input& in) {
  try {
    return DensityMatrix(hermitian_from(in));
  } catch (const Error& e) {
    throw in_file(in.path, e.what());
  }
}

void cmd_coherence(const Flags& f, Report& rep) {
  begin(rep, "coherence");
  const DensityMatrix rho = density_from(load(f.files.at(0), rep.env["inputs"]));
  const double tol = f.tol.value_or(1e-9);
  const double zt = f.zero_tol.value_or(-1.0);
  const int k = f.k.value_or(1);
  const int n = rho.dim();
  if (k < 1 || k > n) throw Error(ErrorKind::DomainError, "--k must lie in [1, " + std::to_string(n) + "]");
  json& values = rep.env["values"];
  rep.env["tolerances"] = json{{"tol", tol}, {"zero_tol", f.zero_tol ? json(*f.zero_tol) : json("default")}};
  const int rank = rho.rank(zt);
  values["k"] = k;
  values["rank"] = rank;
  rep.row("k", std::to_string(k));
  rep.row("rank", std::to_string(rank));

  bool maximal;
  if (k == 1) {
    maximal = is_max_coherent(rho, tol, zt);
    const ConeDistance d = distance_to_diag_cone(rho);
    values["distance_to_diagonal_states"] = d.value;
    values["distance_low_confidence"] = d.low_confidence;
    rep.env["witness"] = json{{"kind", "closest_diagonal"}, {"diagonal", real_vector(d.x)}};
    rep.row("distance", num(d.value));
  } else {
    const SubmatrixMax p = pnorm_k(rho.range_projection(zt), k);
    maximal = p.value <= 0.5 + tol;
    values["range_projection_k_norm"] = p.value;
    rep.env["witness"] = json{{"kind", "principal_subset"}, {"indices", p.indices}};
    rep.row("||P||_(k)", num(p.value));
  }
  if (k < n) {
    values["rank_bound"] = coherence_rank_bound(n, k);
    rep.row("rank bound", std::to_string(coherence_rank_bound(n, k)));
  }
  rep.env["verdict"] = maximal ? "maximal" : "not maximal";
  rep.row("verdict", rep.env["verdict"].get<std::string>());
  rep.exit_code = maximal ? 0 : 1;
}

void cmd_hmatrix(const Flags& f, Report& rep) {
  begin(rep, "hmatrix");
  const DensityMatrix rho = density_from(load(f.files.at(0), rep.env["inputs"]));
  const double tol = f.tol.value_or(1e-9);
  const double lo = min_eigenvalue(comparison_matrix(rho.rho()));
  const bool ok = is_two_coherent(rho, tol);
  rep.env["values"] = json{{"comparison_min_eigenvalue", lo}};
  rep.env["tolerances"] = json{{"tol", tol}};
  rep.env["verdict"] = ok ? "2-coherent" : "not 2-coherent";
  rep.row("comparison min eig", num(lo));
  rep.row("verdict", rep.env["verdict"].get<std::string>());
  rep.exit_code = ok ? 0 : 1;
}

SkConfig sk_config(const Flags& f, Report& rep) {
  SkConfig cfg;
  cfg.seed = f.seed;
  cfg.restarts = f.restarts;
  if (f.max_iter) cfg.seesaw.max_iter = *f.max_iter;
  rep.env["seed"] = f.seed;
  return cfg;
}

void cmd_sknorm(const Flags& f, Report& rep) {
  begin(rep, "sknorm");
  const Input in = load(f.files.at(0), rep.env["inputs"]);
  const HermitianMatrix x = hermitian_from(in);
  std::vector<int> dims = f.dims.empty() ? in.file.dims : f.dims;
  if (dims.size() != 2) throw Error(ErrorKind::BadInput, "sknorm needs --dims m n or a two-entry \"dims\" field");
  const int k = f.k.value_or(1);
  const SkConfig cfg = sk_config(f, rep);
  const SchmidtWitness w = sk_norm_lower_bound(bipartite(x, dims[0], dims[1]), k, cfg);
  const bool ok = w.verify(x);
  rep.env["values"] = json{{"k", k}, {"dims", dims}, {"lower_bound", w.value}, {"restarts", cfg.restarts}};
  rep.env["tolerances"] = json{{"witness_tol", 1e-9}, {"seesaw_tol", cfg.seesaw.tol}, {"max_iter", cfg.seesaw.max_iter}};
  json wj = schmidt_json(w);
  wj["verified"] = ok;
  rep.env["witness"] = wj;
  rep.env["verdict"] = "lower bound";
  rep.row("dims", std::to_string(dims[0]) + " x " + std::to_string(dims[1]));
  rep.row("k", std::to_string(k));
  rep.row("lower bound", num(w.value));
  rep.row("witness", ok ? "verified" : "NOT verified");
  rep.exit_code = ok ? 0 : 2;
}

void cmd_werner(const Flags& f, Report& rep) {
  begin(rep, "werner");
  if (f.n < 2) throw Error(ErrorKind::DomainError, "--n must be at least 2");
  const BipartiteOperator w = werner_state(f.n);
  const double tr = w.matrix.diag().sum();
  const double lo = min_eigenvalue(w.matrix);
  const double pt = min_eigenvalue(partial_transpose(w));
  rep.env["values"] = json{{"n", f.n}, {"trace", tr}, {"min_eigenvalue", lo}, {"min_partial_transpose_eigenvalue", pt}};
  rep.env["witness"] = json{{"kind", "state"}, {"matrix", matrix_to_json(w.matrix.matrix(), w.dims)}};
  rep.env["verdict"] = pt < 0 ? "NPPT" : "PPT";
  rep.row("dimension", std::to_string(f.n * f.n));
  rep.row("trace", num(tr));
  rep.row("min eigenvalue", num(lo));
  rep.row("min eig of partial transpose", num(pt));
  rep.row("verdict", rep.env["verdict"].get<std::string>());
  rep.exit_code = 0;
}

void cmd_undistill(const Flags& f, Report& rep) {
  begin(rep, "undistill");
  const SkConfig cfg = sk_config(f, rep);
  const double tol = f.tol.value_or(1e-6);
  const UndistillReport u = undistillability_report(f.n, f.r, cfg, {}, tol);
  rep.env["values"] = json{{"n", u.n},         {"r", u.r},           {"dim", u.dim},
                           {"projection_rank", u.projection_rank}, {"bound", u.bound}, {"threshold", u.threshold},
                           {"restarts", cfg.restarts}, {"statement", u.statement}};
  json wj = schmidt_json(u.witness);
  wj["verified"] = u.witness_verified;
  rep.env["witness"] = wj;
  rep.env["tolerances"] = json{{"tol", u.tol}, {"witness_tol", 1e-9}};
  rep.env["verdict"] = to_string(u.verdict);
  rep.row("n, r", std::to_string(u.n) + ", " + std::to_string(u.r));
  rep.row("rank of P_r", std::to_string(u.projection_rank));
  rep.row("S(2) lower bound", num(u.bound));
  rep.row("witness", u.witness_verified ? "verified" : "NOT verified");
  rep.row("verdict", to_string(u.verdict));
  rep.row("statement", u.statement);
  rep.exit_code = u.verdict == UndistillVerdict::Consistent ? 0 : 1;
}

void print_table(const Report& rep) {
  std::size_t width = 0;
  for (const auto& [k, v] : rep.rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rep.rows) std::cout << k << std::string(width - k.size() + 2, ' ') << v << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff-James orthogonality in the trace norm, with coherence and entanglement applications"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", f.tol, "decision tolerance");
    sub->add_option("--zero-tol", f.zero_tol, "eigenvalues within this of zero count as zero");
    sub->add_option("--json", f.json_path, "write the machine-readable report here ('-' for stdout)");
  };
  auto search = [&](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "random seed")->capture_default_str();
    sub->add_option("--restarts", f.restarts, "see-saw restarts")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", f.max_iter, "see-saw iteration cap")->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand("check", "is H orthogonal to B? (exit 0 yes, 1 no)");
  check->add_option("files", f.files, "H and B matrix files")->required()->expected(2);
  check->add_flag("--oracle", f.oracle, "cross-check with a line search");
  common(check);

  CLI::App* diag = app.add_subcommand("diag", "is H orthogonal to every diagonal (or every diagonal PSD) matrix?");
  diag->add_option("file", f.files, "H matrix file")->required()->expected(1);
  diag->add_flag("--psd-only", f.psd_only, "only diagonal PSD matrices");
  diag->add_flag("--oracle", f.oracle, "also minimise over diagonal shifts");
  diag->add_option("--max-iter", f.max_iter, "feasibility iteration cap")->check(CLI::PositiveNumber);
  common(diag);

  CLI::App* coh = app.add_subcommand("coherence", "maximal (k-)coherence of a density matrix");
  coh->add_option("file", f.files, "density matrix file")->required()->expected(1);
  coh->add_option("--k", f.k, "coherence level (default 1)");
  common(coh);

  CLI::App* hm = app.add_subcommand("hmatrix", "is the density matrix 2-coherent (an H-matrix)?");
  hm->add_option("file", f.files, "density matrix file")->required()->expected(1);
  common(hm);

  CLI::App* sk = app.add_subcommand("sknorm", "see-saw lower bound on the S(k) norm");
  sk->add_option("file", f.files, "operator file")->required()->expected(1);
  sk->add_option("--dims", f.dims, "subsystem dimensions m n")->expected(2);
  sk->add_option("--k", f.k, "Schmidt rank (default 1)");
  common(sk);
  search(sk);

  CLI::App* wer = app.add_subcommand("werner", "the Werner state on n x n");
  wer->add_option("--n", f.n, "local dimension")->required();
  common(wer);

  CLI::App* und = app.add_subcommand("undistill", "search for a Schmidt-rank-2 vector above 1/2 on P_r");
  und->add_option("--n", f.n, "local dimension")->required();
  und->add_option("--r", f.r, "number of copies")->capture_default_str();
  common(und);
  search(und);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Report rep;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (check->parsed()) cmd_check(f, rep);
    else if (diag->parsed()) cmd_diag(f, rep);
    else if (coh->parsed()) cmd_coherence(f, rep);
    else if (hm->parsed()) cmd_hmatrix(f, rep);
    else if (sk->parsed()) cmd_sknorm(f, rep);
    else if (wer->parsed()) cmd_werner(f, rep);
    else if (und->parsed()) cmd_undistill(f, rep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  rep.env["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (f.json_path != "-") print_table(rep);
  if (!f.json_path.empty()) {
    const std::string text = rep.env.dump(2) + "\n";
    if (f.json_path == "-") {
      std::cout << text;
    } else {
      std::ofstream out(f.json_path);
      if (!(out << text)) {
        std::cerr << "error: cannot write " << f.json_path << '\n';
        return 2;
      }
    }
  }
  return rep.exit_code;
}
