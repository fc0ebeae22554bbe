#include "tvvar/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tvvar {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw DataError("line " + std::to_string(line) + ": cannot parse '" + field + "' as a number");
  if (!std::isfinite(v)) throw NonFiniteError("line " + std::to_string(line) + ": non-finite value");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void check_header(const json& j, const char* kind) {
  if (!j.is_object() || !j.contains("schema_version") || !j.contains("kind"))
    throw DataError(std::string("expected a ") + kind + " document with schema_version");
  if (j.at("kind") != kind)
    throw DataError(std::string("expected kind '") + kind + "', found " + j.at("kind").dump());
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSchemaVersion)
    throw DataError("unsupported schema_version " + j.at("schema_version").dump());
}

json header(const char* kind) { return json{{"schema_version", kSchemaVersion}, {"kind", kind}}; }

// nlohmann throws its own exception family on missing keys and type
// mismatches; surface those as data errors.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed JSON document: ") + e.what());
  }
}

}  // namespace

void write_series_csv(std::ostream& out, const SeriesMatrix& x) {
  out << "variable";
  for (std::size_t t = 1; t <= x.n(); ++t) out << ',' << t;
  out << '\n';
  for (std::size_t j = 0; j < x.d(); ++j) {
    out << j;
    for (std::size_t t = 1; t <= x.n(); ++t) out << ',' << format_double(x(j, t));
    out << '\n';
  }
}

SeriesMatrix read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty series file");
  const std::vector<std::string> head = split_csv(line);
  if (head.size() < 3) throw DataError("series header must list at least two time indices");
  const std::size_t n = head.size() - 1;
  for (std::size_t t = 1; t <= n; ++t) {
    if (parse_double(head[t], 1) != static_cast<double>(t))
      throw DataError("series header must be the time indices 1..n in order");
  }
  std::vector<double> values;
  std::size_t d = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != n + 1)
      throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(n + 1) +
                      " fields, found " + std::to_string(fields.size()));
    for (std::size_t t = 1; t <= n; ++t) values.push_back(parse_double(fields[t], lineno));
    ++d;
  }
  if (d == 0) throw DataError("series file has no variables");
  return SeriesMatrix(DenseMatrix(d, n, std::move(values)));
}

void write_series_csv_file(const std::string& path, const SeriesMatrix& x) {
  std::ostringstream out;
  write_series_csv(out, x);
  write_text_file(path, out.str());
}

SeriesMatrix read_series_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_series_csv(in);
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(r, c));
    out << '\n';
  }
}

json to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

DenseMatrix matrix_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_array() || j.empty()) throw DataError("matrix must be a nonempty array of rows");
    const std::size_t rows = j.size(), cols = j.at(0).size();
    std::vector<double> v;
    v.reserve(rows * cols);
    for (const auto& row : j) {
      if (!row.is_array() || row.size() != cols) throw DataError("ragged matrix rows");
      for (const auto& e : row) v.push_back(e.get<double>());
    }
    return DenseMatrix(rows, cols, std::move(v));
  });
}

json to_json(const SeriesMatrix& x) {
  json j = header("series");
  j["d"] = x.d();
  j["n"] = x.n();
  j["values"] = to_json(x.values());
  return j;
}

SeriesMatrix series_from_json(const json& j) {
  check_header(j, "series");
  return guarded([&] {
    SeriesMatrix x(matrix_from_json(j.at("values")));
    if (x.d() != j.at("d").get<std::size_t>() || x.n() != j.at("n").get<std::size_t>())
      throw DataError("series dimensions disagree with its values");
    return x;
  });
}

json to_json(const TransitionPath& path) {
  json j = header("transition_path");
  j["n"] = path.n;
  j["d"] = path.d;
  json mats = json::array();
  for (const auto& m : path.matrices) mats.push_back(to_json(m));
  j["matrices"] = std::move(mats);
  return j;
}

TransitionPath path_from_json(const json& j) {
  check_header(j, "transition_path");
  return guarded([&] {
    TransitionPath p;
    p.n = j.at("n").get<std::size_t>();
    p.d = j.at("d").get<std::size_t>();
    for (const auto& m : j.at("matrices")) p.matrices.push_back(matrix_from_json(m));
    if (p.matrices.size() != p.n) throw DataError("transition path length differs from n");
    for (const auto& m : p.matrices)
      if (m.rows() != p.d || m.cols() != p.d) throw DataError("transition matrix is not d x d");
    return p;
  });
}

json to_json(const GraphPattern& p) {
  return json{{"kind", to_string(p.kind)}, {"groups", p.groups}, {"prob", p.prob},
              {"off_diag", p.off_diag}, {"diag", p.diag}};
}

GraphPattern pattern_from_json(const json& j) {
  return guarded([&] {
    GraphPattern p;
    p.kind = pattern_kind_from_string(j.at("kind").get<std::string>());
    p.groups = j.at("groups").get<std::size_t>();
    p.prob = j.at("prob").get<double>();
    p.off_diag = j.at("off_diag").get<double>();
    p.diag = j.at("diag").get<double>();
    return p;
  });
}

json to_json(const SimulationTruth& truth) {
  json j = header("simulation_truth");
  j["seed"] = truth.seed;
  j["pattern"] = to_json(truth.pattern);
  j["n"] = truth.path.n;
  j["d"] = truth.path.d;
  j["a01"] = to_json(truth.a01);
  j["a02"] = to_json(truth.a02);
  j["psi"] = to_json(truth.psi);
  json path = to_json(truth.path);
  j["path"] = std::move(path);
  return j;
}

SimulationTruth truth_from_json(const json& j) {
  check_header(j, "simulation_truth");
  return guarded([&] {
    SimulationTruth t{pattern_from_json(j.at("pattern")),
                      j.at("seed").get<std::uint64_t>(),
                      matrix_from_json(j.at("a01")),
                      matrix_from_json(j.at("a02")),
                      path_from_json(j.at("path")),
                      matrix_from_json(j.at("psi"))};
    if (t.psi.rows() != t.path.d) throw DataError("innovation covariance has the wrong size");
    return t;
  });
}

json to_json(const EstimatorConfig& cfg) {
  return json{{"method", to_string(cfg.method)},
              {"regularizer", cfg.regularizer},
              {"kernel", cfg.kernel.kernel == KernelType::epanechnikov ? "epanechnikov" : "flat"},
              {"bandwidth", cfg.kernel.bandwidth},
              {"fista_max_iters", cfg.fista_max_iters},
              {"fista_tol", cfg.fista_tol}};
}

EstimatorConfig estimator_config_from_json(const json& j) {
  return guarded([&] {
    EstimatorConfig cfg;
    cfg.method = method_from_string(j.at("method").get<std::string>());
    cfg.regularizer = j.at("regularizer").get<double>();
    const std::string kernel = j.at("kernel").get<std::string>();
    if (kernel == "epanechnikov") cfg.kernel.kernel = KernelType::epanechnikov;
    else if (kernel == "flat") cfg.kernel.kernel = KernelType::flat;
    else throw DataError("unknown kernel " + kernel);
    cfg.kernel.bandwidth = j.at("bandwidth").get<double>();
    cfg.fista_max_iters = j.at("fista_max_iters").get<std::size_t>();
    cfg.fista_tol = j.at("fista_tol").get<double>();
    return cfg;
  });
}

json to_json(const EstimatePath& path) {
  json j = header("estimate_path");
  j["config"] = to_json(path.config);
  j["times"] = path.times;
  json mats = json::array();
  for (const auto& m : path.matrices) mats.push_back(to_json(m));
  j["matrices"] = std::move(mats);
  json fails = json::array();
  for (const auto& f : path.failures) fails.push_back({{"t", f.t}, {"message", f.message}});
  j["failures"] = std::move(fails);
  return j;
}

EstimatePath estimate_path_from_json(const json& j) {
  check_header(j, "estimate_path");
  return guarded([&] {
    EstimatePath p;
    p.config = estimator_config_from_json(j.at("config"));
    p.times = j.at("times").get<std::vector<double>>();
    for (const auto& m : j.at("matrices")) p.matrices.push_back(matrix_from_json(m));
    if (p.times.size() != p.matrices.size()) throw DataError("times and matrices differ in count");
    for (const auto& f : j.at("failures"))
      p.failures.push_back({f.at("t").get<double>(), f.at("message").get<std::string>()});
    return p;
  });
}

json to_json(const ErrorTable& table) {
  json j = header("error_table");
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"method", r.method}, {"norm", to_string(r.norm)}, {"mean", r.mean},
                    {"sd", r.sd}, {"replicates", r.replicates}});
  j["rows"] = std::move(rows);
  return j;
}

void write_error_table_csv(std::ostream& out, const ErrorTable& table) {
  out << "method,norm,mean,sd,replicates\n";
  for (const auto& r : table.rows)
    out << r.method << ',' << to_string(r.norm) << ',' << format_double(r.mean) << ','
        << format_double(r.sd) << ',' << r.replicates << '\n';
}

json to_json(const std::vector<RocPoint>& curve) {
  json j = header("roc_curve");
  json pts = json::array();
  for (const auto& p : curve)
    pts.push_back({{"tau", p.tau}, {"fpr", p.fpr}, {"tpr", p.tpr}, {"cells", p.cells},
                   {"failures", p.failures}});
  j["points"] = std::move(pts);
  return j;
}

void write_roc_csv(std::ostream& out, const std::string& label, const std::vector<RocPoint>& curve,
                   bool header_row) {
  if (header_row) out << "label,tau,fpr,tpr,cells,failures\n";
  for (const auto& p : curve)
    out << label << ',' << format_double(p.tau) << ',' << format_double(p.fpr) << ','
        << format_double(p.tpr) << ',' << p.cells << ',' << p.failures << '\n';
}

json to_json(const TuningResult& result) {
  json j = header("tuning_result");
  j["grid"] = result.grid;
  // JSON has no infinity; failed candidates carry null.
  json errs = json::array();
  for (double e : result.mean_error) errs.push_back(std::isfinite(e) ? json(e) : json(nullptr));
  j["mean_error"] = std::move(errs);
  j["failure"] = result.failure;
  j["selected"] = result.selected;
  j["selected_error"] = result.selected_error;
  return j;
}

TuningResult tuning_from_json(const json& j) {
  check_header(j, "tuning_result");
  return guarded([&] {
    TuningResult r;
    r.grid = j.at("grid").get<std::vector<double>>();
    for (const auto& e : j.at("mean_error"))
      r.mean_error.push_back(e.is_null() ? std::numeric_limits<double>::infinity()
                                         : e.get<double>());
    r.failure = j.at("failure").get<std::vector<std::string>>();
    r.selected = j.at("selected").get<double>();
    r.selected_error = j.at("selected_error").get<double>();
    return r;
  });
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(1) + "\n"); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace tvvar
