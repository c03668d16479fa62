#include "hls/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hls/oracle.hpp"

namespace hls::io {
namespace {

std::string num(double v) {
  if (!std::isfinite(v)) throw InputError("cannot serialize a non-finite number");
  if (v == 0.0) return "0";  // "-0" would read back as the integer 0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool primitive(const Json& j) { return !j.is_array() && !j.is_object(); }

void emit(const Json& j, std::string& out, bool pretty, int depth) {
  const std::string pad = pretty ? std::string(2 * (depth + 1), ' ') : "";
  const std::string close_pad = pretty ? std::string(2 * depth, ' ') : "";
  switch (j.type()) {
    case Json::value_t::number_float: out += num(j.get<double>()); return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool inline_ = !pretty || std::all_of(j.begin(), j.end(), primitive);
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += inline_ && pretty ? ", " : ",";
        if (!inline_) out += "\n" + pad;
        emit(e, out, pretty, depth + 1);
        first = false;
      }
      if (!inline_) out += "\n" + close_pad;
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        if (pretty) out += "\n" + pad;
        out += Json(k).dump();
        out += pretty ? ": " : ":";
        emit(v, out, pretty, depth + 1);
        first = false;
      }
      if (pretty) out += "\n" + close_pad;
      out += '}';
      return;
    }
    default: out += j.dump(); return;
  }
}

std::string join(const std::string& path, const std::string& key) { return path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(join(path, key) + ": missing");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path + ": expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw InputError(path + ": expected a non-negative integer");
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path + ": expected an array");
  return j;
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw InputError(path + ": expected a string");
  return j.get<std::string>();
}

ComplexMatrix square(const Json& j, std::size_t n, const std::string& path) {
  ComplexMatrix m = matrix_from_json(j, path);
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
    throw InputError(path + ": expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  return m;
}

std::vector<ExpPolyTerm> terms_from_json(const Json& j, std::size_t n, const std::string& path) {
  std::vector<ExpPolyTerm> out;
  const Json& a = array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string p = index(path, i);
    ExpPolyTerm t;
    t.C = square(field(a[i], "C", p), n, join(p, "C"));
    t.rate = number(field(a[i], "rate", p), join(p, "rate"));
    t.power = static_cast<int>(count(field(a[i], "power", p), join(p, "power")));
    out.push_back(std::move(t));
  }
  return out;
}

Json terms_to_json(const std::vector<ExpPolyTerm>& terms) {
  Json a = Json::array();
  for (const auto& t : terms) {
    Json e;
    e["C"] = to_json(t.C);
    e["rate"] = t.rate;
    e["power"] = t.power;
    a.push_back(std::move(e));
  }
  return a;
}

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

std::string entry_header(const char* name, std::size_t n) {
  std::string h;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      const std::string e = std::string(name) + std::to_string(i) + std::to_string(j);
      h += "," + e + "_re," + e + "_im";
    }
  return h;
}

std::string entry_row(const ComplexMatrix& m) {
  std::string r;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r += "," + csv_num(m(i, j).real()) + "," + csv_num(m(i, j).imag());
  return r;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string dump(const Json& j, bool pretty) {
  std::string out;
  emit(j, out, pretty, 0);
  if (pretty) out += '\n';
  return out;
}

Json parse(const std::string& txt, const std::string& what) {
  try {
    return Json::parse(txt);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(what + ": malformed JSON (" + e.what() + ")");
  }
}

// ---------------------------------------------------------------- model types

Json to_json(const ComplexMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
  const std::size_t rows = count(field(j, "rows", path), join(path, "rows"));
  const std::size_t cols = count(field(j, "cols", path), join(path, "cols"));
  if (rows == 0 || cols == 0) throw InputError(path + ": empty matrix");
  const Json& re = array(field(j, "re", path), join(path, "re"));
  const Json& im = array(field(j, "im", path), join(path, "im"));
  const std::size_t want = rows * cols;
  for (const auto& [arr, name] : {std::pair{&re, "re"}, std::pair{&im, "im"}}) {
    if (arr->size() != want) {
      throw InputError(join(path, name) + ": expected " + std::to_string(want) + " numbers, got " +
                       std::to_string(arr->size()));
    }
  }
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < want; ++i) {
    const double a = number(re[i], index(join(path, "re"), i));
    const double b = number(im[i], index(join(path, "im"), i));
    m(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols)) = Complex(a, b);
  }
  return m;
}

Json to_json(const Grid& g) {
  Json j;
  j["start"] = g.start;
  j["step"] = g.step;
  j["count"] = g.count;
  return j;
}

Grid grid_from_json(const Json& j, const std::string& path) {
  Grid g;
  g.start = number(field(j, "start", path), join(path, "start"));
  g.step = number(field(j, "step", path), join(path, "step"));
  g.count = count(field(j, "count", path), join(path, "count"));
  if (!g.valid()) throw InputError(path + ": step must be positive and count nonzero");
  return g;
}

Json to_json(const Potential& v) {
  Json j;
  j["n"] = v.n();
  if (v.is_zero()) {
    j["variant"] = "zero";
    j["x_cut"] = v.x_cut();
  } else if (const auto* s = std::get_if<SampledPotential>(&v.variant())) {
    j["variant"] = "sampled";
    j["x_cut"] = v.x_cut();
    j["grid"] = to_json(s->grid);
    Json vals = Json::array();
    for (const auto& m : s->values) vals.push_back(to_json(m));
    j["values"] = std::move(vals);
  } else {
    j["variant"] = "catalog";
    j["x_cut"] = v.x_cut();
    j["name"] = std::get<CatalogPotential>(v.variant()).name;
  }
  return j;
}

Potential potential_from_json(const Json& j, const std::string& path) {
  const std::size_t n = count(field(j, "n", path), join(path, "n"));
  if (n == 0) throw InputError(join(path, "n") + ": must be positive");
  const std::string variant = text(field(j, "variant", path), join(path, "variant"));
  const double x_cut = number(field(j, "x_cut", path), join(path, "x_cut"));
  if (!(x_cut > 0.0)) throw InputError(join(path, "x_cut") + ": must be positive");
  if (variant == "zero") return Potential::zero(n, x_cut);
  if (variant == "sampled") {
    const Grid g = grid_from_json(field(j, "grid", path), join(path, "grid"));
    const Json& vals = array(field(j, "values", path), join(path, "values"));
    if (vals.size() != g.count) {
      throw InputError(join(path, "values") + ": expected " + std::to_string(g.count) + " matrices, got " +
                       std::to_string(vals.size()));
    }
    std::vector<ComplexMatrix> values;
    for (std::size_t i = 0; i < vals.size(); ++i) values.push_back(square(vals[i], n, index(join(path, "values"), i)));
    return Potential::sampled(g, std::move(values), x_cut);
  }
  if (variant == "catalog") {
    const std::string name = text(field(j, "name", path), join(path, "name"));
    auto v = oracle::potential_by_name(name, x_cut);
    if (!v) throw InputError(join(path, "name") + ": unknown catalog potential '" + name + "'");
    if (v->n() != n) throw InputError(join(path, "n") + ": catalog potential '" + name + "' has a different size");
    return *v;
  }
  throw InputError(join(path, "variant") + ": expected zero, sampled or catalog, got '" + variant + "'");
}

Json to_json(const BoundaryPair& p) {
  Json j;
  j["A"] = to_json(p.A);
  j["B"] = to_json(p.B);
  return j;
}

BoundaryPair boundary_from_json(const Json& j, const std::string& path) {
  BoundaryPair p;
  p.A = matrix_from_json(field(j, "A", path), join(path, "A"));
  p.B = matrix_from_json(field(j, "B", path), join(path, "B"));
  if (p.A.rows() != p.A.cols() || p.A.rows() != p.B.rows() || p.B.rows() != p.B.cols()) {
    throw InputError(path + ": A and B must be square of the same size");
  }
  return p;
}

Json to_json(const ScatteringData& d) {
  Json j;
  j["n"] = d.n;
  if (d.analytic()) {
    j["variant"] = "analytic";
    j["s_inf"] = to_json(d.fs().s_inf);
    j["right_terms"] = terms_to_json(d.fs().right_terms);
    j["left_terms"] = terms_to_json(d.fs().left_terms);
  } else {
    const auto& s = d.sampled();
    j["variant"] = "sampled";
    j["s_inf"] = to_json(s.s_inf);
    j["k_grid"] = to_json(s.k_grid);
    Json vals = Json::array();
    for (const auto& m : s.s_values) vals.push_back(to_json(m));
    j["s_values"] = std::move(vals);
  }
  Json bs = Json::array();
  for (const auto& b : d.bound_states) {
    Json e;
    e["kappa"] = b.kappa;
    e["M"] = to_json(b.M);
    bs.push_back(std::move(e));
  }
  j["bound_states"] = std::move(bs);
  return j;
}

ScatteringData scattering_data_from_json(const Json& j, const std::string& path) {
  ScatteringData d;
  d.n = count(field(j, "n", path), join(path, "n"));
  if (d.n == 0) throw InputError(join(path, "n") + ": must be positive");
  const std::string variant = text(field(j, "variant", path), join(path, "variant"));
  const ComplexMatrix s_inf = square(field(j, "s_inf", path), d.n, join(path, "s_inf"));
  if (variant == "analytic") {
    FsRepresentation fs;
    fs.s_inf = s_inf;
    fs.right_terms = terms_from_json(field(j, "right_terms", path), d.n, join(path, "right_terms"));
    if (j.contains("left_terms")) fs.left_terms = terms_from_json(j["left_terms"], d.n, join(path, "left_terms"));
    d.repr = std::move(fs);
  } else if (variant == "sampled") {
    SampledScattering s;
    s.s_inf = s_inf;
    s.k_grid = grid_from_json(field(j, "k_grid", path), join(path, "k_grid"));
    const Json& vals = array(field(j, "s_values", path), join(path, "s_values"));
    if (vals.size() != s.k_grid.count) {
      throw InputError(join(path, "s_values") + ": expected " + std::to_string(s.k_grid.count) + " matrices, got " +
                       std::to_string(vals.size()));
    }
    for (std::size_t i = 0; i < vals.size(); ++i) s.s_values.push_back(square(vals[i], d.n, index(join(path, "s_values"), i)));
    d.repr = std::move(s);
  } else {
    throw InputError(join(path, "variant") + ": expected analytic or sampled, got '" + variant + "'");
  }
  if (j.contains("bound_states")) {
    const std::string bp = join(path, "bound_states");
    const Json& bs = array(j["bound_states"], bp);
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const std::string p = index(bp, i);
      d.bound_states.push_back(
          {number(field(bs[i], "kappa", p), join(p, "kappa")), square(field(bs[i], "M", p), d.n, join(p, "M"))});
    }
  }
  return d;
}

// ---------------------------------------------------------------- results

std::string overall_word(charcheck::Verdict v) {
  switch (v) {
    case charcheck::Verdict::pass: return "marchenko-class";
    case charcheck::Verdict::fail: return "not-marchenko-class";
    case charcheck::Verdict::skipped: return "undetermined";
  }
  return "undetermined";
}

Json to_json(const charcheck::CheckReport& r) {
  Json j;
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    Json e;
    e["id"] = c.id;
    e["verdict"] = std::string(charcheck::to_string(c.verdict));
    Json diag = Json::object();
    for (const auto& [k, v] : c.diagnostic) diag[k] = v;
    e["diagnostic"] = std::move(diag);
    if (!c.note.empty()) e["note"] = c.note;
    conds.push_back(std::move(e));
  }
  j["conditions"] = std::move(conds);
  j["overall"] = overall_word(r.overall);
  j["integral_set"] = std::string(charcheck::to_string(r.integral_set));
  j["levinson_set"] = std::string(charcheck::to_string(r.levinson_set));
  j["covered_by_equivalence"] = strings(r.covered_by_equivalence);
  j["warnings"] = strings(r.warnings);
  return j;
}

Json to_json(const direct::DirectResult& r) {
  Json j;
  j["scattering_data"] = to_json(r.scattering_data());
  j["g1"] = to_json(r.g1);
  j["max_unitarity_defect"] = r.max_unitarity_defect;
  Json bs = Json::array();
  for (std::size_t i = 0; i < r.bound_states.size(); ++i) {
    Json e;
    e["kappa"] = r.bound_states[i].kappa;
    e["multiplicity"] = multiplicity(r.bound_states[i]);
    if (i < r.normalizations.size()) e["projector"] = to_json(r.normalizations[i].P);
    bs.push_back(std::move(e));
  }
  j["bound_state_summary"] = std::move(bs);
  j["warnings"] = strings(r.warnings);
  return j;
}

Json to_json(const marchenko::InverseResult& r) {
  Json j;
  j["complete"] = r.complete();
  j["potential"] = to_json(r.potential);
  j["boundary"] = r.boundary ? to_json(*r.boundary) : Json(nullptr);
  j["s_inf"] = to_json(r.s_inf);
  j["g1"] = to_json(r.g1);
  j["k00"] = to_json(r.k00);
  j["boundary_nullity"] = r.boundary_nullity;
  j["first_index"] = r.first_index;
  j["potential_asymmetry"] = r.potential_asymmetry;
  j["k00_asymmetry"] = r.k00_asymmetry;
  j["marchenko_residual"] = r.marchenko_residual;
  j["errors"] = strings(r.errors);
  j["warnings"] = strings(r.warnings);
  return j;
}

Json to_json(const pipeline::RoundTripReport& r) {
  Json j;
  j["complete"] = r.complete();
  j["s_deviation"] = r.s_deviation;
  j["kappa_deviation"] = r.kappa_deviation;
  j["m_deviation"] = r.m_deviation;
  j["boundary_distance"] = r.boundary_distance ? Json(*r.boundary_distance) : Json(nullptr);
  j["bound_states_in"] = r.bound_states_in;
  j["bound_states_out"] = r.bound_states_out;
  j["boundary"] = r.inverse.boundary ? to_json(*r.inverse.boundary) : Json(nullptr);
  Json kap = Json::array();
  if (r.direct)
    for (const auto& b : r.direct->bound_states) kap.push_back(b.kappa);
  j["kappa_out"] = std::move(kap);
  j["errors"] = strings(r.errors);
  j["warnings"] = strings(r.inverse.warnings);
  return j;
}

Json to_json(const pipeline::RunConfig& c) {
  Json j;
  j["x_cut"] = c.x_cut;
  j["x_step"] = c.x_step;
  j["k_max"] = c.k_max;
  j["k_points"] = c.k_points;
  j["kappa_max"] = c.kappa_max;
  Json t = Json::object();
  for (const auto& [k, v] : c.tol) t[k] = v;
  j["tol"] = std::move(t);
  return j;
}

// ---------------------------------------------------------------- CSV

std::string s_table_csv(const Grid& k_grid, const std::vector<ComplexMatrix>& s_values) {
  const std::size_t n = s_values.empty() ? 0 : static_cast<std::size_t>(s_values[0].rows());
  std::string out = "k" + entry_header("S", n) + "\n";
  for (std::size_t i = 0; i < s_values.size(); ++i) out += csv_num(k_grid.at(i)) + entry_row(s_values[i]) + "\n";
  return out;
}

std::string potential_csv(const Potential& v, const Grid& x_grid) {
  std::string out = "x" + entry_header("V", v.n()) + "\n";
  for (double x : x_grid.points()) out += csv_num(x) + entry_row(v(x)) + "\n";
  return out;
}

std::string report_csv(const charcheck::CheckReport& r) {
  std::string out = "id,verdict,diagnostic,note\n";
  for (const auto& c : r.conditions) {
    std::string diag;
    for (const auto& [k, v] : c.diagnostic) diag += (diag.empty() ? "" : ";") + k + "=" + csv_num(v);
    out += c.id + "," + std::string(charcheck::to_string(c.verdict)) + "," + csv_quote(diag) + "," + csv_quote(c.note) +
           "\n";
  }
  out += "overall," + overall_word(r.overall) + ",\"\",\"\"\n";
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& p, const std::string& txt) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << txt;
}

}  // namespace hls::io
