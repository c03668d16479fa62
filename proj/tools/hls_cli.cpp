// Command-line front end. Exit codes: 0 ok, 1 check failed, 2 input error,
// 3 solver error, 4 partial result (inverse problem incomplete).

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hls/io.hpp"
#include "hls/oracle.hpp"
#include "hls/pipeline.hpp"

namespace fs = std::filesystem;
using namespace hls;

namespace {

enum Exit { kOk = 0, kCheckFail = 1, kInput = 2, kSolver = 3, kPartial = 4 };

struct Args {
  pipeline::RunConfig cfg;
  std::string out_dir = ".";
  std::string format = "json";
  std::vector<std::string> conditions;
  std::vector<std::string> tol;  // key=value
  std::string potential_file, boundary_file, data_file, reference_file, example;
};

io::Json load(const std::string& path) { return io::parse(io::read_file(path), path); }

void apply_tol(Args& a) {
  for (const auto& kv : a.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("--tol expects key=value, got '" + kv + "'");
    try {
      a.cfg.tol[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw InputError("--tol " + kv + ": value is not a number");
    }
  }
  a.cfg.validate();
}

void emit(const Args& a, const io::Json& j, const std::string& csv) {
  std::cout << (a.format == "csv" ? csv : io::dump(j));
}

int cmd_direct(const Args& a) {
  const Potential v = io::potential_from_json(load(a.potential_file));
  const BoundaryPair p = io::boundary_from_json(load(a.boundary_file));
  const direct::DirectResult r = pipeline::run_direct(v, p, a.cfg);
  const fs::path dir = a.out_dir;
  const io::Json data = io::to_json(r.scattering_data());
  const std::string csv = io::s_table_csv(r.k_grid, r.s_values);
  io::write_file(dir / "scattering_data.json", io::dump(data));
  io::write_file(dir / "direct_report.json", io::dump(io::to_json(r)));
  io::write_file(dir / "s_values.csv", csv);
  emit(a, data, csv);
  return kOk;
}

int cmd_invert(const Args& a) {
  const ScatteringData d = io::scattering_data_from_json(load(a.data_file));
  const marchenko::InverseResult r = pipeline::run_invert(d, a.cfg);
  const fs::path dir = a.out_dir;
  const std::string csv = io::potential_csv(r.potential, std::get<SampledPotential>(r.potential.variant()).grid);
  io::write_file(dir / "potential.json", io::dump(io::to_json(r.potential)));
  if (r.boundary) io::write_file(dir / "boundary.json", io::dump(io::to_json(*r.boundary)));
  io::write_file(dir / "inverse_report.json", io::dump(io::to_json(r)));
  io::write_file(dir / "potential.csv", csv);
  emit(a, io::to_json(r), csv);
  for (const auto& e : r.errors) std::cerr << "error: " << e << "\n";
  return r.complete() ? kOk : kPartial;
}

int cmd_check(const Args& a) {
  const ScatteringData d = io::scattering_data_from_json(load(a.data_file));
  const charcheck::CheckReport r = pipeline::run_check(d, a.cfg, a.conditions);
  const fs::path dir = a.out_dir;
  const std::string table = charcheck::format_text(r);
  io::write_file(dir / "check_report.json", io::dump(io::to_json(r)));
  io::write_file(dir / "check_report.txt", table);
  emit(a, io::to_json(r), io::report_csv(r));
  std::cerr << table;
  for (const auto& c : r.conditions)
    if (c.verdict == charcheck::Verdict::fail) return kCheckFail;
  return kOk;
}

int cmd_roundtrip(const Args& a) {
  const ScatteringData d = io::scattering_data_from_json(load(a.data_file));
  std::optional<BoundaryPair> ref;
  if (!a.reference_file.empty()) ref = io::boundary_from_json(load(a.reference_file));
  const pipeline::RoundTripReport r = pipeline::run_roundtrip(d, a.cfg, ref);
  const io::Json j = io::to_json(r);
  io::write_file(fs::path(a.out_dir) / "roundtrip_report.json", io::dump(j));
  std::ostringstream csv;
  csv << "s_deviation,kappa_deviation,m_deviation\n" << io::dump(r.s_deviation, false) << ","
      << io::dump(r.kappa_deviation, false) << "," << io::dump(r.m_deviation, false) << "\n";
  if (!r.direct) {
    emit(a, j, "");
    for (const auto& e : r.errors) std::cerr << "error: " << e << "\n";
    return kPartial;
  }
  emit(a, j, csv.str());
  return r.within() ? kOk : kCheckFail;
}

int cmd_example(const Args& a) {
  const oracle::OracleExample& e = oracle::get_example(a.example);
  const fs::path dir = a.out_dir;
  io::write_file(dir / (e.name + ".scattering_data.json"), io::dump(io::to_json(e.data)));
  if (e.potential) io::write_file(dir / (e.name + ".potential.json"), io::dump(io::to_json(*e.potential)));
  if (e.boundary) io::write_file(dir / (e.name + ".boundary.json"), io::dump(io::to_json(*e.boundary)));
  io::Json j;
  j["name"] = e.name;
  j["description"] = e.description;
  j["overall"] = std::string(oracle::to_string(e.overall));
  io::Json exp = io::Json::object();
  for (const auto& [id, pass] : e.expected) exp[id] = pass ? "pass" : "fail";
  j["expected"] = std::move(exp);
  j["notes"] = e.notes;
  emit(a, j, "name,overall\n" + e.name + "," + std::string(oracle::to_string(e.overall)) + "\n");
  return kOk;
}

int cmd_list(const Args& a) {
  io::Json arr = io::Json::array();
  std::string csv = "name,overall,description\n";
  for (const auto& s : oracle::list_examples()) {
    io::Json e;
    e["name"] = s.name;
    e["overall"] = std::string(oracle::to_string(s.overall));
    e["description"] = s.description;
    arr.push_back(std::move(e));
    csv += s.name + "," + std::string(oracle::to_string(s.overall)) + ",\"" + s.description + "\"\n";
  }
  emit(a, arr, csv);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-line matrix Schrodinger scattering: direct and inverse problems, characterization checks"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--x-cut", a.cfg.x_cut, "x grid end for recovered potentials")->capture_default_str();
    sub->add_option("--x-step", a.cfg.x_step, "x grid step")->capture_default_str();
    sub->add_option("--k-max", a.cfg.k_max, "largest k sample")->capture_default_str();
    sub->add_option("--k-points", a.cfg.k_points, "number of k samples")->capture_default_str();
    sub->add_option("--kappa-max", a.cfg.kappa_max, "bound-state search limit")->capture_default_str();
    sub->add_option("--tol", a.tol, "tolerance override key=value (ode_abs, ode_rel, nullity, sampled_nullity)");
    sub->add_option("--out-dir", a.out_dir, "directory for output files")->capture_default_str();
    sub->add_option("--format", a.format, "stdout format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  };

  auto* direct = app.add_subcommand("direct", "scattering data from a potential and a boundary pair");
  direct->add_option("potential", a.potential_file)->required()->check(CLI::ExistingFile);
  direct->add_option("boundary", a.boundary_file)->required()->check(CLI::ExistingFile);
  common(direct);

  auto* invert = app.add_subcommand("invert", "potential and boundary pair from scattering data");
  invert->add_option("data", a.data_file)->required()->check(CLI::ExistingFile);
  common(invert);

  auto* check = app.add_subcommand("check", "characterization conditions of a scattering data set");
  check->add_option("data", a.data_file)->required()->check(CLI::ExistingFile);
  check->add_option("--conditions", a.conditions, "condition ids (default: all)")->delimiter(',');
  common(check);

  auto* roundtrip = app.add_subcommand("roundtrip", "invert, then solve the direct problem and compare");
  roundtrip->add_option("data", a.data_file)->required()->check(CLI::ExistingFile);
  roundtrip->add_option("--boundary", a.reference_file, "reference boundary pair")->check(CLI::ExistingFile);
  common(roundtrip);

  auto* example = app.add_subcommand("example", "write a catalog entry as JSON files");
  example->add_option("name", a.example)->required();
  common(example);

  auto* list = app.add_subcommand("list-examples", "list the catalog");
  common(list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    apply_tol(a);
    if (*direct) return cmd_direct(a);
    if (*invert) return cmd_invert(a);
    if (*check) return cmd_check(a);
    if (*roundtrip) return cmd_roundtrip(a);
    if (*example) return cmd_example(a);
    return cmd_list(a);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
}
