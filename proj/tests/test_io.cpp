#include <doctest.h>

#include "hls/io.hpp"
#include "hls/oracle.hpp"

using namespace hls;

namespace {

// write -> read -> write must reproduce the bytes
template <class T, class Read>
void check_bytes(const T& value, Read read) {
  const std::string first = io::dump(io::to_json(value));
  const auto back = read(io::parse(first));
  CHECK(io::dump(io::to_json(back)) == first);
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("floats are written with 17 significant digits") {
  io::Json j;
  j["a"] = 0.1;
  j["b"] = 2.0;
  j["c"] = -1e-300;
  j["z"] = -0.0;
  j["n"] = 3;
  const std::string s = io::dump(j, false);
  CHECK(s == "{\"a\":0.10000000000000001,\"b\":2,\"c\":-1e-300,\"z\":0,\"n\":3}");
  const io::Json back = io::parse(s);
  CHECK(back["a"].get<double>() == 0.1);
  CHECK(back["c"].get<double>() == -1e-300);
  io::Json bad;
  bad["x"] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(io::dump(bad), InputError);
}

TEST_CASE("catalog data, potentials and boundary pairs round-trip byte for byte") {
  for (const auto& e : oracle::catalog()) {
    CAPTURE(e.name);
    check_bytes(e.data, [](const io::Json& j) { return io::scattering_data_from_json(j); });
    if (e.potential) check_bytes(*e.potential, [](const io::Json& j) { return io::potential_from_json(j); });
    if (e.boundary) check_bytes(*e.boundary, [](const io::Json& j) { return io::boundary_from_json(j); });
    // and the values survive exactly
    const ScatteringData back = io::scattering_data_from_json(io::parse(io::dump(io::to_json(e.data))));
    for (double k : {0.0, 0.3, 7.0}) {
      CHECK(numlin::max_abs(marchenko::s_from_data(back, k) - marchenko::s_from_data(e.data, k)) == 0.0);
    }
  }
}

TEST_CASE("sampled potentials and sampled scattering data round-trip") {
  const Grid g{0.0, 0.1, 31};
  std::vector<ComplexMatrix> vals;
  for (double x : g.points()) {
    ComplexMatrix m(2, 2);
    m << -std::exp(-x), Complex(0.1, 0.2) * x, Complex(0.1, -0.2) * x, 1.0 / 3.0;
    vals.push_back(m);
  }
  const Potential v = Potential::sampled(g, vals, 3.0);
  check_bytes(v, [](const io::Json& j) { return io::potential_from_json(j); });
  const Potential back = io::potential_from_json(io::parse(io::dump(io::to_json(v))));
  CHECK(numlin::max_abs(back(1.234) - v(1.234)) == 0.0);

  check_bytes(Potential::zero(3, 7.5), [](const io::Json& j) { return io::potential_from_json(j); });
  check_bytes(oracle::truncated_coulomb(), [](const io::Json& j) { return io::potential_from_json(j); });

  ScatteringData d;
  d.n = 1;
  SampledScattering s;
  s.k_grid = Grid{0.0, 0.5, 5};
  for (double k : s.k_grid.points()) s.s_values.push_back(ComplexMatrix::Constant(1, 1, std::polar(1.0, -k)));
  s.s_inf = ComplexMatrix::Constant(1, 1, -1.0);
  d.repr = s;
  d.bound_states.push_back({0.75, ComplexMatrix::Constant(1, 1, std::sqrt(2.0))});
  check_bytes(d, [](const io::Json& j) { return io::scattering_data_from_json(j); });
}

TEST_CASE("reports serialize with the documented field names") {
  const auto rep = charcheck::full_report(oracle::get_example("marchenko_singular").data);
  const io::Json j = io::to_json(rep);
  CHECK(j["overall"] == "not-marchenko-class");
  bool found = false;
  for (const auto& c : j["conditions"]) {
    if (c["id"] == "4c") {
      found = true;
      CHECK(c["verdict"] == "fail");
      CHECK(c["diagnostic"]["nullity"].get<double>() == 1.0);
      CHECK(c["diagnostic"]["expected"].get<double>() == 0.0);
    }
  }
  CHECK(found);
  CHECK(io::dump(j["conditions"][0]["diagnostic"], false).find("\"symmetry_defect\"") != std::string::npos);

  const std::string csv = io::report_csv(rep);
  CHECK(csv.rfind("id,verdict,diagnostic,note\n", 0) == 0);
  CHECK(csv.find("overall,not-marchenko-class") != std::string::npos);
}

TEST_CASE("CSV tables") {
  std::vector<ComplexMatrix> s{ComplexMatrix::Identity(2, 2), Complex(0.0, 1.0) * ComplexMatrix::Identity(2, 2)};
  const std::string t = io::s_table_csv(Grid{0.5, 0.5, 2}, s);
  CHECK(t.substr(0, t.find('\n')) == "k,S11_re,S11_im,S12_re,S12_im,S21_re,S21_im,S22_re,S22_im");
  CHECK(t.find("\n0.5,1,0,0,0,0,0,1,0\n") != std::string::npos);
  CHECK(t.find("\n1,0,1,0,0,0,0,0,1\n") != std::string::npos);

  const std::string p = io::potential_csv(Potential::zero(1, 2.0), Grid{0.0, 1.0, 3});
  CHECK(p == "x,V11_re,V11_im\n0,0,0\n1,0,0\n2,0,0\n");
}

TEST_CASE("schema violations name the offending field") {
  const io::Json good = io::to_json(oracle::get_example("rank2_bs_2x2").data);

  io::Json j = good;
  j["right_terms"][1]["C"]["re"].erase(0);
  CHECK(error_of([&] { io::scattering_data_from_json(j); }) ==
        "scattering_data.right_terms[1].C.re: expected 4 numbers, got 3");

  j = good;
  j.erase("s_inf");
  CHECK(error_of([&] { io::scattering_data_from_json(j); }) == "scattering_data.s_inf: missing");

  j = good;
  j["variant"] = "tabulated";
  CHECK(error_of([&] { io::scattering_data_from_json(j); }).find("scattering_data.variant") == 0);

  j = good;
  j["bound_states"][0]["kappa"] = "one";
  CHECK(error_of([&] { io::scattering_data_from_json(j); }) == "scattering_data.bound_states[0].kappa: expected a number");

  j = good;
  j["bound_states"][0]["M"] = io::to_json(ComplexMatrix::Identity(3, 3));
  CHECK(error_of([&] { io::scattering_data_from_json(j); }) ==
        "scattering_data.bound_states[0].M: expected a 2x2 matrix");

  io::Json pot = io::to_json(*oracle::get_example("sech2_dirichlet").potential);
  pot["name"] = "no_such_potential";
  CHECK(error_of([&] { io::potential_from_json(pot); }).find("potential.name: unknown catalog potential") == 0);

  CHECK(error_of([] { io::parse("{\"n\": ", "data.json"); }).find("data.json: malformed JSON") == 0);
  CHECK(error_of([] { io::read_file("/nonexistent/file.json"); }).find("cannot read") == 0);
}
