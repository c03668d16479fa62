#pragma once
// JSON and CSV serialization of the model types and pipeline results.
//
// Doubles are written with %.17g so that write -> read -> write is byte-identical.
// Parse errors are InputError with the offending field path, e.g.
// "scattering_data.right_terms[1].C.re: expected 4 numbers, got 3".

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hls/charcheck.hpp"
#include "hls/direct.hpp"
#include "hls/marchenko.hpp"
#include "hls/model.hpp"
#include "hls/pipeline.hpp"

namespace hls::io {

using Json = nlohmann::ordered_json;

/// Compact JSON text with %.17g floats; two-space indentation when pretty.
std::string dump(const Json& j, bool pretty = true);
/// Throws InputError on malformed text.
Json parse(const std::string& text, const std::string& what = "input");

Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& path = "matrix");

Json to_json(const Grid& g);
Grid grid_from_json(const Json& j, const std::string& path = "grid");

/// Catalog potentials are written by name and resolved against the example catalog on read.
Json to_json(const Potential& v);
Potential potential_from_json(const Json& j, const std::string& path = "potential");

Json to_json(const BoundaryPair& p);
BoundaryPair boundary_from_json(const Json& j, const std::string& path = "boundary");

/// Sampled data are written without the derived F_s table.
Json to_json(const ScatteringData& d);
ScatteringData scattering_data_from_json(const Json& j, const std::string& path = "scattering_data");

Json to_json(const charcheck::CheckReport& r);
Json to_json(const direct::DirectResult& r);
Json to_json(const marchenko::InverseResult& r);
/// Deviations and the inverse-leg diagnostics; the direct leg is summarized by its bound states.
Json to_json(const pipeline::RoundTripReport& r);
Json to_json(const pipeline::RunConfig& c);

/// "marchenko-class", "not-marchenko-class" or "undetermined".
std::string overall_word(charcheck::Verdict v);

// CSV tables: a header row, then one row per sample; complex entries as _re/_im column pairs.
std::string s_table_csv(const Grid& k_grid, const std::vector<ComplexMatrix>& s_values);
std::string potential_csv(const Potential& v, const Grid& x_grid);
std::string report_csv(const charcheck::CheckReport& r);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);

}  // namespace hls::io
