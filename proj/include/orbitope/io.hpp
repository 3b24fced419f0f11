#pragma once

// File formats: JSON for tensors, rotations, pairs and atomic measures, CSV
// for dipole observations and face scans.  Parsing goes through nlohmann
// json; emission uses a fixed %.17g format so outputs are bit-identical for
// identical inputs.

#include <string>
#include <vector>

#include "orbitope/rdc.hpp"
#include "orbitope/single_ion.hpp"
#include "orbitope/pair_hull.hpp"
#include "orbitope/tensor.hpp"

namespace orbitope::io {

// Malformed file contents and file-system failures; the CLI maps this to
// exit code 1, keeping it distinct from domain errors (exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- formatting ----------------------------------------------------------

std::string format_double(double x);  // %.17g

// --- JSON emission -------------------------------------------------------

std::string tensor_json(const AnisoTensor& t);            // {"coords": [...]}
std::string rotation_json(const Rotation& r);             // {"matrix": [[...]]}
std::string pair_json(const TensorPair& p);               // {"chi1":..., "chi2":...}
std::string measure_json(const AtomicMeasure& m);         // {"atoms":[{"p":..,"R":..}]}
std::string measure_json_with_error(const AtomicMeasure& m, double err);

// --- JSON parsing (throws ParseError on malformed content) ----------------

AnisoTensor parse_tensor(const std::string& text);
Rotation parse_rotation(const std::string& text);
TensorPair parse_pair(const std::string& text);
AtomicMeasure parse_measure(const std::string& text);
bool looks_like_pair(const std::string& text);

// {"tensors": [...]} or a pair object or a single tensor.
std::vector<AnisoTensor> parse_tensor_list(const std::string& text);

struct Ensemble {
  AtomicMeasure measure;
  AnisoTensor chi;
  bool has_chi2 = false;
  AnisoTensor chi2;
};

// {"measure": {...}, "chi": {...}[, "chi2": {...}]}
Ensemble parse_ensemble(const std::string& text);

// --- CSV -------------------------------------------------------------------

// Header rx,ry,rz,delta[,C]; one observation per row.
std::vector<DipoleObservation> parse_observations_csv(const std::string& text);
std::string observations_csv(const std::vector<DipoleObservation>& obs);

// --- files -----------------------------------------------------------------

std::string read_file(const std::string& path);   // throws ParseError
void write_file(const std::string& path, const std::string& content);

}  // namespace orbitope::io
