#include "orbitope/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace orbitope::io {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string num_array(const double* v, int n) {
  std::string s = "[";
  for (int i = 0; i < n; ++i) {
    if (i) s += ",";
    s += format_double(v[static_cast<std::size_t>(i)]);
  }
  return s + "]";
}

std::string matrix_json(const Mat3& m) {
  std::string s = "[";
  for (int r = 0; r < 3; ++r) {
    if (r) s += ",";
    double row[3] = {m(r, 0), m(r, 1), m(r, 2)};
    s += num_array(row, 3);
  }
  return s + "]";
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Mat3 mat_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw ParseError("matrix must be a 3x3 array");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 3)
      throw ParseError("matrix must be a 3x3 array");
    for (int c = 0; c < 3; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number())
        throw ParseError("matrix entries must be numbers");
      m(r, c) = cell.get<double>();
    }
  }
  return m;
}

AnisoTensor tensor_from_json(const json& j) {
  if (!j.is_object())
    throw ParseError("tensor must be a JSON object");
  if (j.contains("coords")) {
    const auto& c = j["coords"];
    if (!c.is_array() || c.size() != 5)
      throw ParseError("tensor coords must be a 5-element array");
    std::array<double, 5> v;
    for (int i = 0; i < 5; ++i) {
      const auto& cell = c[static_cast<std::size_t>(i)];
      if (!cell.is_number())
        throw ParseError("tensor coords must be numbers");
      v[static_cast<std::size_t>(i)] = cell.get<double>();
    }
    return AnisoTensor::from_coords(v);
  }
  if (j.contains("matrix")) {
    try {
      return AnisoTensor::from_matrix(mat_from_json(j["matrix"]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("invalid tensor matrix: ") + e.what());
    }
  }
  throw ParseError("tensor needs a \"coords\" or \"matrix\" field");
}

Rotation rotation_from_json(const json& j) {
  if (!j.is_object() || !j.contains("matrix"))
    throw ParseError("rotation needs a \"matrix\" field");
  try {
    return Rotation::from_matrix(mat_from_json(j["matrix"]));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid rotation: ") + e.what());
  }
}

}  // namespace

std::string tensor_json(const AnisoTensor& t) {
  return "{\"coords\":" + num_array(t.coords().data(), 5) + "}";
}

std::string rotation_json(const Rotation& r) {
  return "{\"matrix\":" + matrix_json(r.matrix()) + "}";
}

std::string pair_json(const TensorPair& p) {
  return "{\"chi1\":" + tensor_json(p.chi1) +
         ",\"chi2\":" + tensor_json(p.chi2) + "}";
}

std::string measure_json(const AtomicMeasure& m) {
  std::string s = "{\"atoms\":[";
  bool first = true;
  for (const auto& atom : m.atoms) {
    if (!first) s += ",";
    first = false;
    s += "{\"p\":" + format_double(atom.weight) +
         ",\"R\":" + matrix_json(atom.rotation.matrix()) + "}";
  }
  return s + "]}";
}

std::string measure_json_with_error(const AtomicMeasure& m, double err) {
  std::string s = measure_json(m);
  s.pop_back();  // strip the closing brace
  return s + ",\"reconstruction_error\":" + format_double(err) + "}";
}

AnisoTensor parse_tensor(const std::string& text) {
  return tensor_from_json(parse_json(text));
}

Rotation parse_rotation(const std::string& text) {
  return rotation_from_json(parse_json(text));
}

TensorPair parse_pair(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object() || !j.contains("chi1") || !j.contains("chi2"))
    throw ParseError("pair needs \"chi1\" and \"chi2\" fields");
  return TensorPair(tensor_from_json(j["chi1"]), tensor_from_json(j["chi2"]));
}

bool looks_like_pair(const std::string& text) {
  json j = parse_json(text);
  return j.is_object() && j.contains("chi1") && j.contains("chi2");
}

AtomicMeasure parse_measure(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
    throw ParseError("measure needs an \"atoms\" array");
  AtomicMeasure m;
  double total = 0.0;
  for (const auto& aj : j["atoms"]) {
    if (!aj.is_object() || !aj.contains("p") || !aj.contains("R"))
      throw ParseError("each atom needs \"p\" and \"R\" fields");
    double w = aj["p"].get<double>();
    if (w < 0.0) throw ParseError("atom weights must be nonnegative");
    try {
      m.atoms.push_back({w, Rotation::from_matrix(mat_from_json(aj["R"]))});
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("invalid atom rotation: ") + e.what());
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ParseError("atom weights must sum to 1");
  return m;
}

std::vector<AnisoTensor> parse_tensor_list(const std::string& text) {
  json j = parse_json(text);
  std::vector<AnisoTensor> out;
  if (j.is_object() && j.contains("tensors")) {
    for (const auto& tj : j["tensors"]) out.push_back(tensor_from_json(tj));
    return out;
  }
  if (j.is_object() && j.contains("chi1") && j.contains("chi2")) {
    out.push_back(tensor_from_json(j["chi1"]));
    out.push_back(tensor_from_json(j["chi2"]));
    return out;
  }
  out.push_back(tensor_from_json(j));
  return out;
}

Ensemble parse_ensemble(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object() || !j.contains("measure") || !j.contains("chi"))
    throw ParseError("ensemble needs \"measure\" and \"chi\" fields");
  Ensemble e;
  e.measure = parse_measure(j["measure"].dump());
  e.chi = tensor_from_json(j["chi"]);
  if (j.contains("chi2")) {
    e.has_chi2 = true;
    e.chi2 = tensor_from_json(j["chi2"]);
  }
  return e;
}

std::vector<DipoleObservation> parse_observations_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty observation file");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  };
  auto header = split(line);
  bool has_c = header.size() == 5;
  if (!(header.size() == 4 || has_c) || header[0] != "rx" || header[1] != "ry" ||
      header[2] != "rz" || header[3] != "delta" || (has_c && header[4] != "C"))
    throw ParseError("observation header must be rx,ry,rz,delta[,C]");
  std::vector<DipoleObservation> obs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != header.size())
      throw ParseError("observation row " + std::to_string(line_no) +
                                  " has the wrong number of columns");
    DipoleObservation o;
    try {
      o.r = {std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2])};
      o.delta = std::stod(cells[3]);
      o.C = has_c ? std::stod(cells[4]) : 1.0;
    } catch (const std::exception&) {
      throw ParseError("observation row " + std::to_string(line_no) +
                                  " is not numeric");
    }
    if (norm(o.r) == 0.0)
      throw ParseError("observation row " + std::to_string(line_no) +
                                  " has a zero displacement");
    obs.push_back(o);
  }
  return obs;
}

std::string observations_csv(const std::vector<DipoleObservation>& obs) {
  std::string s = "rx,ry,rz,delta,C\n";
  for (const auto& o : obs) {
    s += format_double(o.r[0]) + "," + format_double(o.r[1]) + "," +
         format_double(o.r[2]) + "," + format_double(o.delta) + "," +
         format_double(o.C) + "\n";
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
  if (!out) throw ParseError("write failed for " + path);
}

}  // namespace orbitope::io
