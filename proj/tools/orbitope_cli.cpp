// Command-line front end: wires JSON/CSV files to the library operations.
//
// Exit codes: 0 success, 1 I/O or parse errors, 2 domain errors (target
// outside the hull, rank-deficient designs, degenerate inputs).

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orbitope/io.hpp"
#include "orbitope/moments.hpp"
#include "orbitope/pair_hull.hpp"
#include "orbitope/rdc.hpp"
#include "orbitope/single_ion.hpp"
#include "orbitope/tensor.hpp"

namespace {

using namespace orbitope;

constexpr double kTwoPi = 6.28318530717958647692;

std::string fd(double x) { return io::format_double(x); }

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty())
    std::cout << text << "\n";
  else
    io::write_file(output_path, text + "\n");
}

const char* region_name(Region r) {
  switch (r) {
    case Region::inside: return "inside";
    case Region::boundary: return "boundary";
    default: return "outside";
  }
}

// Validates a decomposition before it is written anywhere; a reconstruction
// mismatch is a hard error rather than bad output.
double checked_error(const AtomicMeasure& m, const AnisoTensor& chi,
                     const AnisoTensor& target) {
  double err = norm_inf(evaluate(m, chi) - target);
  double scale = std::max(1.0, norm_inf(target));
  if (err > 1e-7 * scale)
    throw std::runtime_error("emitted decomposition failed its self-check");
  return err;
}

struct Options {
  std::string hull, target, input, obs, pair, rotation, ensemble, output;
  double alpha = 0.0, det = 0.0, alpha_angle = 0.0, sigma = 0.0, C = 1.0;
  double tol = 1e-9;
  int n_alpha = 720, n = 20, grid = 0, empirical = 0, which = 0;
  std::uint64_t seed = 1;
};

int run_membership(const Options& opt) {
  std::string hull_text = io::read_file(opt.hull);
  std::string target_text = io::read_file(opt.target);
  if (io::looks_like_pair(hull_text)) {
    TensorPair pair = io::parse_pair(hull_text);
    TensorPair target = io::parse_pair(target_text);
    AlphaSweepResult r = necessary_membership(pair, target, opt.n_alpha, opt.tol);
    std::string s = std::string("{\"pass\":") + (r.pass ? "true" : "false") +
                    ",\"min_margin\":" + fd(r.min_margin);
    if (!r.pass)
      s += ",\"witness_index\":" + std::to_string(r.witness_index) +
           ",\"witness_alpha\":[" + fd(r.witness.a1) + "," + fd(r.witness.a2) + "]";
    s += "}";
    emit(s, opt.output);
    return 0;
  }
  HullSpec hull = HullSpec::from_tensor(io::parse_tensor(hull_text));
  MembershipResult r = membership(hull, io::parse_tensor(target_text), opt.tol);
  emit(std::string("{\"classification\":\"") + region_name(r.region) +
           "\",\"margin\":" + fd(r.margin) + "}",
       opt.output);
  return 0;
}

int run_decompose(const Options& opt, bool facet_verb) {
  std::string hull_text = io::read_file(opt.hull);
  std::string target_text = io::read_file(opt.target);
  if (facet_verb || io::looks_like_pair(hull_text)) {
    TensorPair pair = io::parse_pair(hull_text);
    TensorPair target = io::parse_pair(target_text);
    CoaxialFace face =
        coaxial_face(pair, AlphaDirection::from_angle(opt.alpha_angle), opt.which);
    AtomicMeasure m = facet_decompose(face, pair, target, std::max(opt.tol, 1e-8));
    double err = std::max(checked_error(m, pair.chi1, target.chi1),
                          checked_error(m, pair.chi2, target.chi2));
    emit(io::measure_json_with_error(m, err), opt.output);
    return 0;
  }
  HullSpec hull = HullSpec::from_tensor(io::parse_tensor(hull_text));
  AnisoTensor target = io::parse_tensor(target_text);
  double scale = std::max(1.0, hull.max_eig);
  bool zero_eig = std::abs(hull.eig.eigenvalues[1]) <= 1e-9 * scale &&
                  std::abs(hull.max_eig + hull.min_eig) <= 1e-9 * scale;
  AtomicMeasure m = zero_eig ? decompose_zero_eig(hull, target, opt.tol)
                             : decompose(hull, target, Rotation(), opt.tol);
  emit(io::measure_json_with_error(m, checked_error(m, hull.chi, target)),
       opt.output);
  return 0;
}

int run_invariants(const Options& opt) {
  AnisoTensor t = io::parse_tensor(io::read_file(opt.input));
  CharPolyInvariants inv = invariants(t);
  emit("{\"alpha\":" + fd(inv.alpha) + ",\"det\":" + fd(inv.det) +
           ",\"in_region_x\":" +
           (region_x_contains(inv.alpha, inv.det) ? "true" : "false") + "}",
       opt.output);
  return 0;
}

int run_region_x(const Options& opt) {
  double alpha = opt.alpha, det = opt.det;
  if (!opt.input.empty()) {
    CharPolyInvariants inv = invariants(io::parse_tensor(io::read_file(opt.input)));
    alpha = inv.alpha;
    det = inv.det;
  }
  std::string s = "{\"alpha\":" + fd(alpha) + ",\"det\":" + fd(det) +
                  ",\"contained\":" +
                  (region_x_contains(alpha, det) ? "true" : "false") + "}";
  std::cout << s << "\n";
  if (!opt.output.empty()) {
    // Boundary-curve data for plotting: the cubic 27 det^2 = 4 alpha^3, the
    // lines det = +-(1 - alpha), the face-split curve, and an optional grid
    // scan of contained points.
    std::string csv = "kind,alpha,det\n";
    int n = 512;
    for (int i = 0; i <= n; ++i) {
      double a = static_cast<double>(i) / n;
      double c = std::sqrt(4.0 * a * a * a / 27.0);
      csv += "cubic," + fd(a) + "," + fd(c) + "\n";
      csv += "cubic," + fd(a) + "," + fd(-c) + "\n";
      csv += "line_upper," + fd(a) + "," + fd(1.0 - a) + "\n";
      csv += "line_lower," + fd(a) + "," + fd(a - 1.0) + "\n";
      csv += "face_split," + fd(a) + "," + fd(region_x_face_split_det(a)) + "\n";
    }
    for (int i = 0; i <= opt.grid; ++i)
      for (int j = 0; j <= opt.grid; ++j) {
        double a = static_cast<double>(i) / std::max(opt.grid, 1);
        double d = -0.26 + 0.52 * static_cast<double>(j) / std::max(opt.grid, 1);
        if (region_x_contains(a, d))
          csv += "scan," + fd(a) + "," + fd(d) + "\n";
      }
    io::write_file(opt.output, csv);
  }
  return 0;
}

int run_pmax(const Options& opt) {
  std::string hull_text = io::read_file(opt.hull);
  Rotation rot = io::parse_rotation(io::read_file(opt.rotation));
  double p;
  if (io::looks_like_pair(hull_text)) {
    p = p_max_pair_upper(io::parse_pair(hull_text),
                         io::parse_pair(io::read_file(opt.target)), rot,
                         opt.n_alpha);
    emit("{\"p_max_upper\":" + fd(p) + "}", opt.output);
  } else {
    HullSpec hull = HullSpec::from_tensor(io::parse_tensor(hull_text));
    p = p_max(hull, io::parse_tensor(io::read_file(opt.target)), rot);
    emit("{\"p_max\":" + fd(p) + "}", opt.output);
  }
  return 0;
}

int run_coaxial_scan(const Options& opt) {
  TensorPair pair = io::parse_pair(io::read_file(opt.pair));
  std::string csv = "alpha_angle,d1,d2,dim,M_alpha\n";
  for (int k = 0; k < opt.n_alpha; ++k) {
    double phi = kTwoPi * k / opt.n_alpha;
    CoaxialFace f = coaxial_face(pair, AlphaDirection::from_angle(phi), 0);
    csv += fd(phi) + "," + std::to_string(f.d1) + "," + std::to_string(f.d2) +
           "," + std::to_string(f.dim) + "," + fd(f.M_alpha) + "\n";
  }
  if (opt.output.empty())
    std::cout << csv;
  else
    io::write_file(opt.output, csv);
  return 0;
}

int run_facet_dim(const Options& opt) {
  TensorPair pair = io::parse_pair(io::read_file(opt.pair));
  CoaxialFace f =
      coaxial_face(pair, AlphaDirection::from_angle(opt.alpha_angle), opt.which);
  std::string s = "{\"d1\":" + std::to_string(f.d1) +
                  ",\"d2\":" + std::to_string(f.d2) +
                  ",\"dim\":" + std::to_string(f.dim) +
                  ",\"M_alpha\":" + fd(f.M_alpha);
  if (opt.empirical > 0) {
    Rng rng(opt.seed);
    s += ",\"empirical_dim\":" +
         std::to_string(face_dimension_empirical(f, pair, opt.empirical, rng));
  }
  emit(s + "}", opt.output);
  return 0;
}

int run_hull_dim(const Options& opt) {
  std::vector<AnisoTensor> ts = io::parse_tensor_list(io::read_file(opt.input));
  emit("{\"dim\":" + std::to_string(hull_dimension(ts)) + "}", opt.output);
  return 0;
}

int run_estimate(const Options& opt) {
  auto obs = io::parse_observations_csv(io::read_file(opt.obs));
  EstimateResult r = estimate_tensor(obs);
  if (r.ill_conditioned)
    std::cerr << "warning: design matrix condition number "
              << fd(r.condition) << " exceeds 1e8\n";
  emit("{\"chi\":" + io::tensor_json(r.chi) +
           ",\"rms_residual\":" + fd(r.rms_residual) +
           ",\"condition\":" + fd(r.condition) + "}",
       opt.output);
  return 0;
}

int run_simulate(const Options& opt) {
  io::Ensemble ens = io::parse_ensemble(io::read_file(opt.ensemble));
  if (opt.ion == 2 && !ens.has_chi2)
    throw std::domain_error("ensemble has no second generator tensor");
  AnisoTensor mean = mean_tensor(ens.measure, opt.ion == 2 ? ens.chi2 : ens.chi);
  auto obs = synthesize_observations(mean, opt.n, opt.sigma, opt.C, opt.seed);
  std::string csv = io::observations_csv(obs);
  if (opt.output.empty())
    std::cout << csv;
  else
    io::write_file(opt.output, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex hulls of SO(3) tensor orbits: membership, decompositions, "
               "coaxial face analysis and the RDC estimation pipeline"};
  app.require_subcommand(1);
  Options opt;

  auto* estimate = app.add_subcommand("estimate", "least-squares mean tensor from an observation CSV");
  estimate->add_option("--obs", opt.obs, "observation CSV")->required();
  estimate->add_option("--output", opt.output, "output JSON path");

  auto* mem = app.add_subcommand("membership", "hull membership (single tensor) or the necessary projection sweep (pair)");
  mem->add_option("--hull", opt.hull, "generator tensor or pair JSON")->required();
  mem->add_option("--target", opt.target, "target tensor or pair JSON")->required();
  mem->add_option("--tol", opt.tol, "boundary tolerance");
  mem->add_option("--n-alpha", opt.n_alpha, "sweep directions (pair case)");
  mem->add_option("--output", opt.output, "output JSON path");

  auto* dec = app.add_subcommand("decompose", "convex decomposition of a hull member into rotated generators");
  dec->add_option("--hull", opt.hull, "generator tensor or pair JSON")->required();
  dec->add_option("--target", opt.target, "target tensor or pair JSON")->required();
  dec->add_option("--alpha-angle", opt.alpha_angle, "facet direction in radians (pair case)");
  dec->add_option("--which", opt.which, "facet eigenvector: 0 top, 2 bottom (pair case)");
  dec->add_option("--tol", opt.tol, "boundary tolerance");
  dec->add_option("--output", opt.output, "output JSON path");

  auto* fdec = app.add_subcommand("facet-decompose", "decompose a point of a dimension-6 coaxial facet (pair)");
  fdec->add_option("--pair", opt.hull, "generator pair JSON")->required();
  fdec->add_option("--target", opt.target, "target pair JSON")->required();
  fdec->add_option("--alpha-angle", opt.alpha_angle, "facet direction in radians")->required();
  fdec->add_option("--which", opt.which, "facet eigenvector: 0 top, 2 bottom");
  fdec->add_option("--tol", opt.tol, "face tolerance");
  fdec->add_option("--output", opt.output, "output JSON path");

  auto* inv = app.add_subcommand("invariants", "characteristic-polynomial invariants (alpha, det)");
  inv->add_option("--input", opt.input, "tensor JSON")->required();
  inv->add_option("--output", opt.output, "output JSON path");

  auto* reg = app.add_subcommand("region-x", "attainable-invariant region test and plot data");
  reg->add_option("--input", opt.input, "tensor JSON (overrides --alpha/--det)");
  reg->add_option("--alpha", opt.alpha, "alpha invariant");
  reg->add_option("--det", opt.det, "det invariant");
  reg->add_option("--grid", opt.grid, "emit an NxN containment scan with the curves");
  reg->add_option("--output", opt.output, "curve CSV path");

  auto* pm = app.add_subcommand("pmax", "maximal weight of one orientation in any measure matching the target");
  pm->add_option("--hull", opt.hull, "generator tensor or pair JSON")->required();
  pm->add_option("--target", opt.target, "target tensor or pair JSON")->required();
  pm->add_option("--rotation", opt.rotation, "orientation JSON")->required();
  pm->add_option("--n-alpha", opt.n_alpha, "sweep directions (pair case)");
  pm->add_option("--output", opt.output, "output JSON path");

  auto* scan = app.add_subcommand("coaxial-scan", "CSV of coaxial face dimensions over a direction sweep");
  scan->add_option("--pair", opt.pair, "generator pair JSON")->required();
  scan->add_option("--n-alpha", opt.n_alpha, "sweep directions");
  scan->add_option("--output", opt.output, "output CSV path");

  auto* fdim = app.add_subcommand("facet-dim", "dimension of one coaxial face");
  fdim->add_option("--pair", opt.pair, "generator pair JSON")->required();
  fdim->add_option("--alpha-angle", opt.alpha_angle, "direction in radians")->required();
  fdim->add_option("--which", opt.which, "facet eigenvector: 0 top, 2 bottom");
  fdim->add_option("--empirical", opt.empirical, "cross-check with this many orbit samples");
  fdim->add_option("--seed", opt.seed, "sampling seed");
  fdim->add_option("--output", opt.output, "output JSON path");

  auto* hdim = app.add_subcommand("hull-dim", "dimension of the orbit hull of a tensor list");
  hdim->add_option("--input", opt.input, "tensor list / pair / tensor JSON")->required();
  hdim->add_option("--output", opt.output, "output JSON path");

  auto* sim = app.add_subcommand("simulate", "synthetic observation CSV from an ensemble JSON");
  sim->add_option("--ensemble", opt.ensemble, "ensemble JSON")->required();
  sim->add_option("--n", opt.n, "number of dipoles");
  sim->add_option("--sigma", opt.sigma, "gaussian noise level");
  sim->add_option("--C", opt.C, "physical constant");
  sim->add_option("--seed", opt.seed, "noise seed");
  sim->add_option("--output", opt.output, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) return run_estimate(opt);
    if (*mem) return run_membership(opt);
    if (*dec) return run_decompose(opt, false);
    if (*fdec) {
      return run_decompose(opt, true);
    }
    if (*inv) return run_invariants(opt);
    if (*reg) return run_region_x(opt);
    if (*pm) return run_pmax(opt);
    if (*scan) return run_coaxial_scan(opt);
    if (*fdim) return run_facet_dim(opt);
    if (*hdim) return run_hull_dim(opt);
    if (*sim) return run_simulate(opt);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
