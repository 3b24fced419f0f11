#include "orbitope/pair_hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "orbitope/numeric.hpp"

namespace orbitope {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

double pair_scale(const TensorPair& p) {
  return std::max({1e-300, p.chi1.norm(), p.chi2.norm()});
}

}  // namespace

TensorPair::TensorPair(const AnisoTensor& a, const AnisoTensor& b)
    : chi1(a), chi2(b) {
  std::vector<double> rows;
  rows.reserve(10);
  for (double c : a.coords()) rows.push_back(c);
  for (double c : b.coords()) rows.push_back(c);
  span_rank = num::rank_from_singular(num::singular_values(rows, 2, 5), 1e-8);
}

TensorPair act(const Rotation& r, const TensorPair& pair) {
  return TensorPair(act(r, pair.chi1), act(r, pair.chi2));
}

AlphaDirection::AlphaDirection(double x, double y) : a1(x), a2(y) {
  if (std::abs(x * x + y * y - 1.0) > 1e-12)
    throw std::invalid_argument("alpha must lie on the unit circle");
}

AlphaDirection AlphaDirection::from_angle(double phi) {
  AlphaDirection a;
  a.a1 = std::cos(phi);
  a.a2 = std::sin(phi);
  return a;
}

double AlphaDirection::angle() const { return std::atan2(a2, a1); }

AnisoTensor project_alpha(const TensorPair& pair, const AlphaDirection& alpha) {
  return alpha.a1 * pair.chi1 + alpha.a2 * pair.chi2;
}

double L_e_alpha(const TensorPair& w, const Vec3& e,
                 const AlphaDirection& alpha) {
  return L_e(project_alpha(w, alpha), e);
}

CoaxialFace coaxial_face(const TensorPair& pair, const AlphaDirection& alpha,
                         int which_eigvec) {
  if (which_eigvec == 1)
    throw std::invalid_argument(
        "the middle eigenvalue of chi_alpha does not support a face");
  if (which_eigvec != 0 && which_eigvec != 2)
    throw std::invalid_argument("which_eigvec must be 0 (top) or 2 (bottom)");
  // The bottom-eigenvector face is the top face of the opposite direction.
  AlphaDirection a = which_eigvec == 0 ? alpha : alpha.negated();

  AnisoTensor chi_a = project_alpha(pair, a);
  double scale = pair_scale(pair);
  if (chi_a.norm() <= 1e-12 * scale)
    throw std::invalid_argument("chi_alpha vanishes in this direction");
  SpectralData sa = spectral(chi_a);
  const Mat3& f = sa.frame.matrix();

  AnisoTensor chi_p = project_alpha(pair, a.perpendicular());
  Rotation ft = sa.frame.transposed();
  std::array<double, 5> ca = act(ft, chi_a).coords();
  std::array<double, 5> cp = act(ft, chi_p).coords();

  CoaxialFace face;
  face.axis = {f(0, 0), f(1, 0), f(2, 0)};
  face.alpha = a;
  face.M_alpha = sa.eigenvalues[0];
  face.base = Rotation();
  double cut = 1e-8 * scale;
  face.d1 = std::hypot(cp[1], cp[2]) > cut ? 1 : 0;
  std::vector<double> u2_rows = {ca[3], ca[4], cp[3], cp[4]};
  face.d2 = num::rank_from_singular(num::singular_values(u2_rows, 2, 2), 1e-8,
                                    cut);
  face.dim = 2 * (face.d1 + face.d2);
  return face;
}

int face_dimension_empirical(const CoaxialFace& face, const TensorPair& pair,
                             int n_samples, Rng& rng) {
  if (n_samples < 20)
    throw std::invalid_argument("need at least 20 samples for the affine rank");
  TensorPair base = act(face.base, pair);
  Vec3 perp = rotation_from_to({1.0, 0.0, 0.0}, face.axis) * Vec3{0.0, 0.0, 1.0};
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(n_samples) * 10);
  for (int i = 0; i < n_samples; ++i) {
    Rotation q = coaxial_rotation(face.axis, rng.uniform(0.0, kTwoPi));
    if (i % 2 == 1) q = q * coaxial_rotation(perp, kPi);
    TensorPair moved = act(q, base);
    for (double c : moved.chi1.coords()) pts.push_back(c);
    for (double c : moved.chi2.coords()) pts.push_back(c);
  }
  return num::affine_rank(pts, n_samples, 10, 1e-8, 1e-8 * pair_scale(pair));
}

int hull_dimension(const std::vector<AnisoTensor>& tensors) {
  if (tensors.empty())
    throw std::invalid_argument("hull dimension needs at least one tensor");
  std::vector<double> rows;
  rows.reserve(tensors.size() * 5);
  for (const auto& t : tensors)
    for (double c : t.coords()) rows.push_back(c);
  int n = static_cast<int>(tensors.size());
  return 5 * num::rank_from_singular(num::singular_values(rows, n, 5), 1e-8);
}

namespace {

// ----- facet decomposition internals ------------------------------------
//
// In the frame adapted to the face axis, the moving coordinates of a face
// point are three complex numbers: the theta-plane of the complementary
// tensor and the 2*theta-planes of both projections.  The two circle orbits
// of the coaxial group act as (e^{i t} u, e^{2i t} v1, e^{2i t} v2) and its
// conjugate, so everything reduces to the circle-hull moment problem.

struct FaceFrame {
  Complex gu;            // theta-plane of the complementary generator
  Complex gv1, gv2;      // 2*theta-planes of the two generator projections
};

bool rep_psd(Complex a, Complex b) {
  MomentMatrix m = moment_matrix(a, b);
  return m.psd;
}

// Radius of the slice {a : moment matrix of (a*dir, b0) psd} along direction
// phi; the determinant constraint is an ellipse inside |a| <= 1.
double slice_radius(double phi, Complex b0) {
  double num = 1.0 - std::norm(b0);
  if (num < 0.0) return -1.0;
  double kap = 2.0 * (1.0 - (std::polar(1.0, 2.0 * phi) * std::conj(b0)).real());
  if (kap < 1e-15) return 1.0;
  return std::min(1.0, std::sqrt(num / kap));
}

// Positive slack = strictly inside the slice at fixed second moment d0.
double slice_slack(Complex c, Complex d0) {
  if (std::abs(d0) > 1.0 + 1e-11) return -1.0;
  double phi = std::abs(c) > 0.0 ? std::arg(c) : 0.0;
  double r = slice_radius(phi, d0);
  if (r < 0.0) return -1.0;
  return r - std::abs(c);
}

struct SplitAtoms {
  std::vector<CircleAtom> plus;
  std::vector<CircleAtom> minus;
  double lambda = 1.0;  // weight of the plus side
};

// Search for t = lambda * (plus-orbit point) + (1-lambda) * (minus-orbit
// point) with at most 4 atoms overall.  The 2*theta coordinates force the
// second moments b0 = bt/lambda and d0 = dt/(1-lambda); only the first
// moments (a, c) and lambda remain free, tied by one linear equation in the
// theta-plane.  The searches below mirror the three ways a <= 4 split can
// happen: a pure one-orbit point, a vertex plus a <= 3 atom remainder, and a
// boundary-boundary pair found by a sweep in lambda.
SplitAtoms split_search(const FaceFrame& fr, Complex tu, Complex bt,
                        Complex dt) {
  SplitAtoms out;
  const double tol = 1e-9;

  if (std::abs(dt) < tol) {
    Complex a = tu / fr.gu;
    if (rep_psd(a, bt)) {
      out.plus = circle_hull_decompose(a, bt);
      out.lambda = 1.0;
      return out;
    }
  }
  if (std::abs(bt) < tol) {
    Complex c = tu / std::conj(fr.gu);
    if (rep_psd(c, dt)) {
      out.minus = circle_hull_decompose(c, dt);
      out.lambda = 0.0;
      return out;
    }
  }

  // Vertex on the plus side: |b| = 1 pins lambda = |bt| and a = sqrt(b).
  double lam = std::abs(bt);
  if (lam > 1e-12 && lam < 1.0 - 1e-12) {
    Complex d0 = dt / (1.0 - lam);
    for (double sgn : {+1.0, -1.0}) {
      Complex a = sgn * std::sqrt(bt / lam);
      Complex c = (tu - lam * fr.gu * a) / ((1.0 - lam) * std::conj(fr.gu));
      if (std::abs(d0) <= 1.0 + 1e-11 && rep_psd(c, d0)) {
        out.plus = {{1.0, std::arg(a)}};
        out.minus = circle_hull_decompose(c, d0);
        out.lambda = lam;
        return out;
      }
    }
  }
  double mu = std::abs(dt);
  if (mu > 1e-12 && mu < 1.0 - 1e-12) {
    lam = 1.0 - mu;
    Complex b0 = bt / lam;
    for (double sgn : {+1.0, -1.0}) {
      Complex c = sgn * std::sqrt(dt / mu);
      Complex a = (tu - mu * std::conj(fr.gu) * c) / (lam * fr.gu);
      if (std::abs(b0) <= 1.0 + 1e-11 && rep_psd(a, b0)) {
        out.plus = circle_hull_decompose(a, b0);
        out.minus = {{1.0, std::arg(c)}};
        out.lambda = lam;
        return out;
      }
    }
  }

  // Boundary-boundary split: sweep lambda, walk the boundary of the plus
  // slice, and bisect the angle where the forced minus-side point crosses
  // the boundary of its slice.
  double lam_lo = std::max(std::abs(bt), 1e-9);
  double lam_hi = std::min(1.0 - std::abs(dt), 1.0 - 1e-9);
  const int n_lam = 100, n_phi = 360;
  for (int il = 1; il < n_lam; ++il) {
    lam = lam_lo + (lam_hi - lam_lo) * il / n_lam;
    Complex b0 = bt / lam;
    Complex d0 = dt / (1.0 - lam);
    if (std::abs(b0) > 1.0 - 1e-12 || std::abs(d0) > 1.0 - 1e-12) continue;
    auto slack_at = [&](double phi) {
      Complex a = slice_radius(phi, b0) * std::polar(1.0, phi);
      Complex c = (tu - lam * fr.gu * a) / ((1.0 - lam) * std::conj(fr.gu));
      return slice_slack(c, d0);
    };
    std::array<double, n_phi> vals;
    for (int k = 0; k < n_phi; ++k)
      vals[static_cast<std::size_t>(k)] = slack_at(kTwoPi * k / n_phi);
    for (int k = 0; k < n_phi; ++k) {
      double v1 = vals[static_cast<std::size_t>(k)];
      double v2 = vals[static_cast<std::size_t>((k + 1) % n_phi)];
      if ((v1 < 0.0) == (v2 < 0.0) && v1 != 0.0) continue;
      double lo = kTwoPi * k / n_phi, hi = kTwoPi * (k + 1) / n_phi;
      double flo = v1;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = slack_at(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double phi = 0.5 * (lo + hi);
      Complex a = slice_radius(phi, b0) * std::polar(1.0, phi);
      Complex c = (tu - lam * fr.gu * a) / ((1.0 - lam) * std::conj(fr.gu));
      if (!rep_psd(a, b0) || !rep_psd(c, d0)) continue;
      std::vector<CircleAtom> plus, minus;
      try {
        plus = circle_hull_decompose(a, b0);
        minus = circle_hull_decompose(c, d0);
      } catch (const std::domain_error&) {
        continue;
      }
      if (plus.size() + minus.size() > 4) continue;
      out.plus = plus;
      out.minus = minus;
      out.lambda = lam;
      return out;
    }
  }
  throw std::runtime_error("coaxial facet split search failed");
}

}  // namespace

AtomicMeasure facet_decompose(const CoaxialFace& face, const TensorPair& pair,
                              const TensorPair& target, double tol) {
  if (face.dim != 6)
    throw std::invalid_argument("facet decomposition requires a face of dimension 6");
  double scale = std::max(1.0, pair_scale(pair));

  TensorPair gpair = act(face.base, pair);
  AnisoTensor g_a = project_alpha(gpair, face.alpha);
  AnisoTensor g_b = project_alpha(gpair, face.alpha.perpendicular());
  AnisoTensor t_a = project_alpha(target, face.alpha);
  AnisoTensor t_b = project_alpha(target, face.alpha.perpendicular());

  SpectralData sa = spectral(g_a);
  Rotation frame = sa.frame;
  Rotation ft = frame.transposed();
  std::array<double, 5> A = act(ft, g_a).coords();
  std::array<double, 5> B = act(ft, g_b).coords();
  std::array<double, 5> Ta = act(ft, t_a).coords();
  std::array<double, 5> Tb = act(ft, t_b).coords();

  double eps = std::max(tol, 1e-12) * scale;
  if (std::abs(Ta[0] - A[0]) > eps || std::hypot(Ta[1], Ta[2]) > eps ||
      std::abs(Tb[0] - B[0]) > eps)
    throw std::domain_error("target does not lie on the coaxial face");

  FaceFrame fr;
  fr.gu = Complex(B[1], B[2]);
  fr.gv1 = Complex(A[3], A[4]);
  fr.gv2 = Complex(B[3], B[4]);
  Complex tu(Tb[1], Tb[2]);
  Complex t1(Ta[3], Ta[4]);
  Complex t2(Tb[3], Tb[4]);

  // t_vec = bt * gv + dt * conj(gv): the coordinates of the target in the
  // two circle orbits' second-moment planes.
  std::vector<Complex> sys = {fr.gv1, std::conj(fr.gv1), fr.gv2,
                              std::conj(fr.gv2)};
  std::vector<Complex> bd = num::solve_dense(sys, {t1, t2}, 2);
  SplitAtoms split = split_search(fr, tu, bd[0], bd[1]);

  const Vec3 e1 = {1.0, 0.0, 0.0}, e3 = {0.0, 0.0, 1.0};
  Rotation reflect = coaxial_rotation(e3, kPi);
  AtomicMeasure m;
  auto emit = [&](const std::vector<CircleAtom>& atoms, double side_weight,
                  bool reflected) {
    for (const auto& at : atoms) {
      double w = side_weight * at.weight;
      if (w <= 1e-14) continue;
      Rotation q = coaxial_rotation(e1, at.theta);
      if (reflected) q = q * reflect;
      m.atoms.push_back({w, frame * q * ft * face.base});
    }
  };
  emit(split.plus, split.lambda, false);
  emit(split.minus, 1.0 - split.lambda, true);

  double total = 0.0;
  for (auto& atom : m.atoms) total += atom.weight;
  for (auto& atom : m.atoms) atom.weight /= total;

  double err = std::max(
      norm_inf(evaluate(m, pair.chi1) - target.chi1),
      norm_inf(evaluate(m, pair.chi2) - target.chi2));
  if (err > 1e-7 * scale)
    throw std::runtime_error("facet decomposition failed its reconstruction check");
  if (m.atoms.size() > 4)
    throw std::runtime_error("facet decomposition produced more than 4 atoms");
  return m;
}

std::optional<AtomicMeasure> five_atom_fit(const TensorPair& pair,
                                           const TensorPair& target,
                                           const Rotation& vertex_rotation,
                                           int n_alpha) {
  if (!necessary_membership(pair, target, n_alpha).pass)
    throw std::domain_error("target fails the necessary membership sweep");
  double scale = pair_scale(pair);
  TensorPair vertex = act(vertex_rotation, pair);
  AnisoTensor d1 = target.chi1 - vertex.chi1;
  AnisoTensor d2 = target.chi2 - vertex.chi2;
  if (std::max(norm_inf(d1), norm_inf(d2)) <= 1e-12 * scale) {
    AtomicMeasure m;
    m.atoms.push_back({1.0, vertex_rotation});
    return m;
  }

  auto point = [&](double s) {
    return TensorPair(vertex.chi1 + (1.0 / s) * d1, vertex.chi2 + (1.0 / s) * d2);
  };
  auto margin_at = [&](const TensorPair& p, double phi, int* side) {
    AlphaDirection alpha = AlphaDirection::from_angle(phi);
    AnisoTensor chi_a = project_alpha(pair, alpha);
    if (chi_a.norm() <= 1e-12 * scale)
      return std::numeric_limits<double>::infinity();
    SpectralData sg = spectral(chi_a);
    SpectralData st = spectral(project_alpha(p, alpha));
    double top = sg.eigenvalues[0] - st.eigenvalues[0];
    double bot = st.eigenvalues[2] - sg.eigenvalues[2];
    if (side) *side = top <= bot ? +1 : -1;
    return std::min(top, bot);
  };
  // Margin of the binding projection constraint at ray parameter s: grid
  // scan plus a golden-section refinement of the direction, so the exit
  // point lands on the continuous constraint surface rather than a grid
  // outer approximation of it.
  auto sweep_margin = [&](double s, AlphaDirection* arg = nullptr) {
    TensorPair p = point(s);
    double best = std::numeric_limits<double>::infinity();
    double best_phi = 0.0;
    for (int k = 0; k < n_alpha; ++k) {
      double phi = kTwoPi * k / n_alpha;
      double m = margin_at(p, phi, nullptr);
      if (m < best) {
        best = m;
        best_phi = phi;
      }
    }
    double gap = kTwoPi / n_alpha;
    double lo_phi = best_phi - gap, hi_phi = best_phi + gap;
    const double golden = 0.61803398874989485;
    double x1 = hi_phi - golden * (hi_phi - lo_phi);
    double x2 = lo_phi + golden * (hi_phi - lo_phi);
    double f1 = margin_at(p, x1, nullptr), f2 = margin_at(p, x2, nullptr);
    for (int it = 0; it < 60; ++it) {
      if (f1 <= f2) {
        hi_phi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi_phi - golden * (hi_phi - lo_phi);
        f1 = margin_at(p, x1, nullptr);
      } else {
        lo_phi = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo_phi + golden * (hi_phi - lo_phi);
        f2 = margin_at(p, x2, nullptr);
      }
    }
    double phi = 0.5 * (lo_phi + hi_phi);
    int side = +1;
    double m = margin_at(p, phi, &side);
    if (m < best) best = m;
    if (arg) {
      AlphaDirection alpha = AlphaDirection::from_angle(phi);
      *arg = side > 0 ? alpha : alpha.negated();
    }
    return best;
  };

  double s_out = 0.5;
  int guard = 0;
  while (sweep_margin(s_out) > 0.0) {
    s_out *= 0.5;
    if (++guard > 200) return std::nullopt;
  }
  double lo = s_out, hi = 1.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (sweep_margin(mid) <= 0.0 ? lo : hi) = mid;
  }
  double s_exit = hi;
  TensorPair boundary = point(s_exit);
  AlphaDirection binding = AlphaDirection(1, 0);
  sweep_margin(s_exit, &binding);

  // The face through the exit point: rotate the canonical face so its axis
  // is the top eigenvector of the exit point's binding projection.
  CoaxialFace face;
  try {
    face = coaxial_face(pair, binding, 0);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  if (face.dim != 6) return std::nullopt;
  SpectralData sb = spectral(project_alpha(boundary, binding));
  Vec3 exit_axis = {sb.frame.matrix()(0, 0), sb.frame.matrix()(1, 0),
                    sb.frame.matrix()(2, 0)};
  face.base = rotation_from_to(face.axis, exit_axis);
  face.axis = exit_axis;

  AtomicMeasure tail;
  try {
    tail = facet_decompose(face, pair, boundary, 1e-6);
  } catch (const std::exception&) {
    return std::nullopt;  // exit point off the face: inconclusive
  }
  AtomicMeasure m;
  if (1.0 - s_exit > 0.0) m.atoms.push_back({1.0 - s_exit, vertex_rotation});
  for (const auto& atom : tail.atoms)
    m.atoms.push_back({s_exit * atom.weight, atom.rotation});
  double err = std::max(norm_inf(evaluate(m, pair.chi1) - target.chi1),
                        norm_inf(evaluate(m, pair.chi2) - target.chi2));
  if (err > 1e-6 * std::max(1.0, scale) || m.atoms.size() > 5)
    return std::nullopt;
  return m;
}

AlphaSweepResult necessary_membership(const TensorPair& pair,
                                      const TensorPair& target, int n_alpha,
                                      double tol) {
  if (n_alpha < 8)
    throw std::invalid_argument("the sweep needs at least 8 directions");
  double scale = pair_scale(pair);
  AlphaSweepResult out;
  out.min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_alpha; ++k) {
    AlphaDirection alpha = AlphaDirection::from_angle(kTwoPi * k / n_alpha);
    AnisoTensor chi_a = project_alpha(pair, alpha);
    AnisoTensor tgt_a = project_alpha(target, alpha);
    if (chi_a.norm() <= 1e-12 * scale) {
      // Degenerate projection: the hull collapses to the origin.
      if (tgt_a.norm() > tol * scale) {
        out.pass = false;
        out.witness_index = k;
        out.witness = alpha;
        out.min_margin = -tgt_a.norm();
        return out;
      }
      out.min_margin = std::min(out.min_margin, 0.0);
      continue;
    }
    MembershipResult mem =
        membership(HullSpec::from_tensor(chi_a), tgt_a, tol);
    out.min_margin = std::min(out.min_margin, mem.margin);
    if (mem.region == Region::outside) {
      out.pass = false;
      out.witness_index = k;
      out.witness = alpha;
      return out;
    }
  }
  out.pass = true;
  return out;
}

}  // namespace orbitope
