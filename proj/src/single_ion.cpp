#include "orbitope/single_ion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "orbitope/numeric.hpp"

namespace orbitope {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

HullSpec HullSpec::from_tensor(const AnisoTensor& chi) {
  if (chi.norm() == 0.0)
    throw std::invalid_argument("hull generator must be a nonzero tensor");
  HullSpec h;
  h.chi = chi;
  h.eig = spectral(chi);
  h.max_eig = h.eig.eigenvalues[0];
  h.min_eig = h.eig.eigenvalues[2];
  h.alpha_geom = h.max_eig + 0.5 * h.min_eig;
  h.gamma_geom = -h.min_eig - 0.5 * h.max_eig;
  return h;
}

MembershipResult membership(const HullSpec& hull, const AnisoTensor& target,
                            double tol) {
  SpectralData s = spectral(target);
  double scale = std::max({1.0, hull.max_eig, -hull.min_eig});
  double eps = tol * scale;
  double margin = std::min(hull.max_eig - s.eigenvalues[0],
                           s.eigenvalues[2] - hull.min_eig);
  MembershipResult r;
  r.margin = margin;
  if (margin < -eps)
    r.region = Region::outside;
  else if (margin <= eps)
    r.region = Region::boundary;
  else
    r.region = Region::inside;
  return r;
}

CharPolyInvariants invariants(const AnisoTensor& chi) {
  Mat3 m = chi.matrix();
  double tr2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tr2 += m(i, j) * m(j, i);
  return {0.5 * tr2, m.det()};
}

bool region_x_contains(double alpha, double det, double tol) {
  return 27.0 * det * det <= 4.0 * alpha * alpha * alpha + tol &&
         alpha <= 1.0 - std::abs(det) + tol;
}

double region_x_face_split_det(double alpha) {
  double t = (4.0 / 27.0) * (alpha - 0.25) * (alpha - 1.0) * (alpha - 1.0);
  return std::sqrt(std::max(t, 0.0));
}

std::array<double, 2> f_map(double lam, double u, double v) {
  const double slack = 1e-12;
  if (lam < -slack || lam > 1.0 + slack || u < -slack || u > 1.0 + slack ||
      v < -slack || v > 1.0 + slack)
    throw std::invalid_argument("f_map arguments must lie in the unit cube");
  lam = clamp01(lam);
  u = clamp01(u);
  v = clamp01(v);
  double q = lam * (1.0 - lam);
  return {1.0 - q * (4.0 * v + u - 2.0 * u * v), q * u * (1.0 - 2.0 * lam * v)};
}

namespace {

// Residual and analytic Jacobian of the restriction of f to one cube face;
// the free variables are (lambda, u) on v = 1 and (lambda, v) on u = 1.
std::array<double, 2> face_value(FMapFace face, double a, double b) {
  if (face == FMapFace::v_one) return f_map(a, b, 1.0);
  return f_map(a, 1.0, b);
}

void face_jacobian(FMapFace face, double lam, double b, double j[2][2]) {
  double q = lam * (1.0 - lam);
  double dl = 1.0 - 2.0 * lam;
  if (face == FMapFace::v_one) {
    double u = b;
    j[0][0] = -dl * (4.0 - u);
    j[0][1] = q;
    j[1][0] = u * (dl * dl - 2.0 * q);
    j[1][1] = q * dl;
  } else {
    double v = b;
    j[0][0] = -dl * (1.0 + 2.0 * v);
    j[0][1] = -2.0 * q;
    j[1][0] = dl * (1.0 - 2.0 * lam * v) - 2.0 * v * q;
    j[1][1] = -2.0 * lam * q;
  }
}

double face_residual(FMapFace face, double a, double b,
                     const std::array<double, 2>& target) {
  auto val = face_value(face, a, b);
  return std::max(std::abs(val[0] - target[0]), std::abs(val[1] - target[1]));
}

bool newton_on_face(FMapFace face, const std::array<double, 2>& target,
                    double& a, double& b) {
  double res = face_residual(face, a, b, target);
  for (int it = 0; it < 80; ++it) {
    if (res < 1e-13) return true;
    double j[2][2];
    face_jacobian(face, a, b, j);
    auto val = face_value(face, a, b);
    double r0 = val[0] - target[0], r1 = val[1] - target[1];
    double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if (std::abs(det) < 1e-300) break;
    double da = (j[1][1] * r0 - j[0][1] * r1) / det;
    double db = (j[0][0] * r1 - j[1][0] * r0) / det;
    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 50; ++halving) {
      double an = clamp01(a - step * da), bn = clamp01(b - step * db);
      double rn = face_residual(face, an, bn, target);
      if (rn < res) {
        a = an;
        b = bn;
        res = rn;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return res < 1e-10;
}

void grid_scan(FMapFace face, const std::array<double, 2>& target, int n,
               double lo_a, double hi_a, double lo_b, double hi_b, double& a,
               double& b) {
  double best = -1.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      double ca = lo_a + (hi_a - lo_a) * i / n;
      double cb = lo_b + (hi_b - lo_b) * j / n;
      double r = face_residual(face, ca, cb, target);
      if (best < 0.0 || r < best) {
        best = r;
        a = ca;
        b = cb;
      }
    }
}

bool solve_on_face(FMapFace face, const std::array<double, 2>& target,
                   double& a, double& b, double& res) {
  grid_scan(face, target, 40, 0.0, 1.0, 0.0, 1.0, a, b);
  if (newton_on_face(face, target, a, b)) {
    res = face_residual(face, a, b, target);
    return true;
  }
  // Refining-grid fallback, then one more Newton pass.
  double lo_a = 0.0, hi_a = 1.0, lo_b = 0.0, hi_b = 1.0;
  for (int round = 0; round < 3; ++round) {
    grid_scan(face, target, 100, lo_a, hi_a, lo_b, hi_b, a, b);
    double wa = (hi_a - lo_a) / 10.0, wb = (hi_b - lo_b) / 10.0;
    lo_a = std::max(0.0, a - wa);
    hi_a = std::min(1.0, a + wa);
    lo_b = std::max(0.0, b - wb);
    hi_b = std::min(1.0, b + wb);
  }
  bool ok = newton_on_face(face, target, a, b);
  res = face_residual(face, a, b, target);
  return ok || res < 1e-9;
}

}  // namespace

FMapPreimage invert_f_map(double alpha, double det) {
  if (det < 0.0)
    throw std::domain_error("invert_f_map expects det >= 0 (negate the tensor first)");
  if (!region_x_contains(alpha, det, 1e-9))
    throw std::domain_error("invariants outside the attainable region");
  FMapFace primary = (alpha >= 1.0 / 3.0 && det >= region_x_face_split_det(alpha))
                         ? FMapFace::u_one
                         : FMapFace::v_one;
  std::array<double, 2> target = {alpha, det};
  for (FMapFace face : {primary, primary == FMapFace::u_one ? FMapFace::v_one
                                                            : FMapFace::u_one}) {
    double a = 0.0, b = 0.0, res = 0.0;
    if (solve_on_face(face, target, a, b, res)) {
      FMapPreimage p;
      p.face = face;
      p.lambda = a;
      p.u = face == FMapFace::v_one ? b : 1.0;
      p.v = face == FMapFace::v_one ? 1.0 : b;
      p.residual = res;
      return p;
    }
  }
  throw std::domain_error("f-map inversion failed to converge");
}

AnisoTensor evaluate(const AtomicMeasure& measure, const AnisoTensor& chi) {
  AnisoTensor sum;
  for (const auto& atom : measure.atoms)
    sum = sum + atom.weight * act(atom.rotation, chi);
  return sum;
}

std::optional<Rotation> orbit_alignment(const AnisoTensor& source,
                                        const AnisoTensor& target,
                                        double tol) {
  SpectralData ss = spectral(source), st = spectral(target);
  double scale = std::max({1.0, std::abs(st.eigenvalues[0]),
                           std::abs(st.eigenvalues[2])});
  for (int k = 0; k < 3; ++k)
    if (std::abs(ss.eigenvalues[static_cast<std::size_t>(k)] -
                 st.eigenvalues[static_cast<std::size_t>(k)]) > tol * scale)
      return std::nullopt;

  // U = F_t D F_s^T over the four det-1 sign matrices; the best one absorbs
  // eigenvector sign ambiguities.
  const double signs[4][3] = {
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::optional<Rotation> best;
  double best_err = 0.0;
  for (const auto& d : signs) {
    Mat3 fd = st.frame.matrix();
    for (int rr = 0; rr < 3; ++rr)
      for (int cc = 0; cc < 3; ++cc) fd(rr, cc) *= d[cc];
    Rotation u = unchecked_rotation(fd) * ss.frame.transposed();
    double err = norm_inf(act(u, source) - target);
    if (!best || err < best_err) {
      best = u;
      best_err = err;
    }
  }
  if (best_err > tol * scale) return std::nullopt;
  return best;
}

namespace {

// Decomposition of a point on the max-eigenvalue facet of `hull` into at
// most two vertices: the facet is a disk of radius gamma in the 2*theta
// plane of the top eigenvector, and the chord through the point meets the
// vertex circle at angular offsets +-acos(rho/gamma).
AtomicMeasure max_facet_chord(const HullSpec& hull, const AnisoTensor& target,
                              double tol) {
  SpectralData st = spectral(target);
  const Rotation& f = st.frame;
  const Rotation& g = hull.eig.frame;
  double scale = std::max(1.0, hull.max_eig - hull.min_eig);
  double rho = 0.5 * (st.eigenvalues[1] - st.eigenvalues[2]);
  double gamma = hull.gamma_geom;
  if (rho > gamma + 1e-6 * scale)
    throw std::domain_error("target is not on the facet disk");
  AtomicMeasure m;
  if (gamma <= tol * scale || rho >= gamma - tol * scale) {
    // Degenerate facet or a point on the vertex circle itself.
    m.atoms.push_back({1.0, f * g.transposed()});
    return m;
  }
  double delta = std::acos(clamp01(rho / gamma));
  const Vec3 e1 = {1.0, 0.0, 0.0};
  for (double sgn : {+1.0, -1.0}) {
    Rotation twist = coaxial_rotation(e1, sgn * delta / 2.0);
    m.atoms.push_back({0.5, f * twist * g.transposed()});
  }
  return m;
}

AtomicMeasure boundary_decompose(const HullSpec& hull,
                                 const AnisoTensor& target, double tol) {
  SpectralData st = spectral(target);
  double gap_top = hull.max_eig - st.eigenvalues[0];
  double gap_bot = st.eigenvalues[2] - hull.min_eig;
  if (gap_top <= gap_bot) return max_facet_chord(hull, target, tol);
  // Min-eigenvalue facet: decompose the negated problem, where it becomes
  // the max facet of conv(SO(3).(-chi)); the rotations carry over unchanged.
  return max_facet_chord(HullSpec::from_tensor(-hull.chi), -target, tol);
}

}  // namespace

AtomicMeasure decompose(const HullSpec& hull, const AnisoTensor& target,
                        const Rotation& vertex_rotation, double tol) {
  MembershipResult mem = membership(hull, target, tol);
  if (mem.region == Region::outside)
    throw std::domain_error("target lies outside the hull");
  if (mem.region == Region::boundary)
    return boundary_decompose(hull, target, tol);

  AnisoTensor vertex = act(vertex_rotation, hull.chi);
  AnisoTensor dir = target - vertex;
  if (norm_inf(dir) <= 1e-14 * std::max(1.0, norm_inf(vertex))) {
    AtomicMeasure m;
    m.atoms.push_back({1.0, vertex_rotation});
    return m;
  }

  // Exit point of the ray vertex -> target, parametrized by s = 1/t so the
  // boundary weight is found directly: point(s) = vertex + dir / s.  The
  // violation is convex along the ray, so its sign change is a single root;
  // bisecting the raw sign (no tolerance band) lands the exit point on the
  // facet to ~1e-12.
  auto point = [&](double s) { return vertex + (1.0 / s) * dir; };
  auto is_outside = [&](double s) {
    SpectralData sd = spectral(point(s));
    return std::max(sd.eigenvalues[0] - hull.max_eig,
                    hull.min_eig - sd.eigenvalues[2]) > 0.0;
  };
  double s_out = 0.5;
  int guard = 0;
  while (!is_outside(s_out)) {
    s_out *= 0.5;
    if (++guard > 200)
      throw std::domain_error("ray never exits the hull (degenerate input)");
  }
  double lo = s_out, hi = 1.0;  // outside at lo, not outside at hi
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (is_outside(mid) ? lo : hi) = mid;
  }
  double s_exit = hi;
  AnisoTensor boundary_point = point(s_exit);
  AtomicMeasure tail = boundary_decompose(hull, boundary_point, tol);

  AtomicMeasure m;
  double vertex_weight = 1.0 - s_exit;
  if (vertex_weight > 0.0) m.atoms.push_back({vertex_weight, vertex_rotation});
  for (const auto& atom : tail.atoms)
    m.atoms.push_back({s_exit * atom.weight, atom.rotation});
  return m;
}

namespace {

Rotation rotation_from_rotvec(const Vec3& w) {
  double angle = norm(w);
  if (angle < 1e-300) return Rotation();
  return coaxial_rotation({w[0] / angle, w[1] / angle, w[2] / angle}, angle);
}

}  // namespace

AtomicMeasure decompose_zero_eig(const HullSpec& hull,
                                 const AnisoTensor& target, double tol) {
  double scale = std::max(1.0, hull.max_eig);
  if (std::abs(hull.eig.eigenvalues[1]) > 1e-9 * scale ||
      std::abs(hull.max_eig + hull.min_eig) > 1e-9 * scale)
    throw std::invalid_argument(
        "two-atom decomposition needs eigenvalues proportional to (1, 0, -1)");
  if (membership(hull, target, tol).region == Region::outside)
    throw std::domain_error("target lies outside the hull");

  if (auto direct = orbit_alignment(hull.chi, target, 1e-9)) {
    AtomicMeasure m;
    m.atoms.push_back({1.0, *direct});
    return m;
  }

  // Normalize to the standard generator diag(1, 0, -1).
  double s = hull.max_eig;
  const Rotation& g = hull.eig.frame;
  AnisoTensor chi_std = AnisoTensor::from_coords({1.0, 0.0, 0.0, 0.5, 0.0});
  AnisoTensor tgt = (1.0 / s) * target;

  CharPolyInvariants inv = invariants(tgt);
  FMapPreimage pre = invert_f_map(inv.alpha, std::abs(inv.det));
  double theta = std::asin(std::sqrt(clamp01(pre.u)));
  double tau = std::asin(std::sqrt(clamp01(pre.v)));
  const Vec3 e2 = {0.0, 1.0, 0.0}, e3 = {0.0, 0.0, 1.0};

  // The two-rotation family lam*R(theta).chi + (1-lam)*S(tau).chi realizes
  // invariants (alpha, -det); composing both rotations with the half-turn
  // that negates the standard generator flips the determinant sign, so
  // positive-determinant targets take that branch.
  Rotation post;
  if (inv.det > 0.0) post = coaxial_rotation(e2, kPi / 2.0);

  auto family = [&](double lam, double th, double ta) {
    AnisoTensor c = lam * act(coaxial_rotation(e3, -th) * post, chi_std) +
                    (1.0 - lam) * act(coaxial_rotation(e2, ta) * post, chi_std);
    return c;
  };
  auto align = orbit_alignment(family(pre.lambda, theta, tau), tgt, 1e-5);
  if (!align)
    throw std::domain_error(
        "two-atom construction failed to match the target spectrum");

  // Near the double-root boundary of the invariant region the inversion
  // residual amplifies into an eigenvalue mismatch; a short Levenberg
  // polish on (lambda, theta, tau, frame) removes it.
  double lam = pre.lambda, th = theta, ta = tau;
  Rotation u_align = *align;
  auto residual5 = [&](double l, double t1, double t2, const Rotation& u) {
    AnisoTensor r = act(u, family(l, t1, t2)) - tgt;
    return r.coords();
  };
  auto res_norm = [&](const std::array<double, 5>& r) {
    double m = 0.0;
    for (double x : r) m = std::max(m, std::abs(x));
    return m;
  };
  std::array<double, 5> res = residual5(lam, th, ta, u_align);
  for (int it = 0; it < 20 && res_norm(res) > 1e-12; ++it) {
    const double h = 1e-7;
    double jac[5][6];
    for (int p = 0; p < 6; ++p) {
      double l = lam, t1 = th, t2 = ta;
      Vec3 w{};
      if (p == 0) l += h;
      else if (p == 1) t1 += h;
      else if (p == 2) t2 += h;
      else w[static_cast<std::size_t>(p - 3)] = h;
      auto rp = residual5(clamp01(l), t1, t2, u_align * rotation_from_rotvec(w));
      for (int k = 0; k < 5; ++k)
        jac[k][p] = (rp[static_cast<std::size_t>(k)] - res[static_cast<std::size_t>(k)]) / h;
    }
    // Levenberg step on the normal equations.
    std::vector<double> a(36, 0.0), b(6, 0.0);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        double sum = 0.0;
        for (int k = 0; k < 5; ++k) sum += jac[k][i] * jac[k][j];
        a[static_cast<std::size_t>(i * 6 + j)] = sum;
      }
      a[static_cast<std::size_t>(i * 6 + i)] += 1e-10;
      double sum = 0.0;
      for (int k = 0; k < 5; ++k) sum += jac[k][i] * res[static_cast<std::size_t>(k)];
      b[static_cast<std::size_t>(i)] = sum;
    }
    std::vector<double> step;
    try {
      step = num::solve_dense(a, b, 6);
    } catch (const std::domain_error&) {
      break;
    }
    double damp = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 25; ++halving) {
      double l = clamp01(lam - damp * step[0]);
      double t1 = th - damp * step[1], t2 = ta - damp * step[2];
      Rotation u = u_align * rotation_from_rotvec(
                                 {-damp * step[3], -damp * step[4], -damp * step[5]});
      auto rn = residual5(l, t1, t2, u);
      if (res_norm(rn) < res_norm(res)) {
        lam = l;
        th = t1;
        ta = t2;
        u_align = u;
        res = rn;
        improved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!improved) break;
  }

  AtomicMeasure m;
  auto push = [&](double w, const Rotation& r) {
    if (w > 1e-14) m.atoms.push_back({w, u_align * r * post * g.transposed()});
  };
  push(lam, coaxial_rotation(e3, -th));
  push(1.0 - lam, coaxial_rotation(e2, ta));
  if (m.atoms.size() == 1) m.atoms.front().weight = 1.0;

  double err = norm_inf(evaluate(m, hull.chi) - target);
  if (err > 1e-8 * std::max(1.0, s))
    throw std::domain_error("two-atom reconstruction check failed");
  return m;
}

FacetDisk facet(const HullSpec& hull, const Vec3& e, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("facet sign must be +1 (max) or -1 (min)");
  Rotation to_axis = rotation_from_to({1.0, 0.0, 0.0}, e);
  FacetDisk f;
  f.axis = e;
  f.sign = sign;
  double eigenvalue = sign == 1 ? hull.max_eig : hull.min_eig;
  f.radius = sign == 1 ? hull.gamma_geom : hull.alpha_geom;
  f.center = act(to_axis,
                 AnisoTensor::from_coords({eigenvalue, 0.0, 0.0, 0.0, 0.0}));
  double scale = std::max(1.0, hull.max_eig - hull.min_eig);
  f.degenerate = f.radius <= 1e-9 * scale;
  return f;
}

}  // namespace orbitope
