#include "orbitope/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orbitope/numeric.hpp"

namespace orbitope {

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  return {a[0] / n, a[1] / n, a[2] / n};
}

Mat3 Mat3::identity() {
  Mat3 r;
  r.m = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    r[static_cast<std::size_t>(i)] =
        (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

double Mat3::det() const {
  const auto& a = *this;
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

AnisoTensor AnisoTensor::from_coords(const std::array<double, 5>& c) {
  AnisoTensor t;
  t.c_ = c;
  return t;
}

namespace {

// Coordinate extraction from a (numerically) symmetric trace-free matrix;
// symmetrizes and discards any trace residue.
AnisoTensor extract(const Mat3& m) {
  return AnisoTensor::from_coords({m(0, 0),
                                   0.5 * (m(0, 1) + m(1, 0)),
                                   0.5 * (m(0, 2) + m(2, 0)),
                                   0.5 * (m(1, 1) - m(2, 2)),
                                   0.5 * (m(1, 2) + m(2, 1))});
}

double matrix_scale(const Mat3& m) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s = std::max(s, std::abs(m(i, j)));
  return s;
}

}  // namespace

AnisoTensor AnisoTensor::from_matrix(const Mat3& m, double tol) {
  double allowance = tol * std::max(1.0, matrix_scale(m));
  double asym = std::max({std::abs(m(0, 1) - m(1, 0)),
                          std::abs(m(0, 2) - m(2, 0)),
                          std::abs(m(1, 2) - m(2, 1))});
  if (asym > allowance)
    throw std::invalid_argument("tensor matrix is not symmetric");
  double trace = m(0, 0) + m(1, 1) + m(2, 2);
  if (std::abs(trace) > allowance)
    throw std::invalid_argument("tensor matrix is not trace-free");
  return extract(m);
}

Mat3 AnisoTensor::matrix() const {
  Mat3 r;
  r.m = {{{c_[0], c_[1], c_[2]},
          {c_[1], -0.5 * c_[0] + c_[3], c_[4]},
          {c_[2], c_[4], -0.5 * c_[0] - c_[3]}}};
  return r;
}

AnisoTensor AnisoTensor::operator+(const AnisoTensor& o) const {
  std::array<double, 5> c;
  for (int i = 0; i < 5; ++i) c[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)] + o.c_[static_cast<std::size_t>(i)];
  return from_coords(c);
}

AnisoTensor AnisoTensor::operator-(const AnisoTensor& o) const {
  std::array<double, 5> c;
  for (int i = 0; i < 5; ++i) c[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)] - o.c_[static_cast<std::size_t>(i)];
  return from_coords(c);
}

AnisoTensor AnisoTensor::operator-() const { return *this * -1.0; }

AnisoTensor AnisoTensor::operator*(double s) const {
  std::array<double, 5> c;
  for (int i = 0; i < 5; ++i) c[static_cast<std::size_t>(i)] = s * c_[static_cast<std::size_t>(i)];
  return from_coords(c);
}

double AnisoTensor::norm() const {
  double s = 0.0;
  for (double x : c_) s += x * x;
  return std::sqrt(s);
}

AnisoTensor operator*(double s, const AnisoTensor& t) { return t * s; }

double norm_inf(const AnisoTensor& t) {
  return matrix_scale(t.matrix());
}

Rotation unchecked_rotation(const Mat3& m) {
  return Rotation(m, Rotation::Unchecked{});
}

Rotation Rotation::from_matrix(const Mat3& m) {
  Mat3 g = m * m.transposed();
  double err = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      err = std::max(err, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  if (err > 1e-12)
    throw std::invalid_argument("rotation matrix is not orthogonal");
  if (std::abs(m.det() - 1.0) > 1e-12)
    throw std::invalid_argument("rotation matrix must have determinant 1");
  return Rotation(m, Unchecked{});
}

Rotation Rotation::transposed() const {
  return Rotation(m_.transposed(), Unchecked{});
}

Rotation Rotation::operator*(const Rotation& o) const {
  return Rotation(m_ * o.m_, Unchecked{});
}

Vec3 Rotation::operator*(const Vec3& v) const { return m_ * v; }

AnisoTensor act(const Rotation& r, const AnisoTensor& chi) {
  return extract(r.matrix() * chi.matrix() * r.matrix().transposed());
}

static void require_unit(const Vec3& e) {
  if (std::abs(norm(e) - 1.0) > 1e-12)
    throw std::invalid_argument("axis must be a unit vector");
}

double L_e(const AnisoTensor& chi, const Vec3& e) {
  require_unit(e);
  Vec3 me = chi.matrix() * e;
  return dot(e, me);
}

namespace {

// First component with |c| above a small cutoff decides the sign.
void fix_sign(std::array<double, 3>& v) {
  for (double c : v) {
    if (std::abs(c) > 1e-9) {
      if (c < 0.0)
        for (double& x : v) x = -x;
      return;
    }
  }
}

}  // namespace

SpectralData spectral(const AnisoTensor& chi) {
  num::Eigen3 e = num::eigen_sym3(chi.matrix().m);
  double scale = std::max({1.0, std::abs(e.values[0]), std::abs(e.values[2])});
  double degen = 1e-9 * scale;

  // Re-basis 2-dimensional eigenspaces deterministically from the standard
  // basis projections.
  for (int k = 0; k < 2; ++k) {
    std::size_t i = static_cast<std::size_t>(k), j = static_cast<std::size_t>(k + 1);
    if (std::abs(e.values[i] - e.values[j]) > degen) continue;
    const auto vi = e.vectors[i], vj = e.vectors[j];
    auto proj = [&](const Vec3& u) -> Vec3 {
      double a = dot(u, vi), b = dot(u, vj);
      return {a * vi[0] + b * vj[0], a * vi[1] + b * vj[1], a * vi[2] + b * vj[2]};
    };
    Vec3 u1{}, u2{};
    bool have1 = false, have2 = false;
    for (const Vec3& basis : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
      Vec3 p = proj(basis);
      if (!have1) {
        if (norm(p) > 1e-6) {
          u1 = normalized(p);
          have1 = true;
        }
        continue;
      }
      double c = dot(p, u1);
      Vec3 q = {p[0] - c * u1[0], p[1] - c * u1[1], p[2] - c * u1[2]};
      if (norm(q) > 1e-6) {
        u2 = normalized(q);
        have2 = true;
        break;
      }
    }
    if (have1 && have2) {
      e.vectors[i] = u1;
      e.vectors[j] = u2;
    }
  }

  fix_sign(e.vectors[0]);
  fix_sign(e.vectors[2]);
  Vec3 mid = cross(e.vectors[2], e.vectors[0]);

  Mat3 f;
  for (int r = 0; r < 3; ++r) {
    f(r, 0) = e.vectors[0][static_cast<std::size_t>(r)];
    f(r, 1) = mid[static_cast<std::size_t>(r)];
    f(r, 2) = e.vectors[2][static_cast<std::size_t>(r)];
  }
  SpectralData out;
  out.eigenvalues = e.values;
  out.frame = Rotation::from_matrix(f);
  return out;
}

Rotation coaxial_rotation(const Vec3& e, double theta) {
  require_unit(e);
  double c = std::cos(theta), s = std::sin(theta), t = 1.0 - c;
  Mat3 r;
  r.m = {{{c + t * e[0] * e[0], t * e[0] * e[1] - s * e[2], t * e[0] * e[2] + s * e[1]},
          {t * e[0] * e[1] + s * e[2], c + t * e[1] * e[1], t * e[1] * e[2] - s * e[0]},
          {t * e[0] * e[2] - s * e[1], t * e[1] * e[2] + s * e[0], c + t * e[2] * e[2]}}};
  return unchecked_rotation(r);
}

Rotation rotation_from_to(const Vec3& a, const Vec3& b) {
  require_unit(a);
  require_unit(b);
  double c = dot(a, b);
  Vec3 ax = cross(a, b);
  double s = norm(ax);
  if (s > 1e-12) return coaxial_rotation(normalized(ax), std::atan2(s, c));
  if (c > 0.0) return Rotation();
  // a = -b: rotate by pi about the standard axis least aligned with a.
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(a[static_cast<std::size_t>(i)]) < std::abs(a[static_cast<std::size_t>(k)])) k = i;
  Vec3 u{};
  u[static_cast<std::size_t>(k)] = 1.0;
  double p = dot(u, a);
  Vec3 perp = {u[0] - p * a[0], u[1] - p * a[1], u[2] - p * a[2]};
  return coaxial_rotation(normalized(perp), 3.14159265358979323846);
}

IsotypicalSplit isotypical_split(const AnisoTensor& chi, const Vec3& e) {
  require_unit(e);
  Rotation to_axis = rotation_from_to({1.0, 0.0, 0.0}, e);
  AnisoTensor adapted = act(to_axis.transposed(), chi);
  const auto& c = adapted.coords();
  IsotypicalSplit s;
  s.scalar = c[0];
  s.u1 = {c[1], c[2]};
  s.u2 = {c[3], c[4]};
  s.axis = e;
  return s;
}

AnisoTensor reassemble(const IsotypicalSplit& s) {
  Rotation to_axis = rotation_from_to({1.0, 0.0, 0.0}, s.axis);
  AnisoTensor adapted = AnisoTensor::from_coords(
      {s.scalar, s.u1[0], s.u1[1], s.u2[0], s.u2[1]});
  return act(to_axis, adapted);
}

int orbit_dimension(const AnisoTensor& chi) {
  if (chi.norm() == 0.0)
    throw std::invalid_argument("orbit dimension is undefined for the zero tensor");
  // Tangent vectors r chi + chi r^T for the three skew generators.
  Mat3 x = chi.matrix();
  std::vector<double> rows;
  rows.reserve(15);
  const int gen[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& g : gen) {
    Mat3 r;
    r.m = {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
    r(g[0], g[1]) = 1.0;
    r(g[1], g[0]) = -1.0;
    Mat3 t = r * x;
    Mat3 tangent;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) tangent(i, j) = t(i, j) + t(j, i);
    AnisoTensor tv = AnisoTensor::from_matrix(tangent, 1e-6);
    for (double c : tv.coords()) rows.push_back(c);
  }
  return num::rank_from_singular(num::singular_values(rows, 3, 5), 1e-8);
}

Rotation random_rotation(Rng& rng) {
  double q[4];
  double n = 0.0;
  do {
    n = 0.0;
    for (double& qi : q) {
      qi = rng.gaussian();
      n += qi * qi;
    }
  } while (n < 1e-12);
  n = std::sqrt(n);
  double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  Mat3 r;
  r.m = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
          {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
          {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  return unchecked_rotation(r);
}

}  // namespace orbitope
