#pragma once

// Core types for anisotropic susceptibility tensors and rotations: the
// conjugation action of SO(3) on trace-free symmetric 3x3 tensors, spectral
// analysis with deterministic conventions, coaxial (axis-stabilizing)
// rotations, and the splitting of a tensor into the parts a coaxial subgroup
// acts on trivially / by theta / by 2*theta.

#include <array>
#include <cstddef>

#include "orbitope/rng.hpp"

namespace orbitope {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);

struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity();
  Mat3 transposed() const;
  Vec3 operator*(const Vec3& v) const;
  Mat3 operator*(const Mat3& o) const;
  double det() const;

  double& operator()(int r, int c) { return m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
  double operator()(int r, int c) const { return m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
};

// A trace-free symmetric 3x3 tensor, stored as the 5-vector (v, w, x, y, z):
//
//   [ v      w        x     ]
//   [ w   -v/2 + y    z     ]
//   [ x      z     -v/2 - y ]
//
// so e1 is an eigenvector iff w = x = 0, and a rotation about e1 acts
// trivially on v, by theta on (w, x) and by 2*theta on (y, z).
class AnisoTensor {
 public:
  AnisoTensor() = default;

  static AnisoTensor from_coords(const std::array<double, 5>& c);

  // Strict conversion used at I/O boundaries: throws std::invalid_argument
  // if `m` is not symmetric and trace-free within `tol` (absolute, on top of
  // a relative allowance for large entries).
  static AnisoTensor from_matrix(const Mat3& m, double tol = 1e-10);

  const std::array<double, 5>& coords() const { return c_; }
  Mat3 matrix() const;

  AnisoTensor operator+(const AnisoTensor& o) const;
  AnisoTensor operator-(const AnisoTensor& o) const;
  AnisoTensor operator-() const;
  AnisoTensor operator*(double s) const;

  // Euclidean norm of the coordinate vector.
  double norm() const;

 private:
  std::array<double, 5> c_{};
};

AnisoTensor operator*(double s, const AnisoTensor& t);

// Max absolute entry of the matrix view of `t` (the norm used for
// reconstruction checks throughout the library).
double norm_inf(const AnisoTensor& t);

// A member of SO(3).  `from_matrix` enforces ||R R^T - I||_inf <= 1e-12 and
// |det R - 1| <= 1e-12; products and transposes stay within validation slack.
class Rotation {
 public:
  Rotation() : m_(Mat3::identity()) {}

  static Rotation from_matrix(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  Rotation transposed() const;
  Rotation operator*(const Rotation& o) const;
  Vec3 operator*(const Vec3& v) const;

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;

  friend Rotation unchecked_rotation(const Mat3& m);
};

// Wraps a matrix that is already known to be a rotation (products of
// validated rotations, algebraic constructions).  No validation.
Rotation unchecked_rotation(const Mat3& m);

// The left action R.chi = R chi R^T.
AnisoTensor act(const Rotation& r, const AnisoTensor& chi);

// Pointwise evaluation of the quadratic form e^T chi e for a unit vector e.
// Throws std::invalid_argument if ||e| - 1| > 1e-12.
double L_e(const AnisoTensor& chi, const Vec3& e);

struct SpectralData {
  std::array<double, 3> eigenvalues{};  // descending; they sum to zero
  Rotation frame;                       // columns are the eigenvectors
};

// Eigen-decomposition with deterministic conventions: eigenvalues sorted
// descending; within a repeated eigenvalue the eigenspace basis comes from
// Gram-Schmidt on the projections of (e1, e2, e3); the extreme eigenvectors
// get their first significant component made positive and the middle one is
// cross(v_min, v_max) so the frame is a rotation.
SpectralData spectral(const AnisoTensor& chi);

// Rotation by `theta` about the unit axis `e` (Rodrigues).  Throws on a
// non-unit axis.
Rotation coaxial_rotation(const Vec3& e, double theta);

// A rotation mapping unit vector `a` to unit vector `b` (about a x b; any
// perpendicular axis when a = -b).
Rotation rotation_from_to(const Vec3& a, const Vec3& b);

struct IsotypicalSplit {
  double scalar = 0.0;            // e^T chi e, the part fixed by rotations about e
  std::array<double, 2> u1{};     // rotates by theta
  std::array<double, 2> u2{};     // rotates by 2*theta
  Vec3 axis{};
};

// Split of `chi` relative to the coaxial subgroup of `e`.  The u1/u2 planes
// are expressed in the canonical frame rotation_from_to(e1, e); they are
// well-defined up to a rotation of that frame, so downstream code only uses
// norms and relative angles.
IsotypicalSplit isotypical_split(const AnisoTensor& chi, const Vec3& e);

// Inverse of isotypical_split (exact reassembly in the same canonical frame).
AnisoTensor reassemble(const IsotypicalSplit& s);

// Dimension of the tangent space { r chi + chi r^T : r skew } at chi:
// 3 for distinct eigenvalues, 2 when an eigenvalue is repeated.
// Throws std::invalid_argument on the zero tensor.
int orbit_dimension(const AnisoTensor& chi);

// Haar-uniform rotation (internal quaternion sampling).
Rotation random_rotation(Rng& rng);

}  // namespace orbitope
