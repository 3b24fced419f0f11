#pragma once

// The convex body V = conv(SO(3).chi) of a single anisotropic tensor:
// membership through the eigenvalue-interval characterization, the coaxial
// facet disks, characteristic-polynomial invariants, and constructive
// decompositions of any member into at most 3 (generic chi) or 2 (chi with a
// zero eigenvalue) rotated copies of chi.

#include <array>
#include <optional>
#include <vector>

#include "orbitope/tensor.hpp"

namespace orbitope {

// Generator data for V.  Requires a nonzero tensor; then the extreme
// eigenvalues straddle zero and -M/2 >= m >= -2M.
struct HullSpec {
  AnisoTensor chi;
  SpectralData eig;      // frame + descending eigenvalues of chi
  double max_eig = 0.0;  // M > 0
  double min_eig = 0.0;  // m < 0
  double alpha_geom = 0.0;  // M + m/2, radius of the min-eigenvalue facet
  double gamma_geom = 0.0;  // -m - M/2, radius of the max-eigenvalue facet

  static HullSpec from_tensor(const AnisoTensor& chi);
};

enum class Region { inside, boundary, outside };

struct MembershipResult {
  Region region = Region::outside;
  // min(M - lambda_max, lambda_min - m); negative when outside (the
  // violation), within +-tol of zero on the boundary.
  double margin = 0.0;
};

// V is exactly the set of anisotropic tensors whose eigenvalues lie in
// [m, M]; `tol` (absolute, scaled by max(1, |M|, |m|)) pads the boundary.
MembershipResult membership(const HullSpec& hull, const AnisoTensor& target,
                            double tol = 1e-9);

// The two nontrivial coefficients of the characteristic polynomial
// x^3 - alpha x - det: alpha = tr(chi^2)/2 and det = det(chi).  Two tensors
// lie in the same orbit iff their invariants agree.
struct CharPolyInvariants {
  double alpha = 0.0;
  double det = 0.0;
};

CharPolyInvariants invariants(const AnisoTensor& chi);

// Attainable-invariant region for the hull normalized to eigenvalues
// (1, 0, -1): 27 det^2 <= 4 alpha^3 and alpha <= 1 - |det|.
bool region_x_contains(double alpha, double det, double tol = 1e-12);

// The separating curve between the two inversion faces,
// sqrt((4/27)(alpha - 1/4)(alpha - 1)^2), clamped to zero below alpha = 1/4.
double region_x_face_split_det(double alpha);

// Invariants of the two-rotation family lam*R(theta).chi + (1-lam)*S(tau).chi
// for chi = diag(1,0,-1), as a map of the cube via u = sin^2 theta,
// v = sin^2 tau:
//   f(lam,u,v) = (1 - lam(1-lam)(4v + u - 2uv),  lam(1-lam) u (1 - 2 lam v)).
// Throws std::invalid_argument outside [0,1]^3.
std::array<double, 2> f_map(double lam, double u, double v);

enum class FMapFace { v_one, u_one };  // cube faces v = 1 and u = 1

struct FMapPreimage {
  FMapFace face = FMapFace::v_one;
  double lambda = 0.0;
  double u = 0.0;  // sin^2 theta
  double v = 0.0;  // sin^2 tau
  double residual = 0.0;
};

// Inverts f on the union of the two cube faces for a target with det >= 0
// inside the attainable region (damped Newton seeded by a grid scan, with a
// refining-grid fallback).  Throws std::domain_error if the target is outside
// the region or the inversion cannot reach residual 1e-9.
FMapPreimage invert_f_map(double alpha, double det);

// A finite convex combination of rotated copies of the generator.
struct AtomicMeasure {
  struct Atom {
    double weight = 0.0;
    Rotation rotation;
  };
  std::vector<Atom> atoms;
};

// Sum of weight * act(rotation, chi) over the atoms.
AnisoTensor evaluate(const AtomicMeasure& measure, const AnisoTensor& chi);

// A rotation U with act(U, source) ~= target, when source and target have
// matching spectra (same orbit); nullopt otherwise.  The residual of the
// returned alignment is below tol * scale.
std::optional<Rotation> orbit_alignment(const AnisoTensor& source,
                                        const AnisoTensor& target,
                                        double tol = 1e-8);

// Decomposition into at most 3 atoms: boundary targets split into <= 2 atoms
// on their facet circle (chord construction); interior targets shoot a ray
// from the vertex act(vertex_rotation, chi) and recurse on the exit point.
// Throws std::domain_error when membership(target) is outside.
AtomicMeasure decompose(const HullSpec& hull, const AnisoTensor& target,
                        const Rotation& vertex_rotation = Rotation(),
                        double tol = 1e-9);

// Two-atom decomposition, available when the generator's eigenvalues are
// proportional to (1, 0, -1): invert f on the invariant plane, build the
// two-rotation combination, and align frames.  Throws std::invalid_argument
// for other generators and std::domain_error for outside targets.
AtomicMeasure decompose_zero_eig(const HullSpec& hull,
                                 const AnisoTensor& target, double tol = 1e-9);

// Coaxial facet of V in direction e: the disk of tensors with eigenvector e
// at eigenvalue M (sign = +1) or m (sign = -1).  Radius gamma_geom resp.
// alpha_geom; degenerate (a point) exactly when the matching eigenvalue of
// chi is repeated.  Its supporting functional is L_e = M (resp. L_e = m).
struct FacetDisk {
  Vec3 axis{};
  int sign = +1;
  double radius = 0.0;
  AnisoTensor center;
  bool degenerate = false;
};

FacetDisk facet(const HullSpec& hull, const Vec3& e, int sign);

}  // namespace orbitope
