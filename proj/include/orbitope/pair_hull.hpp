#pragma once

// The convex body of the SO(3)-orbit of a pair of anisotropic tensors
// (10-dimensional for an independent pair): the circle of projections
// pi_alpha, coaxial faces with their dimension formula 2(d1 + d2), the
// moment-matrix membership test on a facet's two circle orbits, the <= 4
// atom facet decomposition, and dimension computations for N-tuples.

#include <vector>

#include "orbitope/moments.hpp"
#include "orbitope/rng.hpp"
#include "orbitope/single_ion.hpp"
#include "orbitope/tensor.hpp"

namespace orbitope {

struct TensorPair {
  AnisoTensor chi1;
  AnisoTensor chi2;
  int span_rank = 0;  // rank of {chi1, chi2} as 5-vectors, 1 or 2

  TensorPair() = default;
  TensorPair(const AnisoTensor& a, const AnisoTensor& b);
};

TensorPair act(const Rotation& r, const TensorPair& pair);

// A direction on the unit circle selecting the projection
// pi_alpha(w1, w2) = alpha1 w1 + alpha2 w2.
struct AlphaDirection {
  double a1 = 1.0;
  double a2 = 0.0;

  AlphaDirection() = default;
  AlphaDirection(double x, double y);  // throws unless x^2 + y^2 = 1 (1e-12)
  static AlphaDirection from_angle(double phi);
  AlphaDirection negated() const { return AlphaDirection(-a1, -a2); }
  AlphaDirection perpendicular() const { return AlphaDirection(-a2, a1); }
  double angle() const;
};

AnisoTensor project_alpha(const TensorPair& pair, const AlphaDirection& alpha);

// L_{e,alpha}(w) = e^T (w_alpha) e.
double L_e_alpha(const TensorPair& w, const Vec3& e,
                 const AlphaDirection& alpha);

// Coaxial face descriptor: the face of the pair hull supported by
// L_{e,alpha} at its maximum M_alpha, spanned by the coaxial orbit of
// act(base, pair).  d1 is the rank of the theta-plane component of the
// complementary tensor, d2 the rank of the two 2*theta-plane components;
// the face dimension is 2(d1 + d2).
struct CoaxialFace {
  Vec3 axis{};
  AlphaDirection alpha;
  double M_alpha = 0.0;
  Rotation base;
  int d1 = 0;
  int d2 = 0;
  int dim = 0;
};

// which_eigvec selects the eigenvector of chi_alpha realizing the face:
// 0 = top (face at M_alpha), 2 = bottom (equivalently the top face of
// -alpha, which is how it is stored).  The middle eigenvalue supports no
// face; passing 1 throws.
CoaxialFace coaxial_face(const TensorPair& pair, const AlphaDirection& alpha,
                         int which_eigvec = 0);

// Affine rank of n_samples points act(Q, act(base, pair)) with Q drawn from
// the full coaxial group of the face axis (both components), as vectors in
// R^10.  Singular values below 1e-8 of the largest are treated as zero.
int face_dimension_empirical(const CoaxialFace& face, const TensorPair& pair,
                             int n_samples, Rng& rng);

// 5 * (rank of the span of the tensors as 5-vectors).
int hull_dimension(const std::vector<AnisoTensor>& tensors);

// Decomposition of a point of a 6-dimensional coaxial facet into at most 4
// rotated copies of the pair, all rotations in the coaxial coset of the
// face.  The target must satisfy the face equations within tol; reconstruction
// is checked to 1e-7 before returning.  Throws std::domain_error for
// off-face targets, std::invalid_argument for faces of dimension < 6.
AtomicMeasure facet_decompose(const CoaxialFace& face, const TensorPair& pair,
                              const TensorPair& target, double tol = 1e-8);

// Necessary membership condition for the pair hull: every projection of a
// member lies in the single-ion hull of the projected generator.  Sweeps
// n_alpha equally spaced directions; the first violating direction (lowest
// index) is the witness.
struct AlphaSweepResult {
  bool pass = false;
  double min_margin = 0.0;
  int witness_index = -1;
  AlphaDirection witness;
};

AlphaSweepResult necessary_membership(const TensorPair& pair,
                                      const TensorPair& target,
                                      int n_alpha = 720, double tol = 1e-9);

// Experimental five-atom fit: shoot the ray from act(vertex_rotation, pair)
// through the target until the projection sweep first binds, then try to
// decompose the exit point on the binding coaxial facet (<= 4 atoms, so
// <= 5 overall).  Returns nullopt when the exit point is not on a usable
// dimension-6 coaxial face; a proven bound would need the boundary of the
// pair hull to be covered by coaxial faces, which is only conjectural, so
// callers must treat nullopt as "inconclusive", not "impossible".
// Throws std::domain_error if the target itself fails the sweep.
std::optional<AtomicMeasure> five_atom_fit(
    const TensorPair& pair, const TensorPair& target,
    const Rotation& vertex_rotation = Rotation(), int n_alpha = 720);

}  // namespace orbitope
