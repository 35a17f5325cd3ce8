#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hyperslice/combinatorics.hpp"
#include "hyperslice/linalg.hpp"
#include "hyperslice/zonotope.hpp"

namespace hyperslice {

/// Absolute slack on "free coordinate in [-1, 1]" when solving for a slice vertex.
inline constexpr double kBoundaryTolerance = 1e-9;
/// Slice vertices closer than this are the same vertex.
inline constexpr double kVertexMergeDistance = 1e-9;

/// A parallelotope base + Z(g_1, ..., g_n). The standard cube [-1, 1]^n has
/// g_i = 2 e_i and base (-1, ..., -1).
///
/// Points are also addressed in cube coordinates u in [-1, 1]^n via
/// x = center + sum_i u_i g_i / 2, which lets every face computation reuse
/// the cube's logic.
class Body {
public:
    static Body cube(std::size_t n);
    /// Throws InvalidInput if the generators are not n independent vectors in R^n.
    static Body parallelotope(VectorList edge_generators, Vector base);

    std::size_t n() const { return base_.size(); }
    const VectorList& edge_generators() const { return generators_; }
    const Vector& base() const { return base_; }
    Vector center() const;
    Zonotope zonotope() const { return Zonotope(base_, generators_); }
    bool is_standard_cube() const { return standard_cube_; }

    /// Cube coordinates of an ambient point.
    Vector to_cube(const Vector& x) const;
    /// Cube coordinates of an ambient direction (no translation).
    Vector direction_to_cube(const Vector& v) const;

private:
    Body(VectorList generators, Vector base, Matrix half_inverse, bool standard_cube);

    VectorList generators_;
    Vector base_;
    Matrix half_inverse_;  // inverse of the matrix with columns g_i / 2
    bool standard_cube_ = false;
};

/// k unit vectors spanning the direction space of a k-flat.
class FlatOrientation {
public:
    /// Vectors whose norm is off by more than 1e-12 are normalized. Throws
    /// InvalidInput on an empty list or mixed dimensions, DegenerateGeometry
    /// on a zero vector or a rank-deficient set.
    explicit FlatOrientation(VectorList spans);

    /// e_1, ..., e_k in R^n.
    static FlatOrientation axis(std::size_t n, std::size_t k);

    std::size_t n() const { return spans_.front().size(); }
    std::size_t k() const { return spans_.size(); }
    const VectorList& spans() const { return spans_; }

    NormalBasis normal_basis() const { return orthonormal_complement(spans_, n()); }

private:
    VectorList spans_;
};

/// tau + span(orientation), with tau given in normal-space coordinates so it
/// is perpendicular to the orientation by construction.
class Flat {
public:
    Flat(FlatOrientation orientation, Vector tau);
    Flat(FlatOrientation orientation, NormalBasis basis, Vector tau);

    const FlatOrientation& orientation() const { return orientation_; }
    const NormalBasis& normal_basis() const { return basis_; }
    const Vector& tau() const { return tau_; }
    /// tau as an ambient point.
    Vector anchor() const { return reconstruct(tau_, basis_); }

private:
    FlatOrientation orientation_;
    NormalBasis basis_;
    Vector tau_;
};

/// A codimension-k face: cube coordinates `fixed[a]` pinned at `signs[a]`,
/// the remaining `free` coordinates ranging over [-1, 1].
struct Face {
    IndexSet fixed;
    std::vector<int> signs;
    IndexSet free;
};

/// All C(n, k) 2^k faces of dimension n - k: fixed-index subsets in
/// lexicographic order, and for each, sign patterns in binary order
/// (bit a set -> signs[a] = +1).
std::vector<Face> enumerate_faces(std::size_t n, std::size_t k);

/// P_N(F) in normal-space coordinates, anchored at the face's true position.
Zonotope face_zonotope(const Body& body, const Face& face, const NormalBasis& basis);

/// tau in P_N(F), i.e. the flat meets the face. Lower-dimensional projections
/// (faces parallel to the flat's directions) are tested within their affine hull.
bool face_intersects(const Body& body, const Flat& flat, const Face& face,
                     double tol = kMembershipTolerance);

struct SliceDiagnostics {
    std::size_t singular_systems = 0;    // faces whose k x k system had no unique solution
    std::size_t near_boundary_hits = 0;  // accepted vertices within 10 tol of the face boundary
    std::size_t merged_duplicates = 0;   // solutions merged because they coincide

    /// Near-boundary or coincident solutions: a measure-zero event for random flats.
    bool flagged() const { return near_boundary_hits > 0 || merged_duplicates > 0; }
};

/// The point where the flat meets the face, if the k x k system pinning the
/// face's fixed coordinates has a unique solution whose free coordinates lie
/// in [-1 - tol, 1 + tol].
std::optional<Vector> solve_face_vertex(const Body& body, const Flat& flat, const Face& face,
                                        double tol = kBoundaryTolerance,
                                        SliceDiagnostics* diagnostics = nullptr);

struct SliceResult {
    std::vector<Vector> vertices;
    SliceDiagnostics diagnostics;
};

/// Vertices of body ∩ flat, one per intersected face, deduplicated.
SliceResult slice_vertices(const Body& body, const Flat& flat);
/// Same, with a precomputed enumerate_faces(n, k).
SliceResult slice_vertices(const Body& body, const Flat& flat, const std::vector<Face>& faces);

std::size_t vertex_count(const Body& body, const Flat& flat);

}  // namespace hyperslice
