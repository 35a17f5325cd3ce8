#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hyperslice/linalg.hpp"
#include "hyperslice/rng.hpp"

namespace hyperslice {

/// Default inflation for membership tests; boundary points count as inside.
inline constexpr double kMembershipTolerance = 1e-9;
/// Slab normals whose directions differ by less than this (up to sign) are merged.
inline constexpr double kNormalMergeTolerance = 1e-9;
/// Proposals a single rejection draw may use before giving up.
inline constexpr std::size_t kDefaultProposalCap = 1'000'000;

/// base + { sum_i lambda_i g_i : lambda in [0,1]^m }.
///
/// The dimension is stored explicitly so that zonotopes in R^0 (the
/// projections used when a slice is as large as the body) are representable.
class Zonotope {
public:
    Zonotope() = default;
    /// Throws InvalidInput if any generator's dimension differs from base.size().
    Zonotope(Vector base, VectorList generators);

    /// base = 0.
    static Zonotope from_generators(std::size_t dim, VectorList generators);

    std::size_t dim() const { return dim_; }
    std::size_t count() const { return generators_.size(); }
    const Vector& base() const { return base_; }
    const VectorList& generators() const { return generators_; }

    /// base + (1/2) sum g_i; the zonotope is centrally symmetric about it.
    Vector center() const;

private:
    std::size_t dim_ = 0;
    Vector base_;
    VectorList generators_;
};

/// Shephard's formula: sum over all d-subsets S of the generators of
/// gram_volume(S). d = 0 gives 1. Terms are evaluated in parallel and summed
/// in lexicographic subset order, so the result equals volume_serial() bit for bit.
double volume(const Zonotope& z, std::size_t d);
double volume(const Zonotope& z);  // d = z.dim()

/// Serial reference for volume().
double volume_serial(const Zonotope& z, std::size_t d);

/// Image under x -> project_onto_basis(x, basis); again a zonotope, in basis coordinates.
Zonotope project(const Zonotope& z, const NormalBasis& basis);

/// |<normal, x - center>| <= upper, written as a slab with lower = -upper.
struct Slab {
    Vector normal;  // unit length
    double lower = 0.0;
    double upper = 0.0;
};

/// H-representation of a full-dimensional zonotope as an intersection of slabs.
struct HalfspaceSet {
    Vector center;
    std::vector<Slab> slabs;

    bool contains(const Vector& x, double tol = kMembershipTolerance) const;
};

/// One slab per distinct facet direction, from the null normals of the
/// (d-1)-subsets of generators. Throws DegenerateGeometry if the generators
/// do not span R^d, InvalidInput if d = 0.
HalfspaceSet halfspaces(const Zonotope& z);

/// x lies in every slab inflated by tol. Throws DegenerateGeometry for
/// zonotopes without full-dimensional interior. In R^0 every point is inside.
bool contains(const Zonotope& z, const Vector& x, double tol = kMembershipTolerance);

/// Membership that also accepts lower-dimensional zonotopes: x must lie within
/// tol of the affine hull, and its in-hull coordinates must pass the slab test
/// of the zonotope restricted to that hull.
class MembershipTest {
public:
    explicit MembershipTest(const Zonotope& z, double rank_tol = kRankTolerance);

    bool operator()(const Vector& x, double tol = kMembershipTolerance) const;

    /// Dimension of the affine hull.
    std::size_t hull_dim() const { return hull_.size(); }

private:
    std::size_t dim_ = 0;
    Vector center_;
    VectorList hull_;      // orthonormal basis of span(generators)
    HalfspaceSet slabs_;   // in hull coordinates
};

/// Same as MembershipTest(z)(x, tol).
bool contains_in_affine_hull(const Zonotope& z, const Vector& x, double tol = kMembershipTolerance);

struct Box {
    Vector lower;
    Vector upper;

    double volume() const;
};

/// Tight axis-aligned bounding box: center_j +- (1/2) sum_i |g_ij|.
Box bounding_box(const Zonotope& z);

struct SamplingStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;

    double acceptance_rate() const
    {
        return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
    }
    SamplingStats& operator+=(const SamplingStats& o)
    {
        proposals += o.proposals;
        accepted += o.accepted;
        return *this;
    }
};

/// Uniform rejection sampler from the bounding box, membership with tol = 0.
/// Immutable once built; callers keep their own SamplingStats.
class UniformSampler {
public:
    explicit UniformSampler(const Zonotope& z, std::size_t proposal_cap = kDefaultProposalCap);

    /// Throws SamplingFailure after proposal_cap consecutive rejections.
    Vector sample(SeededRng& rng, SamplingStats& stats) const;

    const Box& box() const { return box_; }
    const HalfspaceSet& halfspace_set() const { return slabs_; }

private:
    Box box_;
    HalfspaceSet slabs_;
    std::size_t cap_;
};

Vector sample_uniform(const Zonotope& z, SeededRng& rng);

struct VolumeEstimate {
    double volume = 0.0;
    double std_error = 0.0;
    SamplingStats stats;
};

/// Box volume times the acceptance fraction over `samples` proposals.
VolumeEstimate volume_oracle_mc(const Zonotope& z, SeededRng& rng, std::size_t samples);

}  // namespace hyperslice
