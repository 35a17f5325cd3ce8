#include "hyperslice/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "hyperslice/combinatorics.hpp"
#include "hyperslice/errors.hpp"
#include "hyperslice/parallel.hpp"

namespace hyperslice {

Zonotope::Zonotope(Vector base, VectorList generators)
    : dim_(base.size()), base_(std::move(base)), generators_(std::move(generators))
{
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        if (generators_[i].size() != dim_) {
            throw InvalidInput("generator " + std::to_string(i) + " has dimension " +
                               std::to_string(generators_[i].size()) + ", zonotope lives in R^" +
                               std::to_string(dim_));
        }
    }
    common_dimension(generators_);
    for (double x : base_) {
        if (!std::isfinite(x)) throw InvalidInput("non-finite zonotope base point");
    }
}

Zonotope Zonotope::from_generators(std::size_t dim, VectorList generators)
{
    return Zonotope(Vector(dim, 0.0), std::move(generators));
}

Vector Zonotope::center() const
{
    Vector c = base_;
    for (const Vector& g : generators_) axpy(0.5, g, c);
    return c;
}

namespace {

void check_volume_dim(const Zonotope& z, std::size_t d)
{
    if (d > z.dim()) {
        throw InvalidInput("volume of dimension " + std::to_string(d) + " requested for a zonotope in R^" +
                           std::to_string(z.dim()));
    }
}

double subset_volume(const Zonotope& z, const IndexSet& subset)
{
    VectorList s;
    s.reserve(subset.size());
    for (std::size_t i : subset) s.push_back(z.generators()[i]);
    return gram_volume(s);
}

// Below this many terms the thread fan-out costs more than it saves.
constexpr std::size_t kParallelVolumeThreshold = 256;

}  // namespace

double volume_serial(const Zonotope& z, std::size_t d)
{
    check_volume_dim(z, d);
    if (d == 0) return 1.0;
    double total = 0.0;
    for (const IndexSet& s : combinations(z.count(), d)) total += subset_volume(z, s);
    return total;
}

double volume(const Zonotope& z, std::size_t d)
{
    check_volume_dim(z, d);
    if (d == 0) return 1.0;
    const std::vector<IndexSet> subsets = combinations(z.count(), d);
    if (subsets.size() < kParallelVolumeThreshold) return volume_serial(z, d);

    std::vector<double> terms(subsets.size());
    const auto count = static_cast<std::ptrdiff_t>(subsets.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        terms[static_cast<std::size_t>(i)] = subset_volume(z, subsets[static_cast<std::size_t>(i)]);
    }
    double total = 0.0;
    for (double t : terms) total += t;
    return total;
}

double volume(const Zonotope& z)
{
    return volume(z, z.dim());
}

Zonotope project(const Zonotope& z, const NormalBasis& basis)
{
    if (z.dim() != basis.ambient_dim) {
        throw InvalidInput("cannot project a zonotope in R^" + std::to_string(z.dim()) +
                           " with a basis of R^" + std::to_string(basis.ambient_dim));
    }
    VectorList gens;
    gens.reserve(z.count());
    for (const Vector& g : z.generators()) gens.push_back(project_onto_basis(g, basis));
    return Zonotope(project_onto_basis(z.base(), basis), std::move(gens));
}

bool HalfspaceSet::contains(const Vector& x, double tol) const
{
    if (x.size() != center.size()) throw InvalidInput("membership query has the wrong dimension");
    for (const Slab& s : slabs) {
        double p = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) p += s.normal[i] * (x[i] - center[i]);
        if (p > s.upper + tol || p < s.lower - tol) return false;
    }
    return true;
}

namespace {

// Flip so that the first clearly nonzero coordinate is positive.
void canonicalize_sign(Vector& u)
{
    for (double c : u) {
        if (std::abs(c) > 1e-6) {
            if (c < 0) {
                for (double& x : u) x = -x;
            }
            return;
        }
    }
}

}  // namespace

HalfspaceSet halfspaces(const Zonotope& z)
{
    const std::size_t d = z.dim();
    if (d == 0) throw InvalidInput("halfspaces of a zonotope in R^0");
    if (rank(z.generators()) < d) {
        throw DegenerateGeometry("zonotope generators span fewer than " + std::to_string(d) + " dimensions");
    }

    std::vector<Vector> normals;
    for (const IndexSet& s : combinations(z.count(), d - 1)) {
        VectorList vs;
        double scale = 1.0;
        for (std::size_t i : s) {
            vs.push_back(z.generators()[i]);
            scale *= norm(z.generators()[i]);
        }
        Vector u = null_normal(vs, d);
        const double len = norm(u);
        if (!(len > kRankTolerance * scale) || len == 0.0) continue;
        for (double& c : u) c /= len;
        canonicalize_sign(u);
        normals.push_back(std::move(u));
    }

    // Merge parallel normals: sort on the first coordinate, then compare each
    // normal against kept ones whose first coordinate is within tolerance.
    std::sort(normals.begin(), normals.end());
    std::vector<Vector> kept;
    for (Vector& u : normals) {
        bool duplicate = false;
        for (std::size_t j = kept.size(); j-- > 0;) {
            if (kept[j][0] < u[0] - kNormalMergeTolerance) break;
            if (norm(subtract(u, kept[j])) <= kNormalMergeTolerance) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) kept.push_back(std::move(u));
    }

    HalfspaceSet hs;
    hs.center = z.center();
    hs.slabs.reserve(kept.size());
    for (Vector& u : kept) {
        double half = 0.0;
        for (const Vector& g : z.generators()) half += std::abs(dot(u, g));
        half *= 0.5;
        hs.slabs.push_back(Slab{std::move(u), -half, half});
    }
    return hs;
}

bool contains(const Zonotope& z, const Vector& x, double tol)
{
    if (x.size() != z.dim()) throw InvalidInput("membership query has the wrong dimension");
    if (z.dim() == 0) return true;
    return halfspaces(z).contains(x, tol);
}

MembershipTest::MembershipTest(const Zonotope& z, double rank_tol)
    : dim_(z.dim()), center_(z.center())
{
    if (dim_ == 0) return;
    hull_ = orthonormal_span(z.generators(), rank_tol);
    if (hull_.empty()) return;
    if (hull_.size() == dim_) {
        slabs_ = halfspaces(z);
        return;
    }
    NormalBasis hull{dim_, hull_};
    VectorList gens;
    for (const Vector& g : z.generators()) gens.push_back(project_onto_basis(g, hull));
    const std::size_t r = hull_.size();
    slabs_ = halfspaces(Zonotope(Vector(r, 0.0), std::move(gens)));
    slabs_.center = Vector(r, 0.0);
}

bool MembershipTest::operator()(const Vector& x, double tol) const
{
    if (x.size() != dim_) throw InvalidInput("membership query has the wrong dimension");
    if (dim_ == 0) return true;
    if (hull_.size() == dim_) return slabs_.contains(x, tol);

    Vector offset = subtract(x, center_);
    Vector coords(hull_.size());
    for (std::size_t i = 0; i < hull_.size(); ++i) {
        coords[i] = dot(offset, hull_[i]);
        axpy(-coords[i], hull_[i], offset);
    }
    if (norm(offset) > tol) return false;
    if (hull_.empty()) return true;
    return slabs_.contains(coords, tol);
}

bool contains_in_affine_hull(const Zonotope& z, const Vector& x, double tol)
{
    return MembershipTest(z)(x, tol);
}

double Box::volume() const
{
    double v = 1.0;
    for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
    return v;
}

Box bounding_box(const Zonotope& z)
{
    const Vector c = z.center();
    Box b{c, c};
    for (std::size_t j = 0; j < z.dim(); ++j) {
        double half = 0.0;
        for (const Vector& g : z.generators()) half += std::abs(g[j]);
        half *= 0.5;
        b.lower[j] -= half;
        b.upper[j] += half;
    }
    return b;
}

UniformSampler::UniformSampler(const Zonotope& z, std::size_t proposal_cap)
    : box_(bounding_box(z)), cap_(proposal_cap)
{
    if (cap_ == 0) throw InvalidInput("proposal cap must be positive");
    if (z.dim() > 0) slabs_ = halfspaces(z);
}

Vector UniformSampler::sample(SeededRng& rng, SamplingStats& stats) const
{
    const std::size_t d = box_.lower.size();
    Vector x(d);
    for (std::size_t attempt = 0; attempt < cap_; ++attempt) {
        for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform(box_.lower[j], box_.upper[j]);
        ++stats.proposals;
        if (d == 0 || slabs_.contains(x, 0.0)) {
            ++stats.accepted;
            return x;
        }
    }
    throw SamplingFailure("no point accepted in " + std::to_string(cap_) +
                          " proposals: acceptance rate below " + std::to_string(1.0 / static_cast<double>(cap_)));
}

Vector sample_uniform(const Zonotope& z, SeededRng& rng)
{
    SamplingStats stats;
    return UniformSampler(z).sample(rng, stats);
}

VolumeEstimate volume_oracle_mc(const Zonotope& z, SeededRng& rng, std::size_t samples)
{
    if (samples == 0) throw InvalidInput("volume oracle needs at least one proposal");
    const HalfspaceSet hs = halfspaces(z);
    const Box box = bounding_box(z);
    const std::size_t d = z.dim();

    VolumeEstimate est;
    Vector x(d);
    for (std::size_t i = 0; i < samples; ++i) {
        for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform(box.lower[j], box.upper[j]);
        ++est.stats.proposals;
        if (hs.contains(x, 0.0)) ++est.stats.accepted;
    }
    const double p = est.stats.acceptance_rate();
    const double box_volume = box.volume();
    est.volume = box_volume * p;
    est.std_error = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return est;
}

}  // namespace hyperslice
