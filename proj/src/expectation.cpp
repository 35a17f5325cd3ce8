#include "hyperslice/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperslice/errors.hpp"
#include "hyperslice/parallel.hpp"

namespace hyperslice {

double TelescopingCheck::relative_gap() const
{
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

namespace {

void check_dimensions(const Body& body, const FlatOrientation& orientation)
{
    if (orientation.n() != body.n()) {
        throw InvalidInput("orientation lives in R^" + std::to_string(orientation.n()) + " but the body in R^" +
                           std::to_string(body.n()));
    }
    if (body.n() > kMaxExactDimension) {
        throw InvalidInput("exact computation is capped at n <= " + std::to_string(kMaxExactDimension));
    }
}

// A representative face for a free subset: every fixed coordinate at +1.
// Volume does not depend on the choice of signs.
Face representative_face(const IndexSet& free_indices, std::size_t n)
{
    Face f;
    f.free = free_indices;
    f.fixed = complement(free_indices, n);
    f.signs.assign(f.fixed.size(), 1);
    return f;
}

double projected_face_volume(const Body& body, const NormalBasis& basis, const IndexSet& free_indices)
{
    const Zonotope pf = face_zonotope(body, representative_face(free_indices, body.n()), basis);
    return volume_serial(pf, basis.dim());
}

template <bool Parallel>
FaceProbabilityTable build_table(const Body& body, const FlatOrientation& orientation)
{
    check_dimensions(body, orientation);
    const std::size_t n = body.n();
    const std::size_t k = orientation.k();
    const NormalBasis basis = orientation.normal_basis();
    const Zonotope projected = project(body.zonotope(), basis);

    FaceProbabilityTable table;
    table.n = n;
    table.k = k;
    table.projected_body_volume = Parallel ? volume(projected, n - k) : volume_serial(projected, n - k);
    if (!(table.projected_body_volume > 0.0)) {
        throw InternalError("projected body has zero volume for a full-rank orientation");
    }

    const std::vector<IndexSet> subsets = combinations(n, n - k);
    std::vector<double> volumes(subsets.size());
    if constexpr (Parallel) {
        const auto count = static_cast<std::ptrdiff_t>(subsets.size());
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto s = static_cast<std::size_t>(i);
            volumes[s] = projected_face_volume(body, basis, subsets[s]);
        }
    } else {
        for (std::size_t s = 0; s < subsets.size(); ++s) {
            volumes[s] = projected_face_volume(body, basis, subsets[s]);
        }
    }

    const std::uint64_t multiplicity = std::uint64_t{1} << k;
    table.entries.reserve(subsets.size());
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        SubsetProbability e;
        e.free_indices = subsets[s];
        e.projected_volume = volumes[s];
        e.probability = volumes[s] / table.projected_body_volume;
        e.multiplicity = multiplicity;
        table.total_expectation += static_cast<double>(multiplicity) * e.probability;
        table.entries.push_back(std::move(e));
    }
    return table;
}

}  // namespace

double face_probability(const Body& body, const FlatOrientation& orientation, const IndexSet& free_indices)
{
    check_dimensions(body, orientation);
    const std::size_t n = body.n();
    const std::size_t k = orientation.k();
    if (free_indices.size() != n - k) {
        throw InvalidInput("a face of a " + std::to_string(k) + "-slice has " + std::to_string(n - k) +
                           " free indices, got " + std::to_string(free_indices.size()));
    }
    IndexSet sorted = free_indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || (!sorted.empty() && sorted.back() >= n)) {
        throw InvalidInput("free indices must be distinct and below n");
    }
    const NormalBasis basis = orientation.normal_basis();
    const double whole = volume(project(body.zonotope(), basis), n - k);
    if (!(whole > 0.0)) throw InternalError("projected body has zero volume for a full-rank orientation");
    return projected_face_volume(body, basis, sorted) / whole;
}

FaceProbabilityTable probability_table(const Body& body, const FlatOrientation& orientation)
{
    return build_table<true>(body, orientation);
}

FaceProbabilityTable probability_table_serial(const Body& body, const FlatOrientation& orientation)
{
    return build_table<false>(body, orientation);
}

double expected_vertices_exact(const Body& body, const FlatOrientation& orientation)
{
    return probability_table(body, orientation).total_expectation;
}

TelescopingCheck telescoping_check(const Body& body, const FlatOrientation& orientation)
{
    const FaceProbabilityTable table = probability_table(body, orientation);
    TelescopingCheck check;
    for (const SubsetProbability& e : table.entries) check.lhs += e.projected_volume;
    check.rhs = table.projected_body_volume;
    return check;
}

}  // namespace hyperslice
