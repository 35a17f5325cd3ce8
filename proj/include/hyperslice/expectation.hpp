#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hyperslice/combinatorics.hpp"
#include "hyperslice/slice.hpp"

namespace hyperslice {

/// Largest ambient dimension accepted by the exact engine; C(20, 10) subsets
/// is the worst case.
inline constexpr std::size_t kMaxExactDimension = 20;

/// Probability that a uniformly translated flat meets one face with the given
/// free coordinates. All 2^k faces sharing the free set have this probability.
struct SubsetProbability {
    IndexSet free_indices;
    double projected_volume = 0.0;  // V_{n-k}(P_N(F))
    double probability = 0.0;
    std::uint64_t multiplicity = 0;  // 2^k
};

struct FaceProbabilityTable {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<SubsetProbability> entries;  // free subsets in lexicographic order
    double projected_body_volume = 0.0;      // V_{n-k}(P_N(body))
    double total_expectation = 0.0;          // sum multiplicity * probability
};

struct TelescopingCheck {
    double lhs = 0.0;  // sum over free subsets of V_{n-k}(P_N(F))
    double rhs = 0.0;  // V_{n-k}(P_N(body)) by the zonotope volume formula

    double relative_gap() const;
};

/// V_{n-k}(P_N(F)) / V_{n-k}(P_N(body)) for a face with the given free indices.
/// Throws DegenerateGeometry for a rank-deficient orientation and
/// InternalError if the projected body has zero volume.
double face_probability(const Body& body, const FlatOrientation& orientation, const IndexSet& free_indices);

/// Per-subset table; subset volumes are evaluated in parallel and reduced in
/// lexicographic order, so the table equals probability_table_serial() exactly.
FaceProbabilityTable probability_table(const Body& body, const FlatOrientation& orientation);
FaceProbabilityTable probability_table_serial(const Body& body, const FlatOrientation& orientation);

/// The summed expectation (not the constant 2^k).
double expected_vertices_exact(const Body& body, const FlatOrientation& orientation);

TelescopingCheck telescoping_check(const Body& body, const FlatOrientation& orientation);

}  // namespace hyperslice
