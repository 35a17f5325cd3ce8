#pragma once

// Small dense linear algebra on std::vector<double>. Dimensions here are
// desk scale (n <= 20), so everything is written for clarity over blocking.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hyperslice {

using Vector = std::vector<double>;
using VectorList = std::vector<Vector>;
/// Row-major dense matrix as a list of rows.
using Matrix = std::vector<Vector>;

/// Relative pivot threshold used by rank(); see rank() for the exact rule.
inline constexpr double kRankTolerance = 1e-9;

/// Orthonormal basis of the normal space N of an orientation, expressed in
/// ambient coordinates. `ambient_dim` is kept explicitly because N may be
/// zero-dimensional (k = n).
struct NormalBasis {
    std::size_t ambient_dim = 0;
    VectorList vectors;

    std::size_t dim() const { return vectors.size(); }
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

Vector add(const Vector& a, const Vector& b);
Vector subtract(const Vector& a, const Vector& b);
Vector scaled(const Vector& a, double s);
/// a += s * b
void axpy(double s, const Vector& b, Vector& a);

/// Shared dimension of a vector list; 0 for an empty list.
/// Throws InvalidInput if the vectors disagree or any coordinate is non-finite.
std::size_t common_dimension(const VectorList& vs);

/// sqrt(det(G^T G)) for G with the given vectors as columns: the |vs|-volume
/// of the parallelotope they span. Zero (up to rounding) for dependent sets.
double gram_volume(const VectorList& vs);

/// Numerical rank by column-pivoted modified Gram-Schmidt. A pivot (residual
/// norm) counts iff it exceeds tol * max(largest pivot, or 1 if all vanish).
std::size_t rank(const VectorList& vs, double tol = kRankTolerance);

/// Orthonormal basis (in pivot order) of span(vs), using the same pivot rule
/// as rank(). The returned list has rank(vs, tol) entries.
VectorList orthonormal_span(const VectorList& vs, double tol = kRankTolerance);

/// Orthonormal basis of the complement of span(orientation) in R^n.
/// Throws DegenerateGeometry if the orientation is rank deficient.
NormalBasis orthonormal_complement(const VectorList& orientation, std::size_t n);

/// Coordinates of x in the given basis: (<x, b_1>, ..., <x, b_d>).
Vector project_onto_basis(const Vector& x, const NormalBasis& basis);

/// Ambient point sum_i coords_i * b_i.
Vector reconstruct(const Vector& coords, const NormalBasis& basis);

/// Generalized cross product of d-1 vectors in R^d by cofactor expansion of
/// the matrix whose last row is symbolic. Orthogonal to every input and of
/// norm gram_volume(vs); zero iff the inputs are dependent. The sign makes
/// det[v_1; ...; v_{d-1}; u] >= 0.
Vector null_normal(const VectorList& vs, std::size_t d);

/// Determinant by LU with partial pivoting. Empty matrix -> 1.
double determinant(Matrix a);

/// Solves a x = b by Gaussian elimination with partial pivoting. Returns
/// nullopt when a pivot falls below pivot_tol * (largest |a_ij|).
std::optional<Vector> solve(Matrix a, Vector b, double pivot_tol = 1e-12);

/// Inverse of a square matrix; nullopt when singular under solve()'s rule.
std::optional<Matrix> inverse(const Matrix& a, double pivot_tol = 1e-12);

Vector multiply(const Matrix& a, const Vector& x);

}  // namespace hyperslice
