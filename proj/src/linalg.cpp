#include "hyperslice/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hyperslice/errors.hpp"

namespace hyperslice {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

Vector add(const Vector& a, const Vector& b)
{
    Vector r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Vector subtract(const Vector& a, const Vector& b)
{
    Vector r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Vector scaled(const Vector& a, double s)
{
    Vector r(a);
    for (double& x : r) x *= s;
    return r;
}

void axpy(double s, const Vector& b, Vector& a)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

std::size_t common_dimension(const VectorList& vs)
{
    if (vs.empty()) return 0;
    const std::size_t d = vs.front().size();
    for (std::size_t j = 0; j < vs.size(); ++j) {
        if (vs[j].size() != d) {
            throw InvalidInput("vector " + std::to_string(j) + " has dimension " +
                               std::to_string(vs[j].size()) + ", expected " + std::to_string(d));
        }
        for (double x : vs[j]) {
            if (!std::isfinite(x)) throw InvalidInput("non-finite coordinate in vector " + std::to_string(j));
        }
    }
    return d;
}

namespace {

// Removes the components of w along every vector in q. Two passes of modified
// Gram-Schmidt; the second pass picks up the rounding left by the first.
void orthogonalize(Vector& w, const VectorList& q)
{
    for (int pass = 0; pass < 2; ++pass) {
        for (const Vector& b : q) axpy(-dot(w, b), b, w);
    }
}

}  // namespace

double gram_volume(const VectorList& vs)
{
    if (vs.empty()) throw InvalidInput("gram_volume of an empty vector list");
    const std::size_t d = common_dimension(vs);
    if (vs.size() > d) {
        throw InvalidInput("gram_volume: " + std::to_string(vs.size()) + " vectors in dimension " +
                           std::to_string(d));
    }
    VectorList q;
    q.reserve(vs.size());
    double volume = 1.0;
    for (const Vector& v : vs) {
        Vector w = v;
        orthogonalize(w, q);
        const double r = norm(w);
        if (r == 0.0) return 0.0;
        volume *= r;
        q.push_back(scaled(w, 1.0 / r));
    }
    return volume;
}

VectorList orthonormal_span(const VectorList& vs, double tol)
{
    if (!(tol > 0.0)) throw InvalidInput("rank tolerance must be positive");
    common_dimension(vs);
    VectorList residual = vs;
    std::vector<bool> used(vs.size(), false);
    VectorList q;
    double largest = 0.0;
    for (std::size_t step = 0; step < vs.size(); ++step) {
        std::size_t best = vs.size();
        double best_norm = -1.0;
        for (std::size_t j = 0; j < residual.size(); ++j) {
            if (used[j]) continue;
            const double r = norm(residual[j]);
            if (r > best_norm) {
                best_norm = r;
                best = j;
            }
        }
        if (step == 0) largest = best_norm;
        const double threshold = tol * (largest > 0.0 ? largest : 1.0);
        if (!(best_norm > threshold)) break;
        used[best] = true;
        Vector b = scaled(residual[best], 1.0 / best_norm);
        // re-orthogonalize the pivot itself against the basis so far
        orthogonalize(b, q);
        b = scaled(b, 1.0 / norm(b));
        for (std::size_t j = 0; j < residual.size(); ++j) {
            if (used[j]) continue;
            for (int pass = 0; pass < 2; ++pass) axpy(-dot(residual[j], b), b, residual[j]);
        }
        q.push_back(std::move(b));
    }
    return q;
}

std::size_t rank(const VectorList& vs, double tol)
{
    return orthonormal_span(vs, tol).size();
}

NormalBasis orthonormal_complement(const VectorList& orientation, std::size_t n)
{
    if (n == 0) throw InvalidInput("ambient dimension must be positive");
    if (!orientation.empty() && common_dimension(orientation) != n) {
        throw InvalidInput("orientation vectors do not live in R^" + std::to_string(n));
    }
    const std::size_t k = orientation.size();
    if (k > n) throw InvalidInput("more orientation vectors than ambient dimensions");
    VectorList q = orthonormal_span(orientation);
    if (q.size() != k) {
        throw DegenerateGeometry("orientation has rank " + std::to_string(q.size()) + " < " +
                                 std::to_string(k));
    }

    NormalBasis basis;
    basis.ambient_dim = n;
    std::vector<bool> used(n, false);
    // Greedily complete with the standard basis vector that leaves the
    // largest residual; keeps every normalization well conditioned.
    for (std::size_t step = k; step < n; ++step) {
        std::size_t best = n;
        double best_norm = -1.0;
        Vector best_w;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            Vector w(n, 0.0);
            w[i] = 1.0;
            orthogonalize(w, q);
            orthogonalize(w, basis.vectors);
            const double r = norm(w);
            if (r > best_norm) {
                best_norm = r;
                best = i;
                best_w = std::move(w);
            }
        }
        if (best == n || !(best_norm > 0.0)) throw InternalError("orthonormal completion failed");
        used[best] = true;
        Vector b = scaled(best_w, 1.0 / best_norm);
        orthogonalize(b, q);
        orthogonalize(b, basis.vectors);
        basis.vectors.push_back(scaled(b, 1.0 / norm(b)));
    }
    return basis;
}

Vector project_onto_basis(const Vector& x, const NormalBasis& basis)
{
    if (x.size() != basis.ambient_dim) {
        throw InvalidInput("point of dimension " + std::to_string(x.size()) +
                           " projected onto a basis of R^" + std::to_string(basis.ambient_dim));
    }
    Vector out(basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i) out[i] = dot(x, basis.vectors[i]);
    return out;
}

Vector reconstruct(const Vector& coords, const NormalBasis& basis)
{
    if (coords.size() != basis.dim()) throw InvalidInput("coordinate count does not match basis size");
    Vector out(basis.ambient_dim, 0.0);
    for (std::size_t i = 0; i < coords.size(); ++i) axpy(coords[i], basis.vectors[i], out);
    return out;
}

double determinant(Matrix a)
{
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

Vector null_normal(const VectorList& vs, std::size_t d)
{
    if (d == 0) throw InvalidInput("null_normal needs d >= 1");
    if (vs.size() + 1 != d) {
        throw InvalidInput("null_normal in R^" + std::to_string(d) + " needs " + std::to_string(d - 1) +
                           " vectors, got " + std::to_string(vs.size()));
    }
    if (!vs.empty() && common_dimension(vs) != d) throw InvalidInput("null_normal: vector dimension mismatch");

    Vector u(d);
    Matrix minor(d - 1, Vector(d - 1));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t r = 0; r + 1 < d; ++r) {
            std::size_t c2 = 0;
            for (std::size_t c = 0; c < d; ++c) {
                if (c == j) continue;
                minor[r][c2++] = vs[r][c];
            }
        }
        const double sign = ((d - 1 + j) % 2 == 0) ? 1.0 : -1.0;
        u[j] = sign * determinant(minor);
    }
    return u;
}

std::optional<Vector> solve(Matrix a, Vector b, double pivot_tol)
{
    const std::size_t n = a.size();
    if (b.size() != n) throw InvalidInput("solve: right-hand side size mismatch");
    double scale = 0.0;
    for (const Vector& row : a) {
        if (row.size() != n) throw InvalidInput("solve: matrix is not square");
        for (double x : row) scale = std::max(scale, std::abs(x));
    }
    if (n == 0) return Vector{};
    if (scale == 0.0) return std::nullopt;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) <= pivot_tol * scale) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

std::optional<Matrix> inverse(const Matrix& a, double pivot_tol)
{
    const std::size_t n = a.size();
    Matrix inv(n, Vector(n));
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1.0;
        auto col = solve(a, e, pivot_tol);
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) inv[i][j] = (*col)[i];
    }
    return inv;
}

Vector multiply(const Matrix& a, const Vector& x)
{
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = dot(a[i], x);
    return out;
}

}  // namespace hyperslice
