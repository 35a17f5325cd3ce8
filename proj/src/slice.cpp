#include "hyperslice/slice.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hyperslice/errors.hpp"

namespace hyperslice {

Body::Body(VectorList generators, Vector base, Matrix half_inverse, bool standard_cube)
    : generators_(std::move(generators)),
      base_(std::move(base)),
      half_inverse_(std::move(half_inverse)),
      standard_cube_(standard_cube)
{
}

Body Body::cube(std::size_t n)
{
    if (n == 0) throw InvalidInput("cube dimension must be positive");
    VectorList gens(n, Vector(n, 0.0));
    Matrix identity(n, Vector(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        gens[i][i] = 2.0;
        identity[i][i] = 1.0;
    }
    return Body(std::move(gens), Vector(n, -1.0), std::move(identity), true);
}

Body Body::parallelotope(VectorList edge_generators, Vector base)
{
    const std::size_t n = base.size();
    if (n == 0) throw InvalidInput("body dimension must be positive");
    if (edge_generators.size() != n) {
        throw InvalidInput("a body in R^" + std::to_string(n) + " needs " + std::to_string(n) +
                           " edge generators, got " + std::to_string(edge_generators.size()));
    }
    if (common_dimension(edge_generators) != n) throw InvalidInput("edge generator dimension mismatch");
    for (double x : base) {
        if (!std::isfinite(x)) throw InvalidInput("non-finite body base point");
    }
    const std::size_t r = rank(edge_generators);
    if (r < n) {
        throw InvalidInput("body generators are singular: rank " + std::to_string(r) + " < " + std::to_string(n));
    }
    Matrix half(n, Vector(n));
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t col = 0; col < n; ++col) half[row][col] = 0.5 * edge_generators[col][row];
    }
    auto inv = inverse(half);
    if (!inv) throw InvalidInput("body generator matrix is numerically singular");
    return Body(std::move(edge_generators), std::move(base), std::move(*inv), false);
}

Vector Body::center() const
{
    Vector c = base_;
    for (const Vector& g : generators_) axpy(0.5, g, c);
    return c;
}

Vector Body::to_cube(const Vector& x) const
{
    if (x.size() != n()) throw InvalidInput("point dimension does not match body");
    return multiply(half_inverse_, subtract(x, center()));
}

Vector Body::direction_to_cube(const Vector& v) const
{
    if (v.size() != n()) throw InvalidInput("direction dimension does not match body");
    return multiply(half_inverse_, v);
}

FlatOrientation::FlatOrientation(VectorList spans) : spans_(std::move(spans))
{
    if (spans_.empty()) throw InvalidInput("an orientation needs at least one vector");
    const std::size_t n = common_dimension(spans_);
    if (n == 0) throw InvalidInput("orientation vectors must have positive dimension");
    if (spans_.size() > n) {
        throw InvalidInput(std::to_string(spans_.size()) + " orientation vectors in R^" + std::to_string(n));
    }
    for (Vector& v : spans_) {
        const double r = norm(v);
        if (r == 0.0) throw DegenerateGeometry("orientation contains a zero vector");
        if (std::abs(r - 1.0) > 1e-12) v = scaled(v, 1.0 / r);
    }
    const std::size_t r = rank(spans_);
    if (r < spans_.size()) {
        throw DegenerateGeometry("orientation has rank " + std::to_string(r) + " < " +
                                 std::to_string(spans_.size()));
    }
}

FlatOrientation FlatOrientation::axis(std::size_t n, std::size_t k)
{
    if (k == 0 || k > n) throw InvalidInput("axis orientation needs 1 <= k <= n");
    VectorList spans(k, Vector(n, 0.0));
    for (std::size_t j = 0; j < k; ++j) spans[j][j] = 1.0;
    return FlatOrientation(std::move(spans));
}

Flat::Flat(FlatOrientation orientation, Vector tau)
    : Flat(orientation, orientation.normal_basis(), std::move(tau))
{
}

Flat::Flat(FlatOrientation orientation, NormalBasis basis, Vector tau)
    : orientation_(std::move(orientation)), basis_(std::move(basis)), tau_(std::move(tau))
{
    if (basis_.ambient_dim != orientation_.n() || basis_.dim() + orientation_.k() != orientation_.n()) {
        throw InvalidInput("normal basis does not match the orientation");
    }
    if (tau_.size() != basis_.dim()) {
        throw InvalidInput("translation has " + std::to_string(tau_.size()) + " coordinates, normal space has " +
                           std::to_string(basis_.dim()));
    }
}

std::vector<Face> enumerate_faces(std::size_t n, std::size_t k)
{
    if (k == 0 || k > n) {
        throw InvalidInput("face enumeration needs 1 <= k <= n, got n=" + std::to_string(n) +
                           " k=" + std::to_string(k));
    }
    if (k >= 64) throw InvalidInput("too many fixed coordinates");
    std::vector<Face> faces;
    const std::uint64_t patterns = std::uint64_t{1} << k;
    faces.reserve(static_cast<std::size_t>(binomial(n, k) * patterns));
    for (const IndexSet& fixed : combinations(n, k)) {
        const IndexSet free = complement(fixed, n);
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
            Face f{fixed, std::vector<int>(k), free};
            for (std::size_t a = 0; a < k; ++a) f.signs[a] = ((mask >> a) & 1U) ? 1 : -1;
            faces.push_back(std::move(f));
        }
    }
    return faces;
}

namespace {

void check_face(const Face& face, std::size_t n)
{
    if (face.fixed.size() != face.signs.size() || face.fixed.size() + face.free.size() != n) {
        throw InvalidInput("face does not partition the coordinates of R^" + std::to_string(n));
    }
}

// The flat expressed in cube coordinates: u(t) = origin + sum_j t_j directions[j].
struct CubeFrame {
    Vector anchor;
    Vector origin;
    VectorList directions;
};

CubeFrame cube_frame(const Body& body, const Flat& flat)
{
    if (flat.orientation().n() != body.n()) throw InvalidInput("flat and body dimensions differ");
    CubeFrame f;
    f.anchor = flat.anchor();
    f.origin = body.to_cube(f.anchor);
    for (const Vector& v : flat.orientation().spans()) f.directions.push_back(body.direction_to_cube(v));
    return f;
}

std::optional<Vector> solve_in_frame(const Flat& flat, const CubeFrame& frame, const Face& face, double tol,
                                     SliceDiagnostics* diagnostics)
{
    const std::size_t k = face.fixed.size();
    Matrix a(k, Vector(k));
    Vector b(k);
    for (std::size_t row = 0; row < k; ++row) {
        const std::size_t i = face.fixed[row];
        for (std::size_t j = 0; j < k; ++j) a[row][j] = frame.directions[j][i];
        b[row] = static_cast<double>(face.signs[row]) - frame.origin[i];
    }
    auto t = solve(std::move(a), std::move(b));
    if (!t) {
        if (diagnostics) ++diagnostics->singular_systems;
        return std::nullopt;
    }
    bool near = false;
    for (std::size_t i : face.free) {
        double u = frame.origin[i];
        for (std::size_t j = 0; j < k; ++j) u += (*t)[j] * frame.directions[j][i];
        if (std::abs(u) > 1.0 + tol) return std::nullopt;
        if (std::abs(u) > 1.0 - 10.0 * tol) near = true;
    }
    if (near && diagnostics) ++diagnostics->near_boundary_hits;

    Vector p = frame.anchor;
    const VectorList& spans = flat.orientation().spans();
    for (std::size_t j = 0; j < k; ++j) axpy((*t)[j], spans[j], p);
    return p;
}

}  // namespace

Zonotope face_zonotope(const Body& body, const Face& face, const NormalBasis& basis)
{
    const std::size_t n = body.n();
    if (basis.ambient_dim != n) throw InvalidInput("normal basis does not match body dimension");
    check_face(face, n);
    const VectorList& g = body.edge_generators();
    Vector base = body.center();
    for (std::size_t a = 0; a < face.fixed.size(); ++a) {
        axpy(0.5 * face.signs[a], g[face.fixed[a]], base);
    }
    VectorList gens;
    gens.reserve(face.free.size());
    for (std::size_t i : face.free) {
        axpy(-0.5, g[i], base);
        gens.push_back(project_onto_basis(g[i], basis));
    }
    return Zonotope(project_onto_basis(base, basis), std::move(gens));
}

bool face_intersects(const Body& body, const Flat& flat, const Face& face, double tol)
{
    const Zonotope pf = face_zonotope(body, face, flat.normal_basis());
    return MembershipTest(pf)(flat.tau(), tol);
}

std::optional<Vector> solve_face_vertex(const Body& body, const Flat& flat, const Face& face, double tol,
                                        SliceDiagnostics* diagnostics)
{
    check_face(face, body.n());
    if (face.fixed.size() != flat.orientation().k()) {
        throw InvalidInput("face codimension does not match the flat dimension");
    }
    return solve_in_frame(flat, cube_frame(body, flat), face, tol, diagnostics);
}

SliceResult slice_vertices(const Body& body, const Flat& flat, const std::vector<Face>& faces)
{
    const CubeFrame frame = cube_frame(body, flat);
    SliceResult result;
    for (const Face& face : faces) {
        if (face.fixed.size() != flat.orientation().k()) {
            throw InvalidInput("face codimension does not match the flat dimension");
        }
        auto p = solve_in_frame(flat, frame, face, kBoundaryTolerance, &result.diagnostics);
        if (!p) continue;
        bool duplicate = false;
        for (const Vector& q : result.vertices) {
            if (norm(subtract(*p, q)) < kVertexMergeDistance) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) {
            ++result.diagnostics.merged_duplicates;
        } else {
            result.vertices.push_back(std::move(*p));
        }
    }
    return result;
}

SliceResult slice_vertices(const Body& body, const Flat& flat)
{
    return slice_vertices(body, flat, enumerate_faces(body.n(), flat.orientation().k()));
}

std::size_t vertex_count(const Body& body, const Flat& flat)
{
    return slice_vertices(body, flat).vertices.size();
}

}  // namespace hyperslice
