#pragma once

#include <bitset>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cubelp {

inline constexpr std::size_t kMaxHyperplanes = 128;
inline constexpr std::size_t kMaxVertices = 10000;

// Coordinates closer than this to 0 or 1 are snapped onto the face.
inline constexpr double kSnapTolerance = 1e-12;

// Side of every hyperplane, bit h set means side 1.
using SignVector = std::bitset<kMaxHyperplanes>;

bool sign_less(const SignVector& a, const SignVector& b);

// Coordinatewise majority.
SignVector median(const SignVector& u, const SignVector& v, const SignVector& w);

// Face of the ambient cube [0,1]^n: coordinates in `support` are free, the
// others equal the bits of `base`. The base is kept clear on the support so
// that each face has exactly one representation.
struct CubeRef {
    SignVector base;
    SignVector support;

    std::size_t dimension() const { return support.count(); }
    // True if `other` is a face of this cube.
    bool contains(const CubeRef& other) const;

    friend bool operator==(const CubeRef&, const CubeRef&) = default;
};

CubeRef make_cube(const SignVector& base, const SignVector& support);
std::optional<CubeRef> intersect(const CubeRef& a, const CubeRef& b);
// Smallest face containing both.
CubeRef join(const CubeRef& a, const CubeRef& b);
std::string cube_key(const CubeRef& c, std::size_t n);

// A point in ambient coordinates [0,1]^n. Coordinates within kSnapTolerance
// of 0 or 1 are snapped, so integral coordinates are exact and the minimal
// cube is well defined.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> ambient);

    static Point vertex(const SignVector& v, std::size_t n);
    // Coordinates given relative to `base`, i.e. t measured away from it.
    static Point from_base(const SignVector& base, std::size_t n,
                           std::span<const std::pair<std::size_t, double>> coords);

    std::size_t size() const { return coords_.size(); }
    double operator[](std::size_t h) const { return coords_[h]; }
    const std::vector<double>& ambient() const { return coords_; }

    // Bits where the coordinate equals 1.
    SignVector base() const;
    // Hyperplanes with a fractional coordinate.
    SignVector support() const;
    CubeRef minimal_cube() const { return make_cube(base(), support()); }
    bool is_vertex() const { return support().none(); }

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

bool contains(const CubeRef& c, const Point& x);

class CubeComplex {
public:
    // Validates exhaustively: nonempty, connected, median-closed.
    CubeComplex(std::vector<std::string> hyperplanes, std::vector<SignVector> vertices);

    // Skips validation. For vertex sets that are valid by construction.
    static CubeComplex trusted(std::vector<std::string> hyperplanes,
                               std::vector<SignVector> vertices);

    std::size_t hyperplane_count() const { return hyperplanes_.size(); }
    std::size_t vertex_count() const { return vertices_.size(); }
    const std::vector<std::string>& hyperplanes() const { return hyperplanes_; }
    const std::vector<SignVector>& vertices() const { return vertices_; }

    bool has_vertex(const SignVector& v) const;
    std::optional<std::size_t> vertex_index(const SignVector& v) const;
    std::optional<std::size_t> hyperplane_index(std::string_view label) const;

    // All 2^dim corners present. Memoized, thread safe.
    bool has_cube(const CubeRef& c) const;
    bool contains(const Point& x) const;

    std::vector<CubeRef> cubes() const;
    std::vector<CubeRef> maximal_cubes() const;
    std::size_t dimension() const;

    // Same hyperplanes, given vertex subset (assumed convex).
    CubeComplex restrict_to(std::vector<SignVector> subset) const;

private:
    struct Index;
    CubeComplex(std::vector<std::string> hyperplanes, std::vector<SignVector> vertices,
                bool validate);

    std::vector<std::string> hyperplanes_;
    std::vector<SignVector> vertices_;
    std::shared_ptr<Index> index_;
};

// Throws NotMedian or Disconnected with a witness.
void validate_vertices(std::size_t n, const std::vector<SignVector>& vertices);

std::optional<CubeRef> minimal_cube_pair(const CubeComplex& X, const Point& x, const Point& y);

// Convex hull of the vertices of the minimal cubes of `points`: the vertices
// lying in every half-space that contains all of them. Ambient hyperplanes kept.
std::vector<SignVector> hull_vertices(const CubeComplex& X, std::span<const Point> points);
CubeComplex hull_complex(const CubeComplex& X, std::span<const Point> points);

// Hyperplanes separating some pair of the given vertices, in ambient order.
std::vector<std::size_t> separating_hyperplanes(const std::vector<SignVector>& vertices,
                                                std::size_t n);

// Copy keeping only the listed ambient hyperplanes (vertices projected).
CubeComplex project_complex(const CubeComplex& X, const std::vector<std::size_t>& keep);
Point project_point(const Point& x, const std::vector<std::size_t>& keep);

// Hull with hyperplanes restricted to the separating ones.
CubeComplex median_hull(const CubeComplex& X, std::span<const Point> points);

struct HullSplit {
    CubeRef shared;                        // D = C ∩ C'
    std::vector<std::size_t> d_hyperplanes;
    std::vector<std::size_t> y_hyperplanes;  // ambient indices kept in Y
    CubeComplex factor;                    // Y
};

HullSplit split_hull(const CubeComplex& X, const CubeRef& c1, const CubeRef& c2);

}  // namespace cubelp
