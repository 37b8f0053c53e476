#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cubelp/complex.hpp"

namespace cubelp {

CubeComplex hypercube(std::size_t n);
// Tree on vertices 0..m-1 given by m-1 edges; one hyperplane per edge.
CubeComplex tree(const std::vector<std::pair<std::size_t, std::size_t>>& edges);
// k squares glued along a common edge.
CubeComplex book_of_squares(std::size_t k);
// Squares C = {a1,a2} and C' = {b1,b2} meeting at the origin, plus the
// corner square {a2,b1} glued along one edge of each.
CubeComplex corner_complex();
// A square {d,a} and a 3-cube {d,b,c} sharing the edge d.
CubeComplex square_cube_book();
// [0,n1]x[0,n2]x[0,n3] subdivided into unit cubes.
CubeComplex grid(std::size_t n1, std::size_t n2, std::size_t n3);
// The long-rectangle fixture, grid(12,1,1).
CubeComplex long_rectangle();

// Vertex wedge: two cubes C (hyperplanes I) and C' (hyperplanes J) meeting
// at the origin v, with corner cubes S_I x S_J for every biclique of a random
// compatibility relation between I and J.
struct WedgeInstance {
    CubeComplex complex;
    SignVector v;
    Point x;  // interior of C
    Point y;  // interior of C'
};

struct WedgeLimits {
    std::size_t max_side = 3;
    std::size_t max_dimension = 4;
    std::size_t max_vertices = 64;
};

WedgeInstance random_vertex_wedge(std::uint64_t seed, const WedgeLimits& limits = {});

struct NamedComplex {
    std::string name;
    CubeComplex complex;
};

// The bundled fixtures: square, hypercube3, book2, corner, square_cube_book,
// grid222, long_rectangle.
std::vector<NamedComplex> bundled_fixtures();

}  // namespace cubelp
