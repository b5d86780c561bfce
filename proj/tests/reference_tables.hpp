#ifndef ROTOHULL_REFERENCE_TABLES_HPP
#define ROTOHULL_REFERENCE_TABLES_HPP

#include <string>
#include <vector>

#include "rotohull/abelian_group.hpp"

namespace rotohull::reference {

/// Grid rows indexed [k][n], cells in compact notation.
using Grid = std::vector<std::vector<std::string>>;
using DimGrid = std::vector<std::vector<std::size_t>>;

// Group cohomology H^n(B2O; H^k) for n = 0..4.
inline const Grid kCubeBorelZ{{"Z", "0", "2", "0", "48"}, {"0", "2", "4", "2", "0"}, {"0", "2", "4", "2", "0"}, {"Z", "0", "2", "0", "48"}};
inline const DimGrid kCubeBorelF2{{1, 1, 1, 1, 1}, {1, 2, 2, 1, 1}, {1, 2, 2, 1, 1}, {1, 1, 1, 1, 1}};
inline const Grid kSturmianBorelZ{{"Z", "0", "2", "0", "48"},
                                  {"0", "2^2", "4^2", "2^2", "0"},
                                  {"0", "2^3", "2+4^2", "2^3", "0"},
                                  {"Z^4", "0", "2^6", "0", "16^2+48^2"}};
inline const DimGrid kSturmianBorelF2{{1, 1, 1, 1, 1}, {2, 4, 4, 2, 2}, {3, 6, 6, 3, 3}, {4, 6, 6, 4, 4}};

// E2 pages over the space form S^3/2O for n = 0..3.
inline const Grid kCubeE2Z{{"Z", "0", "2", "Z"}, {"0", "2", "4", "2"}, {"0", "2", "4", "2"}, {"Z", "0", "2", "Z"}};
inline const DimGrid kCubeE2F2{{1, 1, 1, 1}, {1, 2, 2, 1}, {1, 2, 2, 1}, {1, 1, 1, 1}};
inline const Grid kSturmianE2Z{{"Z", "0", "2", "Z"}, {"0", "2^2", "4^2", "2^2"}, {"0", "2^3", "2+4^2", "2^3"}, {"Z^4", "0", "2^6", "Z^4"}};
inline const DimGrid kSturmianE2F2{{1, 1, 1, 1}, {2, 4, 4, 2}, {3, 6, 6, 3}, {4, 6, 6, 4}};

// Cohomology of the rotational hulls.
inline const std::vector<std::string> kCubeHull{"Z", "0", "2^2", "Z^2+2+4", "2+4", "2^2", "Z"};
inline const std::vector<std::size_t> kCubeHullF2{1, 2, 4, 6, 4, 2, 1};
inline const std::vector<std::string> kSturmianHull{"Z", "0", "2^3", "Z^5+2^3+4^2", "2^3+4^2", "2^9", "Z^4"};
inline const std::vector<std::size_t> kSturmianHullF2{1, 3, 8, 15, 14, 9, 4};
inline const std::vector<std::size_t> kSturmianRational{1, 0, 0, 5, 0, 0, 4};
inline const std::vector<std::size_t> kPuncturedPlaneRational{1, 1, 3, 3};
inline const std::vector<std::string> kPuncturedPlaneHull{"Z", "Z", "Z^3+2^3", "Z^3"};

// Degree-3 invariants of the Sturmian cube, as sums of wedge monomials.
inline const std::vector<std::vector<std::string>> kSturmianDegree3Invariants{
    {"x11x21x31"},
    {"x11x21x32", "x11x22x31", "x12x21x31"},
    {"x12x22x32"},
    {"x11x22x32", "x12x22x31", "x12x21x32"}};

inline FGAbelianGroup cell(const std::string& s) { return parse_compact_group(s); }

}  // namespace rotohull::reference

#endif  // ROTOHULL_REFERENCE_TABLES_HPP
