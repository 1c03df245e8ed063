#pragma once

#include <array>
#include <vector>

namespace sobolab::fem::detail {

/// Reference-cell rule: barycentric points (first nv entries used) and
/// weights summing to one.
struct CellRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};

/// Assembly rules: 3-point Gauss on intervals, the (2/3, 1/6, 1/6) rule on triangles.
const CellRule& assembly_rule(int dimension);
/// Higher-order rules for error norms: 5-point Gauss, 7-point degree-5 triangle rule.
const CellRule& error_rule(int dimension);

}  // namespace sobolab::fem::detail
