#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sepcheck::detail {

// Lawson-Hanson active-set solver for min ||X w - y||_2 subject to w >= 0.
// X is given column by column, every column of length y.size().
std::vector<double> nnls(std::span<const std::vector<double>> columns,
                         std::span<const double> y);

}  // namespace sepcheck::detail
