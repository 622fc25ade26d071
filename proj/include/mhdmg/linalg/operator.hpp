#pragma once

#include <functional>
#include <span>

namespace mhdmg::linalg {

/// out = Op(in). Preconditioners use the same shape.
using Apply = std::function<void(std::span<const double> in, std::span<double> out)>;

}  // namespace mhdmg::linalg
