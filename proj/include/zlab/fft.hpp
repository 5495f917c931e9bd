#pragma once

#include "zlab/field.hpp"

#include <span>
#include <vector>

namespace zlab::fft {

// Unnormalized multi-dimensional DFT over every axis of a row-major array.
// sign = -1 is the forward transform. in and out must not alias.
void execute(std::span<const int> shape, int sign, const complex* in, complex* out);

// Physical values of a Fourier-space field on a grid refined by factor[a]
// along each axis (trigonometric interpolation by zero padding).
struct Refined {
    std::vector<int> shape;
    Eigen::ArrayXcd values;
};
Refined refine(const Field& field, std::span<const int> factor);

} // namespace zlab::fft
