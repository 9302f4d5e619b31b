#pragma once

#include <cstddef>

#include "weldkit/image.hpp"
#include "weldkit/kernel.hpp"

namespace weldkit {

// Convolution with edge-replicate boundaries. The OpenMP kernels and their
// serial references run identical per-pixel arithmetic, so results match
// bit for bit.

/// Throws DimensionError if the kernel is larger than the image.
GrayImage convolve(const GrayImage& image, const Kernel& kernel);
GrayImage convolve_reference(const GrayImage& image, const Kernel& kernel);

Field convolve(const Field& field, const Kernel& kernel);
Field convolve_reference(const Field& field, const Kernel& kernel);

/// Sobel gradient magnitude, edge-replicate.
Field sobel_magnitude(const GrayImage& image);
Field sobel_magnitude_reference(const GrayImage& image);

/// Bilinear resampling with pixel-center alignment. Same-size input is copied.
Field resize_bilinear(const Field& field, std::size_t width, std::size_t height);
GrayImage resize_bilinear(const GrayImage& image, std::size_t width, std::size_t height);

/// Mean squared error; throws DimensionError on size mismatch.
double mse(const GrayImage& reference, const GrayImage& candidate);

/// 10*log10(255^2 / MSE) in dB; +infinity when the images are identical.
double psnr(const GrayImage& reference, const GrayImage& candidate);

}  // namespace weldkit
