#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace weylchar::spectral {

/// Angular wavenumbers of an FFT over `points` samples with the given spacing,
/// in FFT order. Entry points/2 is the Nyquist mode (reported as -pi/spacing).
std::vector<double> wavenumbers(int points, double spacing);

/// In-place unnormalized DFT along one axis of a square grid.
///
/// sign = -1: F_k = sum_j f_j exp(-2 pi i jk/M); sign = +1 uses exp(+...).
/// Axis 0 transforms each column (index i varies), axis 1 each row.
void dft_along(Eigen::MatrixXcd& values, int axis, int sign);

/// new(line, x) = old(line, x + shifts[line]) by trigonometric interpolation,
/// treating each line along `axis` as periodic. The Nyquist mode is shifted
/// with cos(k_N s), which keeps real data real.
void shift_lines(Eigen::MatrixXcd& values, int axis, std::span<const double> shifts, double spacing);

/// Same constant shift for every line.
void shift_all(Eigen::MatrixXcd& values, int axis, double shift, double spacing);

/// Spectral derivative of the given order along `axis`; Nyquist mode dropped.
Eigen::MatrixXcd derivative(const Eigen::MatrixXcd& values, int axis, int order, double spacing);

}  // namespace weylchar::spectral
