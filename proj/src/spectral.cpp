#include "weylchar/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "weylchar/error.hpp"

namespace weylchar::spectral {

namespace {

using cplx = std::complex<double>;

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// Plans are built once per (size, axis, sign) with FFTW_ESTIMATE so that the
// chosen algorithm, and therefore every output bit, is reproducible.
class PlanCache {
 public:
  fftw_plan get(int points, int axis, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(points, axis, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    FftwBuffer scratch(static_cast<std::size_t>(points) * points);
    int n[1] = {points};
    const int stride = axis == 0 ? 1 : points;
    const int dist = axis == 0 ? points : 1;
    fftw_plan plan = fftw_plan_many_dft(1, n, points, scratch.data, nullptr, stride, dist, scratch.data,
                                        nullptr, stride, dist, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                        FFTW_ESTIMATE);
    if (plan == nullptr) throw Error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void require_square(const Eigen::MatrixXcd& values) {
  if (values.rows() != values.cols() || values.rows() < 2) {
    throw DimensionError("spectral: grid data must be square");
  }
}

}  // namespace

std::vector<double> wavenumbers(int points, double spacing) {
  std::vector<double> k(points);
  const double base = 2.0 * std::numbers::pi / (points * spacing);
  for (int j = 0; j < points; ++j) k[j] = base * (j < points / 2 ? j : j - points);
  return k;
}

void dft_along(Eigen::MatrixXcd& values, int axis, int sign) {
  require_square(values);
  if (axis != 0 && axis != 1) throw DomainError("dft_along: axis must be 0 or 1");
  const int m = static_cast<int>(values.rows());
  fftw_plan plan = plan_cache().get(m, axis, sign);
  FftwBuffer buf(static_cast<std::size_t>(m) * m);
  std::copy(values.data(), values.data() + values.size(), reinterpret_cast<cplx*>(buf.data));
  fftw_execute_dft(plan, buf.data, buf.data);
  std::copy(reinterpret_cast<cplx*>(buf.data), reinterpret_cast<cplx*>(buf.data) + values.size(),
            values.data());
}

void shift_lines(Eigen::MatrixXcd& values, int axis, std::span<const double> shifts, double spacing) {
  require_square(values);
  const int m = static_cast<int>(values.rows());
  if (static_cast<int>(shifts.size()) != m) throw DimensionError("shift_lines: one shift per line required");
  const std::vector<double> k = wavenumbers(m, spacing);
  dft_along(values, axis, -1);
  const double norm = 1.0 / m;
  for (int line = 0; line < m; ++line) {
    const double s = shifts[line];
    for (int j = 0; j < m; ++j) {
      const cplx factor = j == m / 2 ? cplx(std::cos(k[j] * s), 0.0) : std::polar(1.0, k[j] * s);
      cplx& v = axis == 0 ? values(j, line) : values(line, j);
      v *= factor * norm;
    }
  }
  dft_along(values, axis, +1);
}

void shift_all(Eigen::MatrixXcd& values, int axis, double shift, double spacing) {
  const std::vector<double> shifts(values.rows(), shift);
  shift_lines(values, axis, shifts, spacing);
}

Eigen::MatrixXcd derivative(const Eigen::MatrixXcd& values, int axis, int order, double spacing) {
  require_square(values);
  if (order < 0) throw DomainError("derivative: order must be nonnegative");
  Eigen::MatrixXcd out = values;
  if (order == 0) return out;
  const int m = static_cast<int>(values.rows());
  const std::vector<double> k = wavenumbers(m, spacing);
  std::vector<cplx> mult(m);
  for (int j = 0; j < m; ++j) {
    mult[j] = j == m / 2 ? cplx(0.0) : std::pow(cplx(0.0, k[j]), order) / static_cast<double>(m);
  }
  dft_along(out, axis, -1);
  if (axis == 0) {
    for (int c = 0; c < m; ++c)
      for (int j = 0; j < m; ++j) out(j, c) *= mult[j];
  } else {
    for (int j = 0; j < m; ++j) out.col(j) *= mult[j];
  }
  dft_along(out, axis, +1);
  return out;
}

}  // namespace weylchar::spectral
