#include "spectl/random.hpp"

#include <cmath>
#include <numbers>

namespace spectl {

double NormalStream::uniform_open() {
  // 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

RMatrix NormalStream::matrix(Index rows, Index cols) {
  RMatrix m(rows, cols);
  // Row-major fill so the draw order reads naturally.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = next();
  return m;
}

RVector NormalStream::vector(Index size) {
  RVector v(size);
  for (Index i = 0; i < size; ++i) v(i) = next();
  return v;
}

}  // namespace spectl
