#pragma once

#include <cstdint>
#include <random>

#include "spectl/linalg.hpp"

namespace spectl {

/// Seeded standard-normal stream. Uses mt19937_64 bits and a Box-Muller
/// transform so draws are identical across standard libraries
/// (std::normal_distribution is implementation-defined).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();

  RMatrix matrix(Index rows, Index cols);
  RVector vector(Index size);

 private:
  double uniform_open();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spectl
