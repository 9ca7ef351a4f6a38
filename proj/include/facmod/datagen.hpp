#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "facmod/sym_matrix.hpp"

namespace facmod {

// xoshiro256++ seeded through SplitMix64, normals via Box-Muller with a
// cached spare.  Uniform doubles are bit-exact across platforms; normals
// inherit the platform libm's rounding of log/cos/sin (stable per binary).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform01();  // [0, 1)
  double normal();     // standard normal

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct GroundTruth {
  int n = 0;
  int r = 0;
  std::vector<double> phi;     // n x r loading matrix, row-major
  SymmetricMatrix d_true;      // nonnegative diagonal
  SymmetricMatrix l_true;      // phi * phi^T, rank r
  SymmetricMatrix sigma_true;  // l_true + d_true
};

struct SampleSet {
  int n = 0;
  int count = 0;
  std::uint64_t rng_seed = 0;
  std::vector<double> data;  // count x n, row-major

  double at(int k, int i) const {
    return data[static_cast<size_t>(k) * n + i];
  }
};

enum class Centering { SampleMean, Zero };

// Loading-matrix and noise-variance entries are uniform(0,1) + offset, drawn
// in that order from one stream, so the construction is a pure function of
// (n, r, seed, offset).
GroundTruth gen_ground_truth(int n, int r, std::uint64_t seed,
                             double offset = 5.0);

// Draws factor scores alpha ~ N(0, I_r) then noise w ~ N(0, D_true) per
// sample; the sample is phi * alpha + w.
SampleSet gen_samples(const GroundTruth& gt, int num_samples,
                      std::uint64_t seed);

// (1/N) sum (x_k - mu)(x_k - mu)^T with mu the sample mean or zero.
SymmetricMatrix empirical_covariance(const SampleSet& s, Centering center);

}  // namespace facmod
