#include "facmod/datagen.hpp"

#include <cmath>

#include "facmod/errors.hpp"
#include "facmod/spectral.hpp"

namespace facmod {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  spare_ = mag * std::sin(ang);
  has_spare_ = true;
  return mag * std::cos(ang);
}

GroundTruth gen_ground_truth(int n, int r, std::uint64_t seed, double offset) {
  if (r < 1 || n <= r) throw InputError("gen_ground_truth: need n > r >= 1");
  if (offset < 0.0) throw InputError("gen_ground_truth: offset must be >= 0");

  Rng rng(seed);
  GroundTruth gt;
  gt.n = n;
  gt.r = r;
  gt.phi.resize(static_cast<size_t>(n) * r);
  for (double& v : gt.phi) v = rng.uniform01() + offset;

  gt.d_true = SymmetricMatrix(n);
  for (int i = 0; i < n; ++i) gt.d_true.set(i, i, rng.uniform01() + offset);

  gt.l_true = SymmetricMatrix(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < r; ++k)
        acc += gt.phi[static_cast<size_t>(i) * r + k] *
               gt.phi[static_cast<size_t>(j) * r + k];
      gt.l_true.set(i, j, acc);
    }
  }
  gt.sigma_true = gt.l_true + gt.d_true;
  return gt;
}

SampleSet gen_samples(const GroundTruth& gt, int num_samples,
                      std::uint64_t seed) {
  if (num_samples < 1) throw InputError("gen_samples: need at least 1 sample");
  if (gt.n < 1 || gt.phi.size() != static_cast<size_t>(gt.n) * gt.r)
    throw InputError("gen_samples: malformed ground truth");

  const int n = gt.n;
  const int r = gt.r;
  std::vector<double> noise_std(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) noise_std[i] = std::sqrt(gt.d_true(i, i));

  Rng rng(seed);
  SampleSet out;
  out.n = n;
  out.count = num_samples;
  out.rng_seed = seed;
  out.data.resize(static_cast<size_t>(num_samples) * n);

  std::vector<double> alpha(static_cast<size_t>(r));
  for (int k = 0; k < num_samples; ++k) {
    for (int j = 0; j < r; ++j) alpha[j] = rng.normal();
    double* row = out.data.data() + static_cast<size_t>(k) * n;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < r; ++j)
        acc += gt.phi[static_cast<size_t>(i) * r + j] * alpha[j];
      row[i] = acc + noise_std[i] * rng.normal();
    }
  }
  return out;
}

SymmetricMatrix empirical_covariance(const SampleSet& s, Centering center) {
  if (s.count < 1 || s.n < 1 ||
      s.data.size() != static_cast<size_t>(s.count) * s.n)
    throw InputError("empirical_covariance: malformed sample set");

  const int n = s.n;
  std::vector<double> mu(static_cast<size_t>(n), 0.0);
  if (center == Centering::SampleMean) {
    for (int k = 0; k < s.count; ++k)
      for (int i = 0; i < n; ++i) mu[i] += s.at(k, i);
    for (double& v : mu) v /= s.count;
  }

  SymmetricMatrix cov(n);
  std::vector<double> centered(static_cast<size_t>(n));
  for (int k = 0; k < s.count; ++k) {
    for (int i = 0; i < n; ++i) centered[i] = s.at(k, i) - mu[i];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        cov.set(i, j, cov(i, j) + centered[i] * centered[j]);
  }
  cov *= 1.0 / s.count;

  SpectralDecomposition dec = eig_sym(cov);
  if (dec.values.back() < -tol_pd(std::abs(dec.values.front())))
    throw SolverError("empirical_covariance: accumulation lost PSD");
  return cov;
}

}  // namespace facmod
