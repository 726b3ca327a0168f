#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "efdiv/family.hpp"

namespace efdiv {

/// Seed of the substream used by `worker` for logical stream `stream`
/// (e.g. one stream per distribution being sampled). SplitMix64 finalizer.
[[nodiscard]] std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream,
                                               std::uint64_t worker) noexcept;

/// Sequential draws from one family member. The engine is mt19937_64 and every
/// transform below it is written out here, so a given seed yields the same
/// sequence on every conforming standard library.
///
/// Poisson draws use inversion by sequential search on the CDF, which costs
/// O(rate) per draw. Rates above kPoissonInversionLimit are split into equal
/// pieces no larger than the limit and the piecewise draws are added.
/// Gaussian coordinates come from the Box-Muller transform.
class Sampler {
 public:
  static constexpr double kPoissonInversionLimit = 30.0;

  Sampler(const FamilySpec& family, const NaturalParam& theta, std::uint64_t seed);

  [[nodiscard]] const FamilySpec& family() const noexcept { return family_; }

  std::uint64_t next_count();
  /// Fills `out` (size = family order) with one Gaussian observation.
  void next_point(std::span<double> out);

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();
  double next_standard_normal();

 private:
  std::uint64_t draw_poisson_piece(double rate, double exp_neg_rate);

  FamilySpec family_;
  std::vector<double> mean_;
  double rate_ = 0.0;
  int pieces_ = 1;
  double piece_rate_ = 0.0;
  double exp_neg_piece_rate_ = 1.0;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// n draws, either counts (Poisson) or points stored row-major (Gaussian).
struct SampleBatch {
  FamilyKind kind = FamilyKind::Poisson;
  std::size_t dim = 1;
  std::vector<std::uint64_t> counts;
  std::vector<double> points;

  [[nodiscard]] std::size_t size() const noexcept {
    return kind == FamilyKind::Poisson ? counts.size() : points.size() / dim;
  }
  [[nodiscard]] std::span<const double> point(std::size_t i) const noexcept {
    return std::span<const double>(points).subspan(i * dim, dim);
  }
};

/// Index range [begin, end) handled by `worker` out of `workers` for n draws.
struct WorkerRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};
[[nodiscard]] WorkerRange worker_range(std::size_t n, std::size_t workers, std::size_t worker) noexcept;

/// n independent draws. Draws are split into `workers` contiguous blocks, each
/// produced by its own substream on its own thread. The result depends only on
/// (family, theta, n, seed, stream, workers).
[[nodiscard]] SampleBatch sample(const FamilySpec& family, const NaturalParam& theta, std::size_t n,
                                 std::uint64_t seed, std::size_t workers = 1, std::uint64_t stream = 0);

}  // namespace efdiv
