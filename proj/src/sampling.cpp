#include "efdiv/sampling.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "efdiv/errors.hpp"

namespace efdiv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t worker) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ (worker + 0x5851f42d4c957f2dULL));
}

Sampler::Sampler(const FamilySpec& family, const NaturalParam& theta, std::uint64_t seed)
    : family_(family), engine_(seed) {
  family.require_in_domain(theta, "sampling parameter");
  if (family.kind() == FamilyKind::Poisson) {
    rate_ = std::exp(theta[0]);
    if (!(rate_ > 0.0) || !std::isfinite(rate_)) throw DomainError("poisson rate is not a positive finite number");
    pieces_ = std::max(1, static_cast<int>(std::ceil(rate_ / kPoissonInversionLimit)));
    piece_rate_ = rate_ / pieces_;
    exp_neg_piece_rate_ = std::exp(-piece_rate_);
  } else {
    mean_.assign(theta.coords().begin(), theta.coords().end());
  }
}

double Sampler::next_uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Sampler::next_standard_normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = 1.0 - next_uniform();  // (0, 1]
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Sampler::draw_poisson_piece(double rate, double exp_neg_rate) {
  const double u = next_uniform();
  std::uint64_t x = 0;
  double pmf = exp_neg_rate;
  double cdf = pmf;
  // Rounding can leave the accumulated CDF a hair below 1; stop once the pmf
  // no longer moves it.
  while (u >= cdf) {
    ++x;
    pmf *= rate / static_cast<double>(x);
    const double next = cdf + pmf;
    if (next == cdf) break;
    cdf = next;
  }
  return x;
}

std::uint64_t Sampler::next_count() {
  if (family_.kind() != FamilyKind::Poisson) throw ArgumentError("count draws need a poisson family");
  std::uint64_t total = 0;
  for (int i = 0; i < pieces_; ++i) total += draw_poisson_piece(piece_rate_, exp_neg_piece_rate_);
  return total;
}

void Sampler::next_point(std::span<double> out) {
  if (family_.kind() != FamilyKind::IsotropicGaussian) throw ArgumentError("point draws need a gaussian family");
  if (out.size() != mean_.size()) throw ArgumentError("output span does not match the gaussian dimension");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mean_[i] + next_standard_normal();
}

WorkerRange worker_range(std::size_t n, std::size_t workers, std::size_t worker) noexcept {
  const auto bound = [&](std::size_t w) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::size_t>(static_cast<u128>(n) * w / workers);
  };
  return {bound(worker), bound(worker + 1)};
}

SampleBatch sample(const FamilySpec& family, const NaturalParam& theta, std::size_t n, std::uint64_t seed,
                   std::size_t workers, std::uint64_t stream) {
  if (n == 0) throw ArgumentError("sample size must be positive");
  if (workers == 0) throw ArgumentError("worker count must be positive");
  family.require_in_domain(theta, "sampling parameter");

  SampleBatch batch;
  batch.kind = family.kind();
  batch.dim = family.order();
  if (batch.kind == FamilyKind::Poisson) {
    batch.counts.resize(n);
  } else {
    batch.points.resize(n * batch.dim);
  }

  auto fill = [&](std::size_t worker) {
    Sampler sampler(family, theta, derive_stream_seed(seed, stream, worker));
    const auto range = worker_range(n, workers, worker);
    for (std::size_t i = range.begin; i < range.end; ++i) {
      if (batch.kind == FamilyKind::Poisson) {
        batch.counts[i] = sampler.next_count();
      } else {
        sampler.next_point(std::span<double>(batch.points).subspan(i * batch.dim, batch.dim));
      }
    }
  };

  if (workers == 1) {
    fill(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(fill, w);
  }
  return batch;
}

}  // namespace efdiv
