#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pucorrect {

/// Dense row-major matrix of doubles. Small and dependency-free; the feature
/// dimensions in this toolkit stay modest, so no BLAS backing is needed.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

/// Sum with deterministic pairwise-tree reduction. Bit-stable regardless of
/// how callers might later partition the work, and better conditioned than a
/// left-to-right accumulation.
double pairwise_sum(std::span<const double> xs);

/// Derive an independent stream seed from (seed, salt). splitmix64 finaliser.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// 64-bit FNV-1a over a byte string, used to fingerprint resolved configs.
std::uint64_t fnv1a64(std::string_view bytes);

/// 1,373,587-style thousands grouping.
std::string format_with_commas(long long value);

}  // namespace pucorrect
