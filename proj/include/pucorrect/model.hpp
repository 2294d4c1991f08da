#pragma once

#include <vector>

#include "pucorrect/common.hpp"

namespace pucorrect {

/// Linear scorer g(x) = w . x + b; the classified label is sign(g) with ties
/// broken negative.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  std::size_t feature_dim() const { return weights.size(); }
  double score(std::span<const double> x) const;
};

/// Raw decision values, one per row. Throws on a dimension mismatch.
std::vector<double> predict_scores(const LinearModel& model, const Matrix& features);

/// tanh-squashed copy of the scores, in [-1, 1], for histogramming.
std::vector<double> squash_scores(std::span<const double> scores);

/// +1 iff score > threshold; a score equal to the threshold goes negative, so
/// the all-zeros initial model predicts everything unlabelled.
std::vector<int> predict_labels(std::span<const double> scores, double threshold = 0.0);

/// Per-column zero-mean/unit-variance scaling fitted on a training matrix and
/// reused at prediction time. Near-constant columns keep scale 1 so they pass
/// through centred but unscaled.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  void fit(const Matrix& features);
  Matrix apply(const Matrix& features) const;
  bool fitted() const { return !mean.empty(); }
};

}  // namespace pucorrect
