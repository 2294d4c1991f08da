#pragma once

#include <span>
#include <string>
#include <vector>

#include "pucorrect/core_data.hpp"

namespace pucorrect {

struct PRF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Positive class is +1. Zero-denominator precision/recall are defined as 0
/// so degenerate classifiers still yield a total F1.
PRF1 prf1(std::span<const int> predicted, std::span<const int> truth);

struct McNemarResult {
  long b = 0;  // A correct, B wrong
  long c = 0;  // A wrong, B correct
  double statistic = 0.0;
  bool significant_05 = false;  // statistic > 3.841 (chi-squared, df=1)
};

/// Continuity-corrected McNemar statistic (max(|b-c|-1, 0))^2 / (b+c);
/// b + c = 0 gives statistic 0, not significant.
McNemarResult mcnemar(std::span<const int> pred_a, std::span<const int> pred_b,
                      std::span<const int> truth);

struct CorrelationPair {
  double pearson = 0.0;
  double spearman = 0.0;
};

/// Pearson product-moment plus Spearman (Pearson on average ranks, ties
/// averaged). Throws for fewer than 3 points or a constant input.
CorrelationPair correlations(std::span<const double> x, std::span<const double> y);

struct AgeBin {
  int age_lo = 0;  // inclusive lower edge in days
  double helpful_probability = 0.0;
  long review_count = 0;
};

/// Positive-label probability per age bin; empty bins are omitted.
std::vector<AgeBin> age_helpfulness_curve(const Dataset& dataset, int bin_width_days);

struct Histogram {
  std::vector<double> edges;  // n_bins + 1 edges over [-1, 1]
  std::vector<long> counts;
};

/// Uniform bins over [-1, 1], half-open except the last, which also takes the
/// boundary value 1.
Histogram score_histogram(std::span<const double> squashed, int n_bins);

struct FlipStats {
  long flipped = 0;        // unlabelled: basic negative, corrected positive
  long base_negative = 0;  // unlabelled predicted negative by basic
  double pct = 0.0;
};

FlipStats flip_report(std::span<const int> basic_pred,
                      std::span<const int> corrected_pred,
                      std::span<const LabelState> labels);

/// "7559 / 90260 (8.3%)"
std::string format_flip(const FlipStats& stats);

/// Observed-label truth vector: Positive -> +1, Unlabelled -> -1.
std::vector<int> observed_truth(std::span<const LabelState> labels);

}  // namespace pucorrect
