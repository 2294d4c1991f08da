#include "pucorrect/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

namespace pucorrect {

namespace {
constexpr double kChiSquared05 = 3.841;  // df = 1, alpha = 0.05
}

PRF1 prf1(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw std::invalid_argument("prf1: empty or mismatched inputs");
  PRF1 out;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == +1;
    const bool t = truth[i] == +1;
    if (p && t) ++out.tp;
    else if (p && !t) ++out.fp;
    else if (!p && t) ++out.fn;
    else ++out.tn;
  }
  out.precision = out.tp + out.fp > 0
                      ? static_cast<double>(out.tp) / (out.tp + out.fp)
                      : 0.0;
  out.recall = out.tp + out.fn > 0
                   ? static_cast<double>(out.tp) / (out.tp + out.fn)
                   : 0.0;
  out.f1 = out.precision + out.recall > 0.0
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

McNemarResult mcnemar(std::span<const int> pred_a, std::span<const int> pred_b,
                      std::span<const int> truth) {
  if (pred_a.size() != truth.size() || pred_b.size() != truth.size())
    throw std::invalid_argument("mcnemar: length mismatch");
  McNemarResult out;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool a_ok = pred_a[i] == truth[i];
    const bool b_ok = pred_b[i] == truth[i];
    if (a_ok && !b_ok) ++out.b;
    if (!a_ok && b_ok) ++out.c;
  }
  if (out.b + out.c > 0) {
    const double num = std::max(std::abs(static_cast<double>(out.b - out.c)) - 1.0, 0.0);
    out.statistic = num * num / static_cast<double>(out.b + out.c);
  }
  out.significant_05 = out.statistic > kChiSquared05;
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx <= 0.0 || vy <= 0.0)
    throw std::invalid_argument("undefined correlation: constant input");
  return cov / std::sqrt(vx * vy);
}

}  // namespace

CorrelationPair correlations(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("correlations: need equal lengths >= 3");
  CorrelationPair out;
  out.pearson = pearson(x, y);
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  out.spearman = pearson(rx, ry);
  return out;
}

std::vector<AgeBin> age_helpfulness_curve(const Dataset& dataset, int bin_width_days) {
  if (bin_width_days < 1)
    throw std::invalid_argument("age_helpfulness_curve: bin width must be >= 1");
  if (dataset.size() == 0)
    throw std::invalid_argument("age_helpfulness_curve: empty dataset");

  std::map<int, std::pair<long, long>> bins;  // bin -> (positives, total)
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int bin = dataset.records[i].age_days / bin_width_days;
    auto& [pos, total] = bins[bin];
    if (dataset.labels[i] == LabelState::Positive) ++pos;
    ++total;
  }

  std::vector<AgeBin> out;
  out.reserve(bins.size());
  for (const auto& [bin, counts] : bins)
    out.push_back({bin * bin_width_days,
                   static_cast<double>(counts.first) / counts.second,
                   counts.second});
  return out;
}

Histogram score_histogram(std::span<const double> squashed, int n_bins) {
  if (n_bins < 2) throw std::invalid_argument("score_histogram: n_bins must be >= 2");
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
  const double width = 2.0 / n_bins;
  for (int i = 0; i <= n_bins; ++i) h.edges[i] = -1.0 + width * i;
  h.edges[n_bins] = 1.0;
  for (double s : squashed) {
    int bin = static_cast<int>(std::floor((s + 1.0) / width));
    bin = std::clamp(bin, 0, n_bins - 1);  // 1.0 lands in the last bin
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

FlipStats flip_report(std::span<const int> basic_pred,
                      std::span<const int> corrected_pred,
                      std::span<const LabelState> labels) {
  if (basic_pred.size() != labels.size() || corrected_pred.size() != labels.size())
    throw std::invalid_argument("flip_report: length mismatch");
  FlipStats out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != LabelState::Unlabelled) continue;
    if (basic_pred[i] == -1) {
      ++out.base_negative;
      if (corrected_pred[i] == +1) ++out.flipped;
    }
  }
  out.pct = out.base_negative > 0
                ? static_cast<double>(out.flipped) / out.base_negative
                : 0.0;
  return out;
}

std::string format_flip(const FlipStats& stats) {
  // Percentages truncate to one decimal (8.37% prints as 8.3%).
  const double pct = std::floor(1000.0 * stats.pct) / 10.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%ld / %ld (%.1f%%)", stats.flipped,
                stats.base_negative, pct);
  return buf;
}

std::vector<int> observed_truth(std::span<const LabelState> labels) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = labels[i] == LabelState::Positive ? +1 : -1;
  return out;
}

}  // namespace pucorrect
