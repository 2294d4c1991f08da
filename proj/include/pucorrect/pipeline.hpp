#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pucorrect/core_data.hpp"
#include "pucorrect/eval.hpp"
#include "pucorrect/features.hpp"
#include "pucorrect/losses.hpp"
#include "pucorrect/model.hpp"
#include "pucorrect/trainer.hpp"

namespace pucorrect {

/// Flat key=value experiment configuration with section prefixes
/// (data., features., risk., train., eval.). Unknown keys are rejected and
/// every run emits the fully-resolved document next to its results, so a
/// report can always be traced back to the exact settings that produced it.
class ExperimentConfig {
 public:
  ExperimentConfig();  // all known keys at their defaults

  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;

  /// Canonical sorted key=value text.
  std::string resolved() const;
  /// 16 hex digits of the FNV-1a fingerprint of resolved().
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

struct ApproachResult {
  Assembly assembly = Assembly::Naive;
  std::vector<int> pooled_pred;        // held-out predictions in dataset order
  std::vector<double> pooled_squash;   // tanh scores, same alignment
  std::vector<PRF1> fold_metrics;      // vs observed labels
  PRF1 mean_folds;                     // arithmetic mean of fold P/R/F1
  PRF1 pooled_observed;
  std::optional<PRF1> pooled_truth;    // synthetic runs only
  McNemarResult mcnemar_vs_basic;      // zero row for the basic classifier
  FlipStats flips_vs_basic;
  Histogram histogram;
};

struct CompareResult {
  std::string resolved_config;
  std::string config_hash;
  std::string data_summary;
  std::size_t skipped_lines = 0;
  int folds = 0;
  std::vector<ApproachResult> approaches;  // naive, ncws, cpu, pconf, svmp

  const ApproachResult& by_assembly(Assembly assembly) const;
};

/// Full cross-validated comparison: the naive classifier plus the four
/// correction assemblies trained on identical folds, identical balanced
/// training sets, and identical seeds, evaluated on pooled held-out
/// predictions.
CompareResult run_compare(const ExperimentConfig& config);

/// report.txt, metrics.csv, flips.csv, histogram_<approach>.csv and
/// resolved_config.txt under outdir. Byte-stable for a fixed config.
void write_compare_reports(const CompareResult& result, const std::string& outdir);

/// A trained model plus everything needed to score raw records again:
/// the fitted feature extractor and the training-fold standardizer.
struct ModelBundle {
  LinearModel model;
  Standardizer standardizer;
  FeatureExtractor extractor;
  Assembly assembly = Assembly::Naive;
  BaseLoss base = BaseLoss::Hinge;
};

void save_model_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model_bundle(const std::string& path);

/// Trains one assembly on the full input per the config (no cross-validation).
ModelBundle train_single(const ExperimentConfig& config);

struct EvalReport {
  std::size_t n = 0;
  PRF1 vs_observed;
  std::optional<PRF1> vs_truth;
};

EvalReport evaluate_model(const ModelBundle& bundle, const Dataset& dataset,
                          const std::vector<int>* truth);

/// Dense CSV with a schema header row; comment lines carry provenance.
void write_dense_csv(const Matrix& features, const std::vector<std::string>& schema,
                     const std::string& path, const std::string& comment);

/// Sparse triplet format: "# rows=R cols=C" then "row,col,value" rows,
/// ascending by (row, col). Zero entries are omitted.
void write_sparse_triplets(const Matrix& features, const std::string& path,
                           const std::string& comment);

}  // namespace pucorrect
