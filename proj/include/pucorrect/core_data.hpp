#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pucorrect {

/// One raw review instance as ingested from a corpus file.
struct ReviewRecord {
  std::string id;
  std::optional<std::string> user_id;  // absent in the Amazon-style corpora
  std::string text;
  double rating = 0.0;   // in [1, 5]
  int age_days = 0;      // days since the review was posted, >= 0
  int helpful_votes = 0; // >= 0
};

/// Positive = has enough helpful votes; Unlabelled = everything else.
/// Unlabelled is not a confirmed negative.
enum class LabelState : std::uint8_t { Positive, Unlabelled };

struct Dataset {
  std::vector<ReviewRecord> records;
  std::vector<LabelState> labels;  // aligned with records
  std::size_t n_positive = 0;
  std::size_t n_unlabelled = 0;

  std::size_t size() const { return records.size(); }
  Dataset subset(const std::vector<std::size_t>& indices) const;
  void recount();
};

struct ClassPriors {
  double pi_plus;
  double pi_minus;
  /// Throws unless pi_plus is in (0,1); pi_minus is the complement.
  explicit ClassPriors(double pi_plus_);
};

enum class Format { Jsonl, Csv };
Format parse_format(const std::string& name);

struct LoadResult {
  std::vector<ReviewRecord> records;
  std::size_t skipped = 0;  // malformed lines dropped with a warning tally
};

/// Reads a JSONL or CSV review corpus. Malformed lines are skipped, not
/// fatal; an unreadable file throws.
LoadResult load_reviews(const std::string& path, Format format);

/// Labels each record Positive iff helpful_votes >= threshold. Throws on an
/// empty record list or threshold < 1.
Dataset apply_threshold(std::vector<ReviewRecord> records, int threshold);

struct FoldSplit {
  int k = 0;
  std::vector<int> assignments;  // per-instance fold index in [0, k)

  std::vector<std::size_t> test_indices(int fold) const;
  std::vector<std::size_t> train_indices(int fold) const;
};

/// Stratified k-fold assignment, deterministic for a fixed seed. Fold sizes
/// differ by at most one and each fold's positive count is within one
/// instance of an even share.
FoldSplit split_folds(const Dataset& dataset, int k, std::uint64_t seed);

struct DownsampleResult {
  Dataset dataset;
  bool already_balanced = false;  // set when n_positive >= n_unlabelled on entry
};

/// Uniformly subsamples the unlabelled (majority) class down to the positive
/// count. Positives and the relative record order are preserved. When the
/// positives are already the majority the input is returned unchanged with
/// the warning flag set.
DownsampleResult downsample_balance(const Dataset& train, std::uint64_t seed);

/// "<name>: 1,373,587 reviews, 45.21% helpful"
std::string dataset_summary(const std::string& name, const Dataset& dataset);

/// Age in days of the oldest record; 0 for an empty list.
int max_age_days(const std::vector<ReviewRecord>& records);

}  // namespace pucorrect
