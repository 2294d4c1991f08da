#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pucorrect/common.hpp"
#include "pucorrect/core_data.hpp"
#include "pucorrect/negativity.hpp"

namespace pucorrect {

/// Lowercase, replace punctuation with spaces, split on whitespace. Bytes
/// outside ASCII pass through untouched so UTF-8 words stay whole.
std::vector<std::string> tokenize(const std::string& text);

struct StructuralFeatures {
  double len = 0;   // word count
  double nos = 0;   // sentence count, trailing fragments included
  double asl = 0;   // len / nos, 0 for empty text
  double poqs = 0;  // question-terminated sentences / nos
};

/// Sentences are maximal runs between {. ! ?} groups containing at least one
/// non-space character; a run containing '?' marks its sentence as a question.
StructuralFeatures structural_features(const std::string& text);

struct TfidfModel {
  std::vector<std::string> terms;       // index -> term
  std::vector<int> doc_freq;            // index -> document frequency
  std::unordered_map<std::string, int> vocabulary;  // term -> index
  int n_docs = 0;

  std::size_t size() const { return terms.size(); }
};

/// Vocabulary = top max_vocab terms by document frequency, ties broken
/// lexicographically. Throws on an empty corpus.
TfidfModel tfidf_fit(const std::vector<std::vector<std::string>>& corpus, int max_vocab);

struct SparseVec {
  std::vector<int> indices;    // ascending
  std::vector<double> values;

  std::vector<double> to_dense(std::size_t dim) const;
};

/// weight(t) = tf(t) * ln(n_docs / df(t)), L2-normalised; out-of-vocabulary
/// tokens are ignored and an all-zero vector stays zero.
SparseVec tfidf_transform(const TfidfModel& model, const std::vector<std::string>& doc);

enum class CoarseTag { Noun, Adj, Adv, Other };
using PosTagger = std::function<CoarseTag(const std::string&)>;

/// Suffix heuristic: -ly -> Adv; -ous/-ful/-ive/-less/-able -> Adj;
/// -tion/-sion/-ness/-ment/-ity -> Noun; anything else Other. A real tagger
/// can be plugged in without touching feature schemas.
CoarseTag default_tagger(const std::string& token);

struct SyntacticFeatures {
  double pct_noun = 0;
  double pct_adj = 0;
  double pct_adv = 0;
};

SyntacticFeatures syntactic_features(const std::string& text,
                                     const PosTagger& tagger = default_tagger);

struct UserStat {
  double mean_rating = 0.0;
  int review_count = 0;
};
using UserStats = std::unordered_map<std::string, UserStat>;

UserStats fit_user_stats(const std::vector<ReviewRecord>& records);

struct MetadataFeatures {
  double rating = 0.0;
  std::optional<double> rating_norm;  // user mean - rating; absent without user stats
  double age_norm = 0.0;              // age-based negativity value
};

MetadataFeatures metadata_features(const ReviewRecord& record, const UserStats& stats,
                                   int max_age_days, double epsilon = kDefaultEpsilon);

/// The named feature selections. Structural bundles the four structural
/// columns; All concatenates Structural + UGR + Syn + Metadata.
enum class FeatureSet {
  Len, NoS, Asl, PoQS, Structural, Ugr, Syn, Rating, RatingNorm, Age, All
};

FeatureSet parse_feature_set(const std::string& name);
const char* feature_set_name(FeatureSet set);

/// Fits on a training corpus (vocabulary, user stats, max age) and turns
/// record lists into dense matrices with a stable, recorded column order.
class FeatureExtractor {
 public:
  FeatureExtractor() = default;
  FeatureExtractor(FeatureSet selector, int max_vocab = 10000,
                   double epsilon = kDefaultEpsilon);

  /// max_age_override >= 0 pins the age normaliser (e.g. to the full-dataset
  /// maximum) instead of the fitting corpus maximum. Prediction-time records
  /// older than the pinned maximum clamp to the top score.
  void fit(const std::vector<ReviewRecord>& records, int max_age_override = -1);

  Matrix transform(const std::vector<ReviewRecord>& records) const;
  const std::vector<std::string>& schema() const { return schema_; }

  FeatureSet selector() const { return selector_; }
  int max_vocab() const { return max_vocab_; }
  double epsilon() const { return epsilon_; }
  int max_age() const { return max_age_; }
  bool has_user_stats() const { return has_user_stats_; }
  const TfidfModel& tfidf() const { return tfidf_; }
  const UserStats& user_stats() const { return user_stats_; }

  /// Rebuild a fitted extractor from serialised state.
  static FeatureExtractor restore(FeatureSet selector, int max_vocab, double epsilon,
                                  int max_age, TfidfModel tfidf, UserStats stats,
                                  bool has_user_stats);

 private:
  void build_schema();

  FeatureSet selector_ = FeatureSet::All;
  int max_vocab_ = 10000;
  double epsilon_ = kDefaultEpsilon;
  int max_age_ = 0;
  bool fitted_ = false;
  bool has_user_stats_ = false;
  TfidfModel tfidf_;
  UserStats user_stats_;
  std::vector<std::string> schema_;
};

}  // namespace pucorrect
