#include "pucorrect/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pucorrect {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (c < 0x80 && (std::ispunct(c) || std::isspace(c))) {
      if (!cur.empty()) {
        tokens.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                             : static_cast<char>(c));
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

StructuralFeatures structural_features(const std::string& text) {
  StructuralFeatures out;
  out.len = static_cast<double>(tokenize(text).size());

  int sentences = 0;
  int questions = 0;
  bool in_segment = false;   // current segment has a non-space character
  bool question_run = false; // terminator run after the segment saw a '?'
  auto close_segment = [&]() {
    if (in_segment) {
      ++sentences;
      if (question_run) ++questions;
    }
    in_segment = false;
    question_run = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      if (c == '?') question_run = true;
      // Close once the terminator run ends.
      const bool run_ends = i + 1 >= text.size() ||
                            (text[i + 1] != '.' && text[i + 1] != '!' &&
                             text[i + 1] != '?');
      if (run_ends) close_segment();
    } else if (!static_cast<bool>(std::isspace(static_cast<unsigned char>(c)))) {
      in_segment = true;
    }
  }
  question_run = false;  // a trailing fragment has no terminator
  close_segment();

  out.nos = static_cast<double>(sentences);
  out.asl = sentences > 0 ? out.len / out.nos : 0.0;
  out.poqs = sentences > 0 ? static_cast<double>(questions) / out.nos : 0.0;
  return out;
}

TfidfModel tfidf_fit(const std::vector<std::vector<std::string>>& corpus, int max_vocab) {
  if (corpus.empty()) throw std::invalid_argument("tfidf_fit: empty corpus");
  if (max_vocab < 1) throw std::invalid_argument("tfidf_fit: max_vocab must be >= 1");

  std::unordered_map<std::string, int> df;
  for (const auto& doc : corpus) {
    std::set<std::string> seen(doc.begin(), doc.end());
    for (const std::string& t : seen) ++df[t];
  }

  std::vector<std::pair<std::string, int>> ranked(df.begin(), df.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (ranked.size() > static_cast<std::size_t>(max_vocab))
    ranked.resize(static_cast<std::size_t>(max_vocab));

  TfidfModel model;
  model.n_docs = static_cast<int>(corpus.size());
  model.terms.reserve(ranked.size());
  model.doc_freq.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    model.vocabulary[ranked[i].first] = static_cast<int>(i);
    model.terms.push_back(ranked[i].first);
    model.doc_freq.push_back(ranked[i].second);
  }
  return model;
}

std::vector<double> SparseVec::to_dense(std::size_t dim) const {
  std::vector<double> out(dim, 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k)
    out[static_cast<std::size_t>(indices[k])] = values[k];
  return out;
}

SparseVec tfidf_transform(const TfidfModel& model, const std::vector<std::string>& doc) {
  std::unordered_map<int, int> tf;
  for (const std::string& t : doc) {
    auto it = model.vocabulary.find(t);
    if (it != model.vocabulary.end()) ++tf[it->second];
  }

  SparseVec vec;
  vec.indices.reserve(tf.size());
  for (const auto& [idx, _] : tf) vec.indices.push_back(idx);
  std::sort(vec.indices.begin(), vec.indices.end());

  double norm_sq = 0.0;
  vec.values.reserve(vec.indices.size());
  for (int idx : vec.indices) {
    const double idf = std::log(static_cast<double>(model.n_docs) /
                                static_cast<double>(model.doc_freq[idx]));
    const double w = static_cast<double>(tf[idx]) * idf;
    vec.values.push_back(w);
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : vec.values) v *= inv;
  }
  return vec;
}

CoarseTag default_tagger(const std::string& token) {
  auto ends_with = [&](const char* suffix) {
    const std::size_t n = std::char_traits<char>::length(suffix);
    return token.size() >= n && token.compare(token.size() - n, n, suffix) == 0;
  };
  if (ends_with("ly")) return CoarseTag::Adv;
  if (ends_with("ous") || ends_with("ful") || ends_with("ive") ||
      ends_with("less") || ends_with("able"))
    return CoarseTag::Adj;
  if (ends_with("tion") || ends_with("sion") || ends_with("ness") ||
      ends_with("ment") || ends_with("ity"))
    return CoarseTag::Noun;
  return CoarseTag::Other;
}

SyntacticFeatures syntactic_features(const std::string& text, const PosTagger& tagger) {
  SyntacticFeatures out;
  const std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) return out;
  int noun = 0, adj = 0, adv = 0;
  for (const std::string& t : tokens) {
    switch (tagger(t)) {
      case CoarseTag::Noun: ++noun; break;
      case CoarseTag::Adj: ++adj; break;
      case CoarseTag::Adv: ++adv; break;
      case CoarseTag::Other: break;
    }
  }
  const double n = static_cast<double>(tokens.size());
  out.pct_noun = noun / n;
  out.pct_adj = adj / n;
  out.pct_adv = adv / n;
  return out;
}

UserStats fit_user_stats(const std::vector<ReviewRecord>& records) {
  UserStats stats;
  for (const ReviewRecord& rec : records) {
    if (!rec.user_id) continue;
    UserStat& s = stats[*rec.user_id];
    s.mean_rating += rec.rating;
    s.review_count += 1;
  }
  for (auto& [_, s] : stats) s.mean_rating /= s.review_count;
  return stats;
}

MetadataFeatures metadata_features(const ReviewRecord& record, const UserStats& stats,
                                   int max_age_days, double epsilon) {
  if (record.age_days > max_age_days)
    throw std::invalid_argument("metadata_features: age exceeds max_age_days");
  MetadataFeatures out;
  out.rating = record.rating;
  if (record.user_id) {
    auto it = stats.find(*record.user_id);
    if (it != stats.end()) out.rating_norm = it->second.mean_rating - record.rating;
  }
  out.age_norm = negativity_age(record.age_days, max_age_days, epsilon).value;
  return out;
}

FeatureSet parse_feature_set(const std::string& name) {
  if (name == "len") return FeatureSet::Len;
  if (name == "nos") return FeatureSet::NoS;
  if (name == "asl") return FeatureSet::Asl;
  if (name == "poqs") return FeatureSet::PoQS;
  if (name == "structural") return FeatureSet::Structural;
  if (name == "ugr") return FeatureSet::Ugr;
  if (name == "syn") return FeatureSet::Syn;
  if (name == "rating") return FeatureSet::Rating;
  if (name == "rating-norm") return FeatureSet::RatingNorm;
  if (name == "age") return FeatureSet::Age;
  if (name == "all") return FeatureSet::All;
  throw std::invalid_argument("unknown feature set: " + name);
}

const char* feature_set_name(FeatureSet set) {
  switch (set) {
    case FeatureSet::Len: return "len";
    case FeatureSet::NoS: return "nos";
    case FeatureSet::Asl: return "asl";
    case FeatureSet::PoQS: return "poqs";
    case FeatureSet::Structural: return "structural";
    case FeatureSet::Ugr: return "ugr";
    case FeatureSet::Syn: return "syn";
    case FeatureSet::Rating: return "rating";
    case FeatureSet::RatingNorm: return "rating-norm";
    case FeatureSet::Age: return "age";
    case FeatureSet::All: return "all";
  }
  return "?";
}

namespace {

bool uses_ugr(FeatureSet s) { return s == FeatureSet::Ugr || s == FeatureSet::All; }
bool uses_user_stats(FeatureSet s) {
  return s == FeatureSet::RatingNorm || s == FeatureSet::All;
}

}  // namespace

FeatureExtractor::FeatureExtractor(FeatureSet selector, int max_vocab, double epsilon)
    : selector_(selector), max_vocab_(max_vocab), epsilon_(epsilon) {
  if (max_vocab < 1) throw std::invalid_argument("max_vocab must be >= 1");
}

void FeatureExtractor::fit(const std::vector<ReviewRecord>& records,
                           int max_age_override) {
  if (records.empty()) throw std::invalid_argument("FeatureExtractor: empty fit corpus");

  max_age_ = max_age_override >= 0 ? max_age_override : max_age_days(records);

  if (uses_ugr(selector_)) {
    std::vector<std::vector<std::string>> corpus;
    corpus.reserve(records.size());
    for (const ReviewRecord& rec : records) corpus.push_back(tokenize(rec.text));
    tfidf_ = tfidf_fit(corpus, max_vocab_);
  }

  if (uses_user_stats(selector_)) {
    user_stats_ = fit_user_stats(records);
    has_user_stats_ = !user_stats_.empty();
    if (selector_ == FeatureSet::RatingNorm && !has_user_stats_)
      throw std::invalid_argument(
          "rating-norm requested but the corpus carries no user ids");
  }

  build_schema();
  fitted_ = true;
}

FeatureExtractor FeatureExtractor::restore(FeatureSet selector, int max_vocab,
                                           double epsilon, int max_age,
                                           TfidfModel tfidf, UserStats stats,
                                           bool has_user_stats) {
  FeatureExtractor fx(selector, max_vocab, epsilon);
  fx.max_age_ = max_age;
  fx.tfidf_ = std::move(tfidf);
  fx.user_stats_ = std::move(stats);
  fx.has_user_stats_ = has_user_stats;
  fx.build_schema();
  fx.fitted_ = true;
  return fx;
}

void FeatureExtractor::build_schema() {
  schema_.clear();
  auto add_structural = [&]() {
    schema_.insert(schema_.end(), {"len", "nos", "asl", "poqs"});
  };
  auto add_ugr = [&]() {
    for (const std::string& t : tfidf_.terms) schema_.push_back("ugr:" + t);
  };
  auto add_syn = [&]() {
    schema_.insert(schema_.end(), {"syn_noun", "syn_adj", "syn_adv"});
  };
  switch (selector_) {
    case FeatureSet::Len: schema_ = {"len"}; break;
    case FeatureSet::NoS: schema_ = {"nos"}; break;
    case FeatureSet::Asl: schema_ = {"asl"}; break;
    case FeatureSet::PoQS: schema_ = {"poqs"}; break;
    case FeatureSet::Structural: add_structural(); break;
    case FeatureSet::Ugr: add_ugr(); break;
    case FeatureSet::Syn: add_syn(); break;
    case FeatureSet::Rating: schema_ = {"rating"}; break;
    case FeatureSet::RatingNorm: schema_ = {"rating_norm"}; break;
    case FeatureSet::Age: schema_ = {"age_norm"}; break;
    case FeatureSet::All:
      add_structural();
      add_ugr();
      add_syn();
      schema_.push_back("rating");
      if (has_user_stats_) schema_.push_back("rating_norm");
      schema_.push_back("age_norm");
      break;
  }
}

Matrix FeatureExtractor::transform(const std::vector<ReviewRecord>& records) const {
  if (!fitted_) throw std::logic_error("FeatureExtractor::transform before fit");
  Matrix out(records.size(), schema_.size());

  for (std::size_t i = 0; i < records.size(); ++i) {
    const ReviewRecord& rec = records[i];
    std::size_t col = 0;
    auto put = [&](double v) { out.at(i, col++) = v; };

    auto put_structural = [&]() {
      const StructuralFeatures s = structural_features(rec.text);
      put(s.len);
      put(s.nos);
      put(s.asl);
      put(s.poqs);
    };
    auto put_ugr = [&]() {
      const SparseVec v = tfidf_transform(tfidf_, tokenize(rec.text));
      for (std::size_t k = 0; k < v.indices.size(); ++k)
        out.at(i, col + static_cast<std::size_t>(v.indices[k])) = v.values[k];
      col += tfidf_.size();
    };
    auto put_syn = [&]() {
      const SyntacticFeatures s = syntactic_features(rec.text);
      put(s.pct_noun);
      put(s.pct_adj);
      put(s.pct_adv);
    };
    auto age_norm = [&]() {
      // Records older than the pinned maximum clamp instead of erroring.
      const int age = std::min(rec.age_days, max_age_);
      return negativity_age(age, max_age_, epsilon_).value;
    };
    auto rating_norm = [&]() {
      if (rec.user_id) {
        auto it = user_stats_.find(*rec.user_id);
        if (it != user_stats_.end()) return it->second.mean_rating - rec.rating;
      }
      return 0.0;  // unknown user: no deviation from their (unknown) mean
    };

    switch (selector_) {
      case FeatureSet::Len: put(structural_features(rec.text).len); break;
      case FeatureSet::NoS: put(structural_features(rec.text).nos); break;
      case FeatureSet::Asl: put(structural_features(rec.text).asl); break;
      case FeatureSet::PoQS: put(structural_features(rec.text).poqs); break;
      case FeatureSet::Structural: put_structural(); break;
      case FeatureSet::Ugr: put_ugr(); break;
      case FeatureSet::Syn: put_syn(); break;
      case FeatureSet::Rating: put(rec.rating); break;
      case FeatureSet::RatingNorm: put(rating_norm()); break;
      case FeatureSet::Age: put(age_norm()); break;
      case FeatureSet::All:
        put_structural();
        put_ugr();
        put_syn();
        put(rec.rating);
        if (has_user_stats_) put(rating_norm());
        put(age_norm());
        break;
    }
  }
  return out;
}

}  // namespace pucorrect
