#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pucorrect/features.hpp"

using namespace pucorrect;

namespace {

ReviewRecord make_record(std::string id, std::string text, double rating = 4.0,
                         int age = 10, std::optional<std::string> user = {}) {
  ReviewRecord rec;
  rec.id = std::move(id);
  rec.text = std::move(text);
  rec.rating = rating;
  rec.age_days = age;
  rec.user_id = std::move(user);
  return rec;
}

}  // namespace

TEST_CASE("structural features: hand-counted example") {
  const StructuralFeatures s = structural_features("Is this good? Yes. Very good value.");
  CHECK(s.len == doctest::Approx(7.0));
  CHECK(s.nos == doctest::Approx(3.0));
  CHECK(s.asl == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
  CHECK(s.poqs == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("structural features: empty text and trailing fragments") {
  const StructuralFeatures empty = structural_features("");
  CHECK(empty.len == 0.0);
  CHECK(empty.nos == 0.0);
  CHECK(empty.asl == 0.0);
  CHECK(empty.poqs == 0.0);

  const StructuralFeatures fragment = structural_features("great");
  CHECK(fragment.len == 1.0);
  CHECK(fragment.nos == 1.0);  // trailing fragment counts
  CHECK(fragment.asl == 1.0);
  CHECK(fragment.poqs == 0.0);

  const StructuralFeatures runs = structural_features("What?! Really?? ok");
  CHECK(runs.nos == 3.0);
  CHECK(runs.poqs == doctest::Approx(2.0 / 3.0));

  const StructuralFeatures dots = structural_features("...");
  CHECK(dots.nos == 0.0);
  CHECK(dots.len == 0.0);
}

TEST_CASE("structural invariants over assorted texts") {
  const std::vector<std::string> texts = {
      "One two three.",       "A? B? C? D?",  "no terminator here",
      "  spaced .  out ! ?",  "word",          "a. -. b.",
      "Multi sentence text. With, punctuation! And a question? yes.",
  };
  for (const std::string& t : texts) {
    const StructuralFeatures s = structural_features(t);
    CHECK(s.poqs >= 0.0);
    CHECK(s.poqs <= 1.0);
    CHECK(s.len >= 0.0);
    CHECK(s.nos >= 0.0);
    CHECK(s.asl >= 0.0);
    CHECK(std::abs(s.asl * s.nos - s.len) <= 1e-9 * std::max(1.0, s.len));
  }
}

TEST_CASE("tfidf fit: document frequencies and tie-broken vocabulary") {
  const std::vector<std::vector<std::string>> corpus = {{"a", "b", "a"}, {"b", "c"}};
  const TfidfModel model = tfidf_fit(corpus, 100);
  REQUIRE(model.size() == 3);
  CHECK(model.n_docs == 2);
  CHECK(model.doc_freq[model.vocabulary.at("a")] == 1);
  CHECK(model.doc_freq[model.vocabulary.at("b")] == 2);
  CHECK(model.doc_freq[model.vocabulary.at("c")] == 1);

  const TfidfModel capped = tfidf_fit(corpus, 2);
  REQUIRE(capped.size() == 2);
  CHECK(capped.terms[0] == "b");  // df desc
  CHECK(capped.terms[1] == "a");  // tie a/c broken lexicographically

  const TfidfModel with_empty = tfidf_fit({{}, {"x", "y"}}, 100);
  CHECK(with_empty.size() == 2);

  CHECK_THROWS(tfidf_fit({}, 100));
}

TEST_CASE("tfidf transform: hand-computed weights, exactly") {
  const std::vector<std::vector<std::string>> corpus = {{"a", "b", "a"}, {"b", "c"}};
  const TfidfModel model = tfidf_fit(corpus, 100);

  const SparseVec v = tfidf_transform(model, {"a", "b", "a"});
  const auto dense = v.to_dense(model.size());
  CHECK(dense[model.vocabulary.at("a")] == 1.0);  // pre-norm 2 ln 2, normalised out
  CHECK(dense[model.vocabulary.at("b")] == 0.0);  // df == n_docs -> idf 0

  const SparseVec oov = tfidf_transform(model, {"zz", "qq"});
  CHECK(oov.indices.empty());

  const SparseVec c_only = tfidf_transform(model, {"c"});
  CHECK(c_only.to_dense(model.size())[model.vocabulary.at("c")] == 1.0);

  // All-zero vector stays zero rather than being "normalised".
  const SparseVec b_only = tfidf_transform(model, {"b"});
  for (double x : b_only.to_dense(model.size())) CHECK(x == 0.0);
}

TEST_CASE("syntactic suffix heuristic") {
  const SyntacticFeatures adv = syntactic_features("quickly");
  CHECK(adv.pct_noun == 0.0);
  CHECK(adv.pct_adj == 0.0);
  CHECK(adv.pct_adv == doctest::Approx(1.0));

  const SyntacticFeatures empty = syntactic_features("");
  CHECK(empty.pct_noun == 0.0);
  CHECK(empty.pct_adv == 0.0);

  const SyntacticFeatures other = syntactic_features("the cat sat");
  CHECK(other.pct_noun == 0.0);
  CHECK(other.pct_adj == 0.0);
  CHECK(other.pct_adv == 0.0);

  const SyntacticFeatures mixed = syntactic_features("truly useful information");
  CHECK(mixed.pct_adv == doctest::Approx(1.0 / 3.0));
  CHECK(mixed.pct_adj == doctest::Approx(1.0 / 3.0));
  CHECK(mixed.pct_noun == doctest::Approx(1.0 / 3.0));

  // A custom tagger drops in without schema changes.
  const PosTagger all_nouns = [](const std::string&) { return CoarseTag::Noun; };
  CHECK(syntactic_features("x y", all_nouns).pct_noun == doctest::Approx(1.0));
}

TEST_CASE("metadata features") {
  UserStats stats;
  stats["u1"] = {4.5, 2};

  const MetadataFeatures with_user =
      metadata_features(make_record("r", "t", 4.0, 9, "u1"), stats, 99);
  CHECK(with_user.rating == doctest::Approx(4.0));
  REQUIRE(with_user.rating_norm.has_value());
  CHECK(*with_user.rating_norm == doctest::Approx(0.5));
  CHECK(with_user.age_norm == doctest::Approx(0.49892198580547814).epsilon(1e-12));

  const MetadataFeatures no_user =
      metadata_features(make_record("r", "t", 4.0, 9), stats, 99);
  CHECK_FALSE(no_user.rating_norm.has_value());

  CHECK_THROWS(metadata_features(make_record("r", "t", 4.0, 100), stats, 99));
}

TEST_CASE("user stats aggregate mean ratings") {
  std::vector<ReviewRecord> records = {
      make_record("a", "x", 5.0, 1, "u1"),
      make_record("b", "x", 4.0, 1, "u1"),
      make_record("c", "x", 2.0, 1, "u2"),
      make_record("d", "x", 3.0, 1),
  };
  const UserStats stats = fit_user_stats(records);
  REQUIRE(stats.size() == 2);
  CHECK(stats.at("u1").mean_rating == doctest::Approx(4.5));
  CHECK(stats.at("u1").review_count == 2);
  CHECK(stats.at("u2").review_count == 1);
}

TEST_CASE("assembled schema widths") {
  // Ten distinct tokens so the UGR block is exactly ten columns wide.
  std::vector<ReviewRecord> records = {
      make_record("a", "alpha beta gamma delta epsilon.", 4.0, 10, "u1"),
      make_record("b", "zeta eta theta iota kappa?", 3.0, 50, "u2"),
  };

  FeatureExtractor len_only(FeatureSet::Len);
  len_only.fit(records);
  CHECK(len_only.schema() == std::vector<std::string>{"len"});
  CHECK(len_only.transform(records).cols == 1);

  FeatureExtractor structural(FeatureSet::Structural);
  structural.fit(records);
  CHECK(structural.schema() ==
        std::vector<std::string>{"len", "nos", "asl", "poqs"});

  FeatureExtractor all(FeatureSet::All, 10);
  all.fit(records);
  CHECK(all.schema().size() == 4 + 10 + 3 + 3);  // with rating_norm
  const Matrix x = all.transform(records);
  CHECK(x.cols == 20);
  CHECK(x.rows == 2);

  CHECK_THROWS(parse_feature_set("everything"));
}

TEST_CASE("schema drops rating_norm when the corpus has no user ids") {
  std::vector<ReviewRecord> records = {
      make_record("a", "one two three."),
      make_record("b", "four five six."),
  };
  FeatureExtractor all(FeatureSet::All, 10);
  all.fit(records);
  for (const std::string& name : all.schema()) CHECK(name != "rating_norm");
  CHECK(all.schema().size() == 4 + all.tfidf().size() + 3 + 2);

  FeatureExtractor norm_only(FeatureSet::RatingNorm);
  CHECK_THROWS(norm_only.fit(records));
}

TEST_CASE("transform is deterministic and schema is stable across fits") {
  std::vector<ReviewRecord> records = {
      make_record("a", "Great value, hugely useful. Would buy again!", 5.0, 3, "u1"),
      make_record("b", "Is it worth it? Hardly.", 2.0, 80, "u2"),
      make_record("c", "Average product overall.", 3.0, 40, "u1"),
  };
  FeatureExtractor fx1(FeatureSet::All, 50);
  FeatureExtractor fx2(FeatureSet::All, 50);
  fx1.fit(records);
  fx2.fit(records);
  CHECK(fx1.schema() == fx2.schema());

  const Matrix a = fx1.transform(records);
  const Matrix b = fx1.transform(records);
  REQUIRE(a.data.size() == b.data.size());
  for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);

  // Inference-time record older than the fitted maximum: clamps, no throw.
  std::vector<ReviewRecord> older = {make_record("z", "ancient text.", 3.0, 10000)};
  CHECK_NOTHROW(fx1.transform(older));
}
