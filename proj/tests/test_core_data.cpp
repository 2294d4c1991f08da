#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "pucorrect/common.hpp"
#include "pucorrect/core_data.hpp"
#include "test_support.hpp"

using namespace pucorrect;

namespace {

std::vector<ReviewRecord> records_with_votes(const std::vector<int>& votes) {
  std::vector<ReviewRecord> out;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    ReviewRecord rec;
    rec.id = "r" + std::to_string(i);
    rec.text = "some review text.";
    rec.rating = 4.0;
    rec.age_days = static_cast<int>(i);
    rec.helpful_votes = votes[i];
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

TEST_CASE("jsonl ingestion keeps parseable records in file order") {
  const std::string path = test_support::write_temp(
      "reviews.jsonl",
      R"({"id":"a","user_id":"u1","text":"Nice place.","rating":5,"age_days":10,"helpful_votes":2})"
      "\n"
      R"({"id":"b","user_id":null,"text":"Meh.","rating":2,"age_days":3,"helpful_votes":0})"
      "\n"
      R"({"id":"c","text":"Fine.","rating":3.5,"age_days":200,"helpful_votes":1})"
      "\n");
  const LoadResult result = load_reviews(path, Format::Jsonl);
  REQUIRE(result.records.size() == 3);
  CHECK(result.skipped == 0);
  CHECK(result.records[0].id == "a");
  CHECK(result.records[1].id == "b");
  CHECK(result.records[2].id == "c");
  CHECK(result.records[0].user_id.has_value());
  CHECK_FALSE(result.records[1].user_id.has_value());
  CHECK_FALSE(result.records[2].user_id.has_value());
  CHECK(result.records[2].rating == doctest::Approx(3.5));
}

TEST_CASE("malformed jsonl lines are skipped with a tally") {
  const std::string path = test_support::write_temp(
      "reviews_bad.jsonl",
      R"({"id":"a","text":"ok.","rating":5,"age_days":1,"helpful_votes":0})"
      "\n"
      R"({"id":"b","rating":5,"age_days":1,"helpful_votes":0})"
      "\n"  // missing text
      "not json at all\n"
      R"({"id":"c","text":"ok.","rating":9,"age_days":1,"helpful_votes":0})"
      "\n");  // rating out of range
  const LoadResult result = load_reviews(path, Format::Jsonl);
  CHECK(result.records.size() == 1);
  CHECK(result.skipped == 3);
}

TEST_CASE("unreadable file is fatal") {
  CHECK_THROWS(load_reviews("/no/such/file.jsonl", Format::Jsonl));
}

TEST_CASE("csv ingestion handles quoted text and missing users") {
  const std::string path = test_support::write_temp(
      "reviews.csv",
      "id,user_id,text,rating,age_days,helpful_votes\n"
      "a,u1,\"Great, loved it!\",5,10,2\n"
      "b,,\"Quote \"\"inside\"\" here\",2,3,0\n"
      "c,u2,plain text,3,7,notanumber\n");
  const LoadResult result = load_reviews(path, Format::Csv);
  REQUIRE(result.records.size() == 2);
  CHECK(result.skipped == 1);
  CHECK(result.records[0].text == "Great, loved it!");
  CHECK(result.records[1].text == "Quote \"inside\" here");
  CHECK_FALSE(result.records[1].user_id.has_value());
}

TEST_CASE("threshold labelling") {
  const Dataset ds = apply_threshold(records_with_votes({0, 1, 3}), 1);
  CHECK(ds.labels[0] == LabelState::Unlabelled);
  CHECK(ds.labels[1] == LabelState::Positive);
  CHECK(ds.labels[2] == LabelState::Positive);
  CHECK(ds.n_positive == 2);
  CHECK(ds.n_unlabelled == 1);

  const Dataset none = apply_threshold(records_with_votes({0, 0}), 1);
  CHECK(none.n_positive == 0);
  CHECK(none.n_unlabelled == 2);

  const Dataset below = apply_threshold(records_with_votes({2}), 3);
  CHECK(below.n_positive == 0);

  CHECK_THROWS(apply_threshold({}, 1));
  CHECK_THROWS(apply_threshold(records_with_votes({1}), 0));
}

TEST_CASE("threshold labelling is idempotent") {
  const Dataset once = apply_threshold(records_with_votes({0, 1, 2, 0, 5}), 2);
  const Dataset twice = apply_threshold(once.records, 2);
  CHECK(once.labels == twice.labels);
  CHECK(once.n_positive == twice.n_positive);
}

TEST_CASE("stratified folds: sizes and positive counts balance") {
  // 10 instances, 4 positive.
  const Dataset ds = apply_threshold(records_with_votes({1, 1, 1, 1, 0, 0, 0, 0, 0, 0}), 1);
  const FoldSplit split = split_folds(ds, 5, 7);
  int total_positive = 0;
  for (int f = 0; f < 5; ++f) {
    const auto idx = split.test_indices(f);
    CHECK(idx.size() == 2);
    int pos = 0;
    for (std::size_t i : idx)
      if (ds.labels[i] == LabelState::Positive) ++pos;
    CHECK(pos <= 1);
    total_positive += pos;
  }
  CHECK(total_positive == 4);

  const FoldSplit again = split_folds(ds, 5, 7);
  CHECK(split.assignments == again.assignments);

  const FoldSplit other_seed = split_folds(ds, 5, 8);
  CHECK(other_seed.assignments.size() == split.assignments.size());
}

TEST_CASE("folds partition the dataset") {
  std::vector<int> votes(100, 0);
  for (int i = 0; i < 37; ++i) votes[i] = 1;
  const Dataset ds = apply_threshold(records_with_votes(votes), 1);
  const FoldSplit split = split_folds(ds, 5, 3);
  std::set<std::size_t> seen;
  for (int f = 0; f < 5; ++f) {
    const auto idx = split.test_indices(f);
    CHECK(idx.size() == 20);
    seen.insert(idx.begin(), idx.end());
    const auto train = split.train_indices(f);
    CHECK(train.size() == 80);
  }
  CHECK(seen.size() == 100);
  CHECK_THROWS(split_folds(apply_threshold(records_with_votes({1, 0}), 1), 3, 0));
  CHECK_THROWS(split_folds(ds, 1, 0));
}

TEST_CASE("downsampling balances the unlabelled majority") {
  std::vector<int> votes(50, 0);
  for (int i = 0; i < 10; ++i) votes[i] = 1;
  const Dataset ds = apply_threshold(records_with_votes(votes), 1);
  const DownsampleResult result = downsample_balance(ds, 11);
  CHECK_FALSE(result.already_balanced);
  CHECK(result.dataset.n_positive == 10);
  CHECK(result.dataset.n_unlabelled == 10);

  // Positives preserved exactly, output a subset of the input ids.
  std::set<std::string> input_ids;
  for (const auto& rec : ds.records) input_ids.insert(rec.id);
  int positives_kept = 0;
  for (std::size_t i = 0; i < result.dataset.size(); ++i) {
    CHECK(input_ids.count(result.dataset.records[i].id) == 1);
    if (result.dataset.labels[i] == LabelState::Positive) ++positives_kept;
  }
  CHECK(positives_kept == 10);

  const DownsampleResult same_seed = downsample_balance(ds, 11);
  REQUIRE(same_seed.dataset.size() == result.dataset.size());
  for (std::size_t i = 0; i < result.dataset.size(); ++i)
    CHECK(same_seed.dataset.records[i].id == result.dataset.records[i].id);
}

TEST_CASE("downsampling degenerate branches") {
  const Dataset balanced = apply_threshold(records_with_votes({1, 1, 0, 0}), 1);
  const DownsampleResult unchanged = downsample_balance(balanced, 0);
  CHECK_FALSE(unchanged.already_balanced);
  CHECK(unchanged.dataset.size() == 4);

  std::vector<int> votes{1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0};
  const Dataset majority_pos = apply_threshold(records_with_votes(votes), 1);
  const DownsampleResult warned = downsample_balance(majority_pos, 0);
  CHECK(warned.already_balanced);
  CHECK(warned.dataset.size() == 11);

  const Dataset no_pos = apply_threshold(records_with_votes({0, 0}), 1);
  CHECK_THROWS(downsample_balance(no_pos, 0));
}

TEST_CASE("summary line format") {
  CHECK(format_with_commas(1373587) == "1,373,587");
  CHECK(format_with_commas(45) == "45");
  CHECK(format_with_commas(1000) == "1,000");

  std::vector<int> votes(1250, 0);
  for (int i = 0; i < 565; ++i) votes[i] = 1;
  const Dataset ds = apply_threshold(records_with_votes(votes), 1);
  CHECK(dataset_summary("venues", ds) == "venues: 1,250 reviews, 45.20% helpful");
}

TEST_CASE("class priors are validated and complementary") {
  const ClassPriors priors(0.3);
  CHECK(priors.pi_plus == doctest::Approx(0.3));
  CHECK(priors.pi_minus == doctest::Approx(0.7));
  CHECK(priors.pi_plus + priors.pi_minus == doctest::Approx(1.0));
  CHECK_THROWS(ClassPriors(0.0));
  CHECK_THROWS(ClassPriors(1.0));
  CHECK_THROWS(ClassPriors(-0.2));
}

TEST_CASE("max age over records") {
  const auto recs = records_with_votes({0, 0, 0});
  CHECK(max_age_days(recs) == 2);
  CHECK(max_age_days({}) == 0);
}
