#include "pucorrect/core_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "pucorrect/common.hpp"

namespace pucorrect {

namespace {

using nlohmann::json;

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool parse_int(const std::string& s, int& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool validate(ReviewRecord& rec) {
  if (rec.id.empty()) return false;
  if (!(rec.rating >= 1.0 && rec.rating <= 5.0)) return false;
  if (rec.age_days < 0 || rec.helpful_votes < 0) return false;
  return true;
}

bool record_from_json(const std::string& line, ReviewRecord& rec) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return false;
  if (!j.contains("id") || !j["id"].is_string()) return false;
  if (!j.contains("text") || !j["text"].is_string()) return false;
  if (!j.contains("rating") || !j["rating"].is_number()) return false;
  if (!j.contains("age_days") || !j["age_days"].is_number_integer()) return false;
  if (!j.contains("helpful_votes") || !j["helpful_votes"].is_number_integer())
    return false;
  rec.id = j["id"].get<std::string>();
  rec.text = j["text"].get<std::string>();
  rec.rating = j["rating"].get<double>();
  rec.age_days = j["age_days"].get<int>();
  rec.helpful_votes = j["helpful_votes"].get<int>();
  rec.user_id.reset();
  if (j.contains("user_id") && j["user_id"].is_string()) {
    std::string uid = j["user_id"].get<std::string>();
    if (!uid.empty()) rec.user_id = std::move(uid);
  }
  return validate(rec);
}

// One CSV line -> fields. Handles quoted fields with doubled quotes and
// embedded commas; records are line-based (no embedded newlines).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

bool record_from_csv(const std::vector<std::string>& fields,
                     const std::unordered_map<std::string, std::size_t>& col,
                     ReviewRecord& rec) {
  auto field = [&](const char* name) -> const std::string* {
    auto it = col.find(name);
    if (it == col.end() || it->second >= fields.size()) return nullptr;
    return &fields[it->second];
  };
  const std::string* id = field("id");
  const std::string* text = field("text");
  const std::string* rating = field("rating");
  const std::string* age = field("age_days");
  const std::string* votes = field("helpful_votes");
  if (!id || !text || !rating || !age || !votes) return false;
  rec.id = *id;
  rec.text = *text;
  if (!parse_double(*rating, rec.rating)) return false;
  if (!parse_int(*age, rec.age_days)) return false;
  if (!parse_int(*votes, rec.helpful_votes)) return false;
  rec.user_id.reset();
  if (const std::string* uid = field("user_id"); uid && !uid->empty())
    rec.user_id = *uid;
  return validate(rec);
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.records.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    out.records.push_back(records[i]);
    out.labels.push_back(labels[i]);
  }
  out.recount();
  return out;
}

void Dataset::recount() {
  n_positive = 0;
  n_unlabelled = 0;
  for (LabelState s : labels)
    (s == LabelState::Positive ? n_positive : n_unlabelled) += 1;
}

ClassPriors::ClassPriors(double pi_plus_) : pi_plus(pi_plus_), pi_minus(1.0 - pi_plus_) {
  if (!(pi_plus > 0.0 && pi_plus < 1.0))
    throw std::invalid_argument("ClassPriors: pi_plus must lie in (0,1)");
}

Format parse_format(const std::string& name) {
  if (name == "jsonl") return Format::Jsonl;
  if (name == "csv") return Format::Csv;
  throw std::invalid_argument("unknown input format: " + name);
}

LoadResult load_reviews(const std::string& path, Format format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);

  LoadResult result;
  std::string line;

  if (format == Format::Jsonl) {
    while (std::getline(in, line)) {
      if (blank(line)) continue;
      ReviewRecord rec;
      if (record_from_json(line, rec))
        result.records.push_back(std::move(rec));
      else
        ++result.skipped;
    }
    return result;
  }

  // CSV: header row names the columns.
  if (!std::getline(in, line))
    throw std::runtime_error("csv file has no header row: " + path);
  std::unordered_map<std::string, std::size_t> col;
  {
    auto header = split_csv_line(line);
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  }
  for (const char* required : {"id", "text", "rating", "age_days", "helpful_votes"})
    if (!col.count(required))
      throw std::runtime_error(std::string("csv header misses column '") +
                               required + "': " + path);
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    ReviewRecord rec;
    if (record_from_csv(split_csv_line(line), col, rec))
      result.records.push_back(std::move(rec));
    else
      ++result.skipped;
  }
  return result;
}

Dataset apply_threshold(std::vector<ReviewRecord> records, int threshold) {
  if (records.empty()) throw std::invalid_argument("apply_threshold: empty dataset");
  if (threshold < 1) throw std::invalid_argument("apply_threshold: threshold must be >= 1");
  Dataset ds;
  ds.records = std::move(records);
  ds.labels.reserve(ds.records.size());
  for (const ReviewRecord& rec : ds.records)
    ds.labels.push_back(rec.helpful_votes >= threshold ? LabelState::Positive
                                                       : LabelState::Unlabelled);
  ds.recount();
  return ds;
}

std::vector<std::size_t> FoldSplit::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldSplit::train_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(i);
  return out;
}

FoldSplit split_folds(const Dataset& dataset, int k, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (k < 2) throw std::invalid_argument("split_folds: k must be >= 2");
  if (static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("split_folds: k exceeds dataset size");

  std::vector<std::size_t> positives;
  std::vector<std::size_t> unlabelled;
  for (std::size_t i = 0; i < n; ++i)
    (dataset.labels[i] == LabelState::Positive ? positives : unlabelled).push_back(i);

  std::mt19937_64 rng(seed);
  std::shuffle(positives.begin(), positives.end(), rng);
  std::shuffle(unlabelled.begin(), unlabelled.end(), rng);

  // Deal the shuffled positives, then the shuffled unlabelled, round-robin.
  // Keeping each stratum contiguous in the deal order bounds both the fold
  // size spread and the per-fold positive count spread by one.
  FoldSplit split;
  split.k = k;
  split.assignments.assign(n, 0);
  std::size_t next = 0;
  for (std::size_t i : positives) split.assignments[i] = static_cast<int>(next++ % k);
  for (std::size_t i : unlabelled) split.assignments[i] = static_cast<int>(next++ % k);
  return split;
}

DownsampleResult downsample_balance(const Dataset& train, std::uint64_t seed) {
  if (train.n_positive < 1)
    throw std::invalid_argument("downsample_balance: no positive instances");
  if (train.n_positive > train.n_unlabelled) return {train, true};
  if (train.n_positive == train.n_unlabelled) return {train, false};

  std::vector<std::size_t> unl;
  for (std::size_t i = 0; i < train.size(); ++i)
    if (train.labels[i] == LabelState::Unlabelled) unl.push_back(i);

  std::mt19937_64 rng(seed);
  std::shuffle(unl.begin(), unl.end(), rng);
  unl.resize(train.n_positive);
  std::sort(unl.begin(), unl.end());

  std::vector<std::size_t> keep;
  keep.reserve(2 * train.n_positive);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.labels[i] == LabelState::Positive) {
      keep.push_back(i);
    } else if (cursor < unl.size() && unl[cursor] == i) {
      keep.push_back(i);
      ++cursor;
    }
  }
  return {train.subset(keep), false};
}

std::string dataset_summary(const std::string& name, const Dataset& dataset) {
  const double pct =
      dataset.size() == 0
          ? 0.0
          : 100.0 * static_cast<double>(dataset.n_positive) / dataset.size();
  char pct_buf[32];
  std::snprintf(pct_buf, sizeof pct_buf, "%.2f", pct);
  return name + ": " + format_with_commas(static_cast<long long>(dataset.size())) +
         " reviews, " + pct_buf + "% helpful";
}

int max_age_days(const std::vector<ReviewRecord>& records) {
  int m = 0;
  for (const ReviewRecord& rec : records) m = std::max(m, rec.age_days);
  return m;
}

}  // namespace pucorrect
