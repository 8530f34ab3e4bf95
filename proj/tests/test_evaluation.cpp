#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "topiclass/evaluation.hpp"

using namespace topiclass;

namespace {

ConfusionMatrix make_cm(std::vector<std::vector<long>> counts) {
  ConfusionMatrix cm;
  for (std::size_t c = 0; c < counts.size(); ++c) cm.classes.push_back(std::string(1, 'A' + c));
  cm.counts = std::move(counts);
  return cm;
}

// Straight-line reimplementation of the metric definitions, kept independent
// of the library code path.
MetricsResult metrics_oracle(const ConfusionMatrix& cm) {
  const std::size_t m = cm.counts.size();
  long total = 0, correct = 0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t p = 0; p < m; ++p) {
      total += cm.counts[a][p];
      if (a == p) correct += cm.counts[a][p];
    }
  MetricsResult r;
  r.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  double psum = 0.0, rsum = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < m; ++c) {
    long row = 0, col = 0;
    for (std::size_t j = 0; j < m; ++j) {
      row += cm.counts[c][j];
      col += cm.counts[j][c];
    }
    if (row == 0) continue;
    psum += col == 0 ? 0.0 : static_cast<double>(cm.counts[c][c]) / static_cast<double>(col);
    rsum += static_cast<double>(cm.counts[c][c]) / static_cast<double>(row);
    ++n;
  }
  r.macro_precision = psum / static_cast<double>(n);
  r.macro_recall = rsum / static_cast<double>(n);
  r.f1 = r.macro_precision + r.macro_recall == 0.0
             ? 0.0
             : 2.0 * r.macro_precision * r.macro_recall / (r.macro_precision + r.macro_recall);
  return r;
}

}  // namespace

TEST_CASE("metrics: perfect diagonal scores 1.0 everywhere") {
  MetricsResult m = compute_metrics(make_cm({{4, 0}, {0, 6}}));
  CHECK(m.accuracy == doctest::Approx(1.0));
  CHECK(m.macro_precision == doctest::Approx(1.0));
  CHECK(m.macro_recall == doctest::Approx(1.0));
  CHECK(m.f1 == doctest::Approx(1.0));
}

TEST_CASE("metrics: worked two-class example") {
  MetricsResult m = compute_metrics(make_cm({{8, 2}, {1, 9}}));
  CHECK(m.accuracy == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(m.macro_precision == doctest::Approx((8.0 / 9.0 + 9.0 / 11.0) / 2.0).epsilon(1e-12));
  CHECK(m.macro_recall == doctest::Approx(0.85).epsilon(1e-12));
  const double p = (8.0 / 9.0 + 9.0 / 11.0) / 2.0;
  CHECK(m.f1 == doctest::Approx(2.0 * p * 0.85 / (p + 0.85)).epsilon(1e-12));
}

TEST_CASE("metrics: classifier that always predicts the first class") {
  MetricsResult m = compute_metrics(make_cm({{5, 0}, {5, 0}}));
  CHECK(m.accuracy == doctest::Approx(0.5));
  // precision: A = 5/10, B = 0 (empty column)
  CHECK(m.macro_precision == doctest::Approx(0.25));
  CHECK(m.macro_recall == doctest::Approx(0.5));
  CHECK(m.f1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("metrics: classes with no actual documents are excluded from the macros") {
  MetricsResult m = compute_metrics(make_cm({{3, 0, 0}, {0, 0, 0}, {0, 0, 3}}));
  CHECK(m.accuracy == doctest::Approx(1.0));
  CHECK(m.macro_precision == doctest::Approx(1.0));
  CHECK(m.macro_recall == doctest::Approx(1.0));
}

TEST_CASE("metrics: empty matrix is rejected") {
  CHECK_THROWS_AS(compute_metrics(make_cm({{0, 0}, {0, 0}})), std::invalid_argument);
}

TEST_CASE("metrics are invariant under class reordering") {
  ConfusionMatrix cm = make_cm({{8, 2, 1}, {0, 12, 3}, {2, 2, 20}});
  MetricsResult base = compute_metrics(cm);
  std::vector<std::size_t> perm = {2, 0, 1};
  ConfusionMatrix shuffled;
  shuffled.classes = {"C", "A", "B"};
  shuffled.counts.assign(3, std::vector<long>(3));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t p = 0; p < 3; ++p) shuffled.counts[a][p] = cm.counts[perm[a]][perm[p]];
  MetricsResult got = compute_metrics(shuffled);
  CHECK(got.accuracy == doctest::Approx(base.accuracy).epsilon(1e-12));
  CHECK(got.macro_precision == doctest::Approx(base.macro_precision).epsilon(1e-12));
  CHECK(got.macro_recall == doctest::Approx(base.macro_recall).epsilon(1e-12));
  CHECK(got.f1 == doctest::Approx(base.f1).epsilon(1e-12));
}

TEST_CASE("metrics match the independent oracle on random matrices") {
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<long> count(0, 50);
  std::uniform_int_distribution<std::size_t> size(2, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = size(rng);
    std::vector<std::vector<long>> counts(m, std::vector<long>(m));
    long total = 0;
    for (auto& row : counts)
      for (long& v : row) {
        v = count(rng);
        total += v;
      }
    if (total == 0) counts[0][0] = 1;
    ConfusionMatrix cm = make_cm(counts);
    MetricsResult got = compute_metrics(cm);
    MetricsResult want = metrics_oracle(cm);
    CHECK(std::fabs(got.accuracy - want.accuracy) <= 1e-12);
    CHECK(std::fabs(got.macro_precision - want.macro_precision) <= 1e-12);
    CHECK(std::fabs(got.macro_recall - want.macro_recall) <= 1e-12);
    CHECK(std::fabs(got.f1 - want.f1) <= 1e-12);
  }
}

TEST_CASE("stratified folds: balanced classes split evenly") {
  std::vector<std::size_t> labels;
  for (int i = 0; i < 10; ++i) {
    labels.push_back(0);
    labels.push_back(1);
  }
  FoldPlan plan = stratified_folds(labels, 10, 7);
  std::map<std::pair<std::size_t, std::size_t>, int> counts;  // (fold, class) -> n
  for (std::size_t d = 0; d < labels.size(); ++d) ++counts[{plan.fold_of[d], labels[d]}];
  for (std::size_t f = 0; f < 10; ++f)
    for (std::size_t c = 0; c < 2; ++c) CHECK(counts[{f, c}] == 1);
}

TEST_CASE("stratified folds: a 3-document class lands in 3 distinct folds") {
  std::vector<std::size_t> labels(30, 0);
  labels.push_back(1);
  labels.push_back(1);
  labels.push_back(1);
  FoldPlan plan = stratified_folds(labels, 10, 11);
  std::vector<int> per_fold(10, 0);
  for (std::size_t d = 30; d < 33; ++d) ++per_fold[plan.fold_of[d]];
  for (int n : per_fold) CHECK(n <= 1);
  CHECK(std::accumulate(per_fold.begin(), per_fold.end(), 0) == 3);
  // the majority class differs by at most one across folds
  std::vector<int> major(10, 0);
  for (std::size_t d = 0; d < 30; ++d) ++major[plan.fold_of[d]];
  CHECK(*std::max_element(major.begin(), major.end()) -
            *std::min_element(major.begin(), major.end()) <=
        1);
}

TEST_CASE("stratified folds are deterministic per seed") {
  std::vector<std::size_t> labels;
  for (int i = 0; i < 40; ++i) labels.push_back(i % 3);
  CHECK(stratified_folds(labels, 5, 9).fold_of == stratified_folds(labels, 5, 9).fold_of);
  CHECK(stratified_folds(labels, 5, 9).fold_of != stratified_folds(labels, 5, 10).fold_of);
}

TEST_CASE("invalid fold counts are rejected") {
  std::vector<std::size_t> labels = {0, 1, 0, 1};
  CHECK_THROWS_AS(stratified_folds(labels, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(stratified_folds(labels, 5, 1), std::invalid_argument);
}

TEST_CASE("approach and model-kind names round-trip") {
  for (auto a : {Approach::bow, Approach::topic_current, Approach::topic_integrated})
    CHECK(approach_from_string(to_string(a)) == a);
  for (auto m : {ModelKind::svm, ModelKind::hsvm})
    CHECK(model_kind_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(approach_from_string("nope"), std::invalid_argument);
  CHECK_THROWS_AS(model_kind_from_string("nope"), std::invalid_argument);
}

namespace {

Corpus eval_corpus() {
  return generate_synthetic_corpus({.n_classes = 3,
                                    .pages_per_class = 20,
                                    .words_per_class = 30,
                                    .shared_words = 20,
                                    .doc_length = 25,
                                    .text_noise = 0.1,
                                    .seed = 13});
}

EvalConfig fast_config() {
  EvalConfig c;
  c.folds = 5;
  c.inner_folds = 3;
  c.min_df = 2;
  c.lda.n_topics = 3;
  c.lda.epochs = 120;
  c.svm.C = 10.0;
  return c;
}

}  // namespace

TEST_CASE("cross-validated BOW with a flat SVM separates an easy corpus") {
  ExperimentResult r = cross_validate(eval_corpus(), Approach::bow, ModelKind::svm, fast_config());
  CHECK(r.metrics.accuracy >= 0.95);
  CHECK(r.pooled.total() == 60);
  CHECK(r.per_fold.size() == 5);
}

TEST_CASE("cross-validation is deterministic for a fixed master seed") {
  Corpus c = eval_corpus();
  EvalConfig config = fast_config();
  ExperimentResult a = cross_validate(c, Approach::topic_current, ModelKind::svm, config);
  ExperimentResult b = cross_validate(c, Approach::topic_current, ModelKind::svm, config);
  CHECK(a.pooled.counts == b.pooled.counts);
  CHECK(a.metrics.f1 == b.metrics.f1);
}

TEST_CASE("HSVM cross-validation runs end to end on an easy corpus") {
  ExperimentResult r =
      cross_validate(eval_corpus(), Approach::topic_current, ModelKind::hsvm, fast_config());
  CHECK(r.pooled.total() == 60);
  CHECK(r.metrics.accuracy >= 0.8);
}

TEST_CASE("weight sweep: step 0.5 yields 27 grid points in lexicographic order") {
  Corpus c = eval_corpus();
  EvalConfig config = fast_config();
  SweepResult sweep = sweep_weights(c, ModelKind::svm, 0.5, config);
  REQUIRE(sweep.rows.size() == 27);
  CHECK(sweep.rows[0].weights.parent == 0.0);
  CHECK(sweep.rows[0].weights.child == 0.0);
  CHECK(sweep.rows[0].weights.sibling == 0.0);
  CHECK(sweep.rows[1].weights.sibling == 0.5);
  CHECK(sweep.rows[3].weights.child == 0.5);
  CHECK(sweep.rows[9].weights.parent == 0.5);
  CHECK(sweep.rows[26].weights.parent == 1.0);
  CHECK(sweep.best_index < 27);

  // the all-zero triple is exactly the current-page topic approach
  ExperimentResult current =
      cross_validate(c, Approach::topic_current, ModelKind::svm, config);
  CHECK(sweep.rows[0].metrics.accuracy == current.metrics.accuracy);
  CHECK(sweep.rows[0].metrics.f1 == current.metrics.f1);
}

TEST_CASE("sweep results do not depend on the worker count") {
  Corpus c = eval_corpus();
  EvalConfig config = fast_config();
  SweepResult serial = sweep_weights(c, ModelKind::svm, 1.0, config);
  config.workers = 3;
  SweepResult parallel = sweep_weights(c, ModelKind::svm, 1.0, config);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i)
    CHECK(serial.rows[i].metrics.f1 == parallel.rows[i].metrics.f1);
  CHECK(serial.best_index == parallel.best_index);
}

TEST_CASE("invalid sweep steps are rejected") {
  CHECK_THROWS_AS(sweep_weights(eval_corpus(), ModelKind::svm, 0.0, fast_config()),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_weights(eval_corpus(), ModelKind::svm, 1.5, fast_config()),
                  std::invalid_argument);
}

TEST_CASE("reports carry the configuration and metrics") {
  Corpus c = eval_corpus();
  EvalConfig config = fast_config();
  ExperimentResult r = cross_validate(c, Approach::bow, ModelKind::svm, config);
  std::string text = experiment_report_text(r);
  CHECK(text.find("approach=bow") != std::string::npos);
  CHECK(text.find("macro-averaged") != std::string::npos);
  std::string json = experiment_report_json(r, config);
  CHECK(json.find("\"format\": \"topiclass-report\"") != std::string::npos);
  CHECK(json.find("\"averaging\": \"macro\"") != std::string::npos);
  CHECK(json.find("\"accuracy\"") != std::string::npos);
  // repeated renders are byte-identical
  CHECK(json == experiment_report_json(r, config));
}
