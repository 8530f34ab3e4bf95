#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topiclass/corpus.hpp"
#include "topiclass/hierarchy.hpp"
#include "topiclass/neighbor.hpp"
#include "topiclass/svm.hpp"
#include "topiclass/topicmodel.hpp"

namespace topiclass {

struct MetricsResult {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double f1 = 0.0;
};

// Accuracy = trace/total; per-class precision/recall with macro averaging
// (zero-column classes get precision 0, zero-row classes are excluded);
// F1 from the macro precision and recall.
MetricsResult compute_metrics(const ConfusionMatrix& cm);

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;  // per-document fold index
  std::uint64_t seed = 0;
};

// Per-class round-robin after a seeded shuffle; per-class counts across
// folds differ by at most one.
FoldPlan stratified_folds(const std::vector<std::size_t>& labels, std::size_t k,
                          std::uint64_t seed);

enum class Approach { bow, topic_current, topic_integrated };
enum class ModelKind { svm, hsvm };

std::string to_string(Approach a);
std::string to_string(ModelKind m);
Approach approach_from_string(const std::string& s);
ModelKind model_kind_from_string(const std::string& s);

struct EvalConfig {
  std::size_t folds = 10;
  std::size_t inner_folds = 5;  // confusion-matrix CV for the hierarchy
  std::uint64_t master_seed = 42;
  LdaConfig lda;
  NeighborWeights weights;
  SvmParams svm;
  std::size_t min_df = 3;
  std::size_t top_k = 2000;  // IG feature budget for BOW
  bool scale_bow = true;     // min-max scale BOW counts (topic features used as-is)
  bool per_fold_lda = false; // train LDA per training fold, fold-in test docs
  std::size_t infer_iterations = 200;  // fold-in sweeps
  std::size_t workers = 1;   // parallel grid points in sweeps
};

struct ExperimentResult {
  Approach approach = Approach::bow;
  ModelKind model = ModelKind::svm;
  NeighborWeights weights;
  ConfusionMatrix pooled;
  MetricsResult metrics;
  std::vector<MetricsResult> per_fold;
  std::uint64_t master_seed = 0;
};

// Shared-LDA artifacts reusable across weight triples.
struct TopicFeatureCache {
  Matrix theta;
  NeighborTopicMatrices neighbors;
};

TopicFeatureCache build_topic_cache(const Corpus& corpus, const EvalConfig& config);

ExperimentResult cross_validate(const Corpus& corpus, Approach approach,
                                ModelKind model, const EvalConfig& config);
ExperimentResult cross_validate_cached(const Corpus& corpus, Approach approach,
                                       ModelKind model, const EvalConfig& config,
                                       const TopicFeatureCache* cache);

struct SweepRow {
  NeighborWeights weights;
  MetricsResult metrics;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order: parent, child, sibling ascending
  std::size_t best_index = 0;  // argmax F1, earliest grid point on ties
};

// Evaluates cross_validate for TOPIC_INTEGRATED at every weight triple on
// the grid {0, step, 2*step, ... <= 1}.
SweepResult sweep_weights(const Corpus& corpus, ModelKind model, double step,
                          const EvalConfig& config);

std::string experiment_report_text(const ExperimentResult& result);
std::string experiment_report_json(const ExperimentResult& result, const EvalConfig& config);
std::string sweep_report_text(const SweepResult& sweep);

}  // namespace topiclass
