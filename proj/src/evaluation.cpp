#include "topiclass/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "topiclass/features.hpp"
#include "topiclass/seeds.hpp"

namespace topiclass {

MetricsResult compute_metrics(const ConfusionMatrix& cm) {
  const std::size_t m = cm.counts.size();
  const long total = cm.total();
  if (total == 0) throw std::invalid_argument("confusion matrix is empty");

  MetricsResult r;
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);

  double precision_sum = 0.0, recall_sum = 0.0;
  std::size_t evaluated = 0;
  for (std::size_t c = 0; c < m; ++c) {
    long row_sum = 0, col_sum = 0;
    for (std::size_t j = 0; j < m; ++j) {
      row_sum += cm.counts[c][j];
      col_sum += cm.counts[j][c];
    }
    if (row_sum == 0) continue;  // class absent from the evaluated data
    const double precision =
        col_sum == 0 ? 0.0 : static_cast<double>(cm.counts[c][c]) / static_cast<double>(col_sum);
    const double recall = static_cast<double>(cm.counts[c][c]) / static_cast<double>(row_sum);
    precision_sum += precision;
    recall_sum += recall;
    ++evaluated;
  }
  r.macro_precision = precision_sum / static_cast<double>(evaluated);
  r.macro_recall = recall_sum / static_cast<double>(evaluated);
  const double pr = r.macro_precision + r.macro_recall;
  r.f1 = pr == 0.0 ? 0.0 : 2.0 * r.macro_precision * r.macro_recall / pr;
  return r;
}

FoldPlan stratified_folds(const std::vector<std::size_t>& labels, std::size_t k,
                          std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("fold count must be >= 2");
  if (k > labels.size()) throw std::invalid_argument("more folds than documents");

  std::size_t n_classes = 0;
  for (std::size_t l : labels) n_classes = std::max(n_classes, l + 1);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.fold_of.resize(labels.size());
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t d = 0; d < labels.size(); ++d)
      if (labels[d] == c) members.push_back(d);
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t t = 0; t < members.size(); ++t) plan.fold_of[members[t]] = t % k;
  }
  return plan;
}

std::string to_string(Approach a) {
  switch (a) {
    case Approach::bow: return "bow";
    case Approach::topic_current: return "topic_current";
    case Approach::topic_integrated: return "topic_integrated";
  }
  return "?";
}

std::string to_string(ModelKind m) {
  return m == ModelKind::svm ? "svm" : "hsvm";
}

Approach approach_from_string(const std::string& s) {
  if (s == "bow") return Approach::bow;
  if (s == "topic_current") return Approach::topic_current;
  if (s == "topic_integrated") return Approach::topic_integrated;
  throw std::invalid_argument("unknown approach '" + s + "'");
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "svm") return ModelKind::svm;
  if (s == "hsvm") return ModelKind::hsvm;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

namespace {

std::vector<std::vector<std::string>> tokenize_corpus(const Corpus& corpus) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const WebPage& p : corpus.pages()) docs.push_back(tokenize(p.text));
  return docs;
}

// Min-max column scaling fitted on the training rows.
struct ColumnScaler {
  std::vector<double> lo, hi;

  void fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return;
    lo.assign(rows[0].size(), std::numeric_limits<double>::infinity());
    hi.assign(rows[0].size(), -std::numeric_limits<double>::infinity());
    for (const auto& row : rows)
      for (std::size_t j = 0; j < row.size(); ++j) {
        lo[j] = std::min(lo[j], row[j]);
        hi[j] = std::max(hi[j], row[j]);
      }
  }
  void apply(std::vector<std::vector<double>>& rows) const {
    for (auto& row : rows)
      for (std::size_t j = 0; j < row.size(); ++j) {
        const double range = hi[j] - lo[j];
        row[j] = range == 0.0 ? 0.0 : (row[j] - lo[j]) / range;
      }
  }
};

struct FoldFeatures {
  std::vector<std::vector<double>> train_x;
  std::vector<std::size_t> train_y;
  std::vector<std::vector<double>> test_x;
};

FoldFeatures bow_fold_features(const std::vector<std::vector<std::string>>& docs,
                               const std::vector<std::size_t>& labels,
                               const std::vector<std::size_t>& train_idx,
                               const std::vector<std::size_t>& test_idx,
                               std::size_t n_classes, const EvalConfig& config) {
  std::vector<std::vector<std::string>> train_docs;
  std::vector<std::size_t> train_labels;
  for (std::size_t d : train_idx) {
    train_docs.push_back(docs[d]);
    train_labels.push_back(labels[d]);
  }
  Vocabulary vocab = build_vocabulary(train_docs, config.min_df);
  Matrix tdm = build_term_doc_matrix(train_docs, vocab);
  std::vector<double> scores = information_gain(tdm, train_labels, n_classes);
  const std::size_t k = std::min(config.top_k, vocab.size());
  auto [selected, projected] = select_top_k(scores, k, vocab, tdm);

  FoldFeatures f;
  f.train_y = std::move(train_labels);
  for (std::size_t i = 0; i < projected.rows(); ++i) {
    auto row = projected.row(i);
    f.train_x.emplace_back(row.begin(), row.end());
  }
  for (std::size_t d : test_idx) {
    std::vector<double> row(selected.size(), 0.0);
    for (const std::string& token : docs[d])
      if (selected.contains(token)) row[selected.index_of(token)] += 1.0;
    f.test_x.push_back(std::move(row));
  }
  if (config.scale_bow) {
    ColumnScaler scaler;
    scaler.fit(f.train_x);
    scaler.apply(f.train_x);
    scaler.apply(f.test_x);
  }
  return f;
}

FoldFeatures topic_fold_features(const Matrix& features_all,
                                 const std::vector<std::size_t>& labels,
                                 const std::vector<std::size_t>& train_idx,
                                 const std::vector<std::size_t>& test_idx) {
  FoldFeatures f;
  for (std::size_t d : train_idx) {
    auto row = features_all.row(d);
    f.train_x.emplace_back(row.begin(), row.end());
    f.train_y.push_back(labels[d]);
  }
  for (std::size_t d : test_idx) {
    auto row = features_all.row(d);
    f.test_x.emplace_back(row.begin(), row.end());
  }
  return f;
}

// Per-fold LDA: train on the fold's training documents, fold in the rest.
Matrix per_fold_theta(const Corpus& corpus,
                      const std::vector<std::vector<std::string>>& docs,
                      const std::vector<std::size_t>& train_idx,
                      const std::vector<std::size_t>& test_idx,
                      std::size_t fold, const EvalConfig& config) {
  std::vector<std::vector<std::string>> train_docs;
  for (std::size_t d : train_idx) train_docs.push_back(docs[d]);
  Vocabulary vocab = build_vocabulary(train_docs, config.min_df);
  std::vector<std::vector<std::size_t>> train_ids;
  for (std::size_t d : train_idx) train_ids.push_back(to_vocab_ids(docs[d], vocab));

  LdaConfig lda = config.lda;
  lda.seed = derive_seed(config.master_seed, "lda-fold-" + std::to_string(fold));
  LdaResult result = train_lda(train_ids, vocab.size(), lda);

  Matrix theta(corpus.size(), lda.n_topics);
  for (std::size_t t = 0; t < train_idx.size(); ++t)
    for (std::size_t k = 0; k < lda.n_topics; ++k)
      theta(train_idx[t], k) = result.theta(t, k);
  for (std::size_t d : test_idx) {
    std::vector<std::size_t> ids = to_vocab_ids(docs[d], vocab);
    std::vector<double> row = infer_topics(
        result.model, ids, config.infer_iterations,
        derive_seed(config.master_seed, "infer-fold-" + std::to_string(fold) + "-doc-" +
                                            std::to_string(d)));
    for (std::size_t k = 0; k < lda.n_topics; ++k) theta(d, k) = row[k];
  }
  return theta;
}

std::vector<std::string> predict_fold(const FoldFeatures& f, ModelKind model,
                                      const std::vector<std::string>& classes,
                                      std::size_t fold, const EvalConfig& config) {
  MulticlassSvmModel flat;
  if (model == ModelKind::svm)
    flat = train_multiclass(f.train_x, f.train_y, classes, config.svm);

  std::vector<std::string> predictions;
  if (model == ModelKind::svm) {
    for (const auto& x : f.test_x) predictions.push_back(predict_multiclass(flat, x));
    return predictions;
  }

  // HSVM: derive the hierarchy from an inner CV confusion matrix on the
  // training rows only, then train one SVM per dendrogram node.
  FoldPlan inner = stratified_folds(
      f.train_y, config.inner_folds,
      derive_seed(config.master_seed, "inner-fold-" + std::to_string(fold)));
  std::vector<std::string> inner_actual, inner_pred;
  for (std::size_t g = 0; g < config.inner_folds; ++g) {
    std::vector<std::vector<double>> gx, tx;
    std::vector<std::size_t> gy;
    std::vector<std::size_t> t_rows;
    for (std::size_t i = 0; i < f.train_x.size(); ++i) {
      if (inner.fold_of[i] == g) {
        tx.push_back(f.train_x[i]);
        t_rows.push_back(i);
      } else {
        gx.push_back(f.train_x[i]);
        gy.push_back(f.train_y[i]);
      }
    }
    MulticlassSvmModel inner_model = train_multiclass(gx, gy, classes, config.svm);
    for (std::size_t t = 0; t < tx.size(); ++t) {
      inner_actual.push_back(classes[f.train_y[t_rows[t]]]);
      inner_pred.push_back(predict_multiclass(inner_model, tx[t]));
    }
  }
  ConfusionMatrix inner_cm = build_confusion_matrix(inner_actual, inner_pred, classes);
  Dendrogram tree = build_dendrogram(compute_apcm(inner_cm), classes);
  HsvmModel hsvm = train_hsvm(tree, f.train_x, f.train_y, config.svm);
  for (const auto& x : f.test_x)
    predictions.push_back(classes[predict_hsvm(hsvm, x)]);
  return predictions;
}

}  // namespace

TopicFeatureCache build_topic_cache(const Corpus& corpus, const EvalConfig& config) {
  auto docs = tokenize_corpus(corpus);
  Vocabulary vocab = build_vocabulary(docs, config.min_df);
  std::vector<std::vector<std::size_t>> ids;
  ids.reserve(docs.size());
  for (const auto& doc : docs) ids.push_back(to_vocab_ids(doc, vocab));

  LdaConfig lda = config.lda;
  lda.seed = derive_seed(config.master_seed, "lda");
  LdaResult result = train_lda(ids, vocab.size(), lda);

  TopicFeatureCache cache;
  cache.neighbors = build_neighbor_matrices(corpus, result.theta);
  cache.theta = std::move(result.theta);
  return cache;
}

ExperimentResult cross_validate(const Corpus& corpus, Approach approach,
                                ModelKind model, const EvalConfig& config) {
  return cross_validate_cached(corpus, approach, model, config, nullptr);
}

ExperimentResult cross_validate_cached(const Corpus& corpus, Approach approach,
                                       ModelKind model, const EvalConfig& config,
                                       const TopicFeatureCache* cache) {
  config.weights.validate();
  const std::vector<std::string>& classes = corpus.categories();
  std::vector<std::size_t> labels;
  labels.reserve(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) labels.push_back(corpus.label_index(d));

  auto docs = tokenize_corpus(corpus);
  FoldPlan plan = stratified_folds(labels, config.folds,
                                   derive_seed(config.master_seed, "fold-plan"));

  // Shared-LDA topic features are computed once over the whole corpus.
  Matrix features_all;
  TopicFeatureCache local_cache;
  if (approach != Approach::bow && !config.per_fold_lda) {
    if (cache == nullptr) {
      local_cache = build_topic_cache(corpus, config);
      cache = &local_cache;
    }
    features_all = (approach == Approach::topic_current)
                       ? cache->theta
                       : inp_integrate(cache->theta, cache->neighbors, config.weights);
  }

  ExperimentResult result;
  result.approach = approach;
  result.model = model;
  result.weights = config.weights;
  result.master_seed = config.master_seed;
  result.pooled.classes = classes;
  result.pooled.counts.assign(classes.size(), std::vector<long>(classes.size(), 0));

  for (std::size_t fold = 0; fold < config.folds; ++fold) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t d = 0; d < corpus.size(); ++d)
      (plan.fold_of[d] == fold ? test_idx : train_idx).push_back(d);

    FoldFeatures f;
    if (approach == Approach::bow) {
      f = bow_fold_features(docs, labels, train_idx, test_idx, classes.size(), config);
    } else if (config.per_fold_lda) {
      Matrix theta = per_fold_theta(corpus, docs, train_idx, test_idx, fold, config);
      Matrix fold_features =
          (approach == Approach::topic_current)
              ? theta
              : inp_integrate(theta, build_neighbor_matrices(corpus, theta), config.weights);
      f = topic_fold_features(fold_features, labels, train_idx, test_idx);
    } else {
      f = topic_fold_features(features_all, labels, train_idx, test_idx);
    }

    std::vector<std::string> predictions = predict_fold(f, model, classes, fold, config);
    std::vector<std::string> actual;
    for (std::size_t d : test_idx) actual.push_back(classes[labels[d]]);
    ConfusionMatrix fold_cm = build_confusion_matrix(actual, predictions, classes);
    result.per_fold.push_back(compute_metrics(fold_cm));
    for (std::size_t a = 0; a < classes.size(); ++a)
      for (std::size_t p = 0; p < classes.size(); ++p)
        result.pooled.counts[a][p] += fold_cm.counts[a][p];
  }
  result.metrics = compute_metrics(result.pooled);
  return result;
}

SweepResult sweep_weights(const Corpus& corpus, ModelKind model, double step,
                          const EvalConfig& config) {
  if (step <= 0.0 || step > 1.0) throw std::invalid_argument("step must be in (0, 1]");

  std::vector<double> grid;
  for (int i = 0; i * step <= 1.0 + 1e-12; ++i) grid.push_back(std::min(i * step, 1.0));

  std::vector<NeighborWeights> triples;
  for (double wp : grid)
    for (double wc : grid)
      for (double ws : grid) triples.push_back({wp, wc, ws});

  TopicFeatureCache cache;
  const TopicFeatureCache* cache_ptr = nullptr;
  if (!config.per_fold_lda) {
    cache = build_topic_cache(corpus, config);
    cache_ptr = &cache;
  }

  auto evaluate_triple = [&](const NeighborWeights& w) {
    EvalConfig c = config;
    c.weights = w;
    return cross_validate_cached(corpus, Approach::topic_integrated, model, c, cache_ptr);
  };

  SweepResult sweep;
  sweep.rows.resize(triples.size());
  const std::size_t workers = std::max<std::size_t>(1, config.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < triples.size(); ++i)
      sweep.rows[i] = {triples[i], evaluate_triple(triples[i]).metrics};
  } else {
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w]() {
        for (std::size_t i = w; i < triples.size(); i += workers)
          sweep.rows[i] = {triples[i], evaluate_triple(triples[i]).metrics};
      }));
    }
    for (auto& fut : futures) fut.get();
  }

  for (std::size_t i = 1; i < sweep.rows.size(); ++i)
    if (sweep.rows[i].metrics.f1 > sweep.rows[sweep.best_index].metrics.f1)
      sweep.best_index = i;
  return sweep;
}

std::string experiment_report_text(const ExperimentResult& result) {
  std::ostringstream out;
  out << "approach=" << to_string(result.approach) << " model=" << to_string(result.model)
      << " wp=" << result.weights.parent << " wc=" << result.weights.child
      << " ws=" << result.weights.sibling << " seed=" << result.master_seed << '\n';
  out << "metrics (precision/recall macro-averaged):\n";
  out << "  accuracy=" << result.metrics.accuracy
      << " precision=" << result.metrics.macro_precision
      << " recall=" << result.metrics.macro_recall << " f1=" << result.metrics.f1 << '\n';
  out << "pooled confusion matrix (rows=actual, cols=predicted):\n";
  for (std::size_t a = 0; a < result.pooled.classes.size(); ++a) {
    out << "  " << result.pooled.classes[a] << ':';
    for (long v : result.pooled.counts[a]) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

std::string experiment_report_json(const ExperimentResult& result, const EvalConfig& config) {
  nlohmann::ordered_json j;
  j["format"] = "topiclass-report";
  j["version"] = 1;
  j["averaging"] = "macro";
  j["approach"] = to_string(result.approach);
  j["model"] = to_string(result.model);
  j["weights"] = {{"parent", result.weights.parent},
                  {"child", result.weights.child},
                  {"sibling", result.weights.sibling}};
  j["config"] = {{"folds", config.folds},
                 {"inner_folds", config.inner_folds},
                 {"master_seed", config.master_seed},
                 {"min_df", config.min_df},
                 {"top_k", config.top_k},
                 {"scale_bow", config.scale_bow},
                 {"per_fold_lda", config.per_fold_lda},
                 {"infer_iterations", config.infer_iterations},
                 {"lda",
                  {{"n_topics", config.lda.n_topics},
                   {"epochs", config.lda.epochs},
                   {"alpha", config.lda.resolved_alpha()},
                   {"beta", config.lda.beta},
                   {"burn_in", config.lda.burn_in},
                   {"sample_lag", config.lda.sample_lag}}},
                 {"svm",
                  {{"C", config.svm.C},
                   {"degree", config.svm.kernel.degree},
                   {"coef0", config.svm.kernel.coef0},
                   {"tol", config.svm.tol}}}};
  j["classes"] = result.pooled.classes;
  j["confusion_matrix"] = result.pooled.counts;
  auto metrics_json = [](const MetricsResult& m) {
    return nlohmann::ordered_json{{"accuracy", m.accuracy},
                                  {"precision", m.macro_precision},
                                  {"recall", m.macro_recall},
                                  {"f1", m.f1}};
  };
  j["metrics"] = metrics_json(result.metrics);
  nlohmann::ordered_json folds = nlohmann::ordered_json::array();
  for (const MetricsResult& m : result.per_fold) folds.push_back(metrics_json(m));
  j["per_fold"] = folds;
  return j.dump(2) + "\n";
}

std::string sweep_report_text(const SweepResult& sweep) {
  std::ostringstream out;
  out << "wp wc ws accuracy precision recall f1   (precision/recall macro-averaged)\n";
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const SweepRow& r = sweep.rows[i];
    out << r.weights.parent << ' ' << r.weights.child << ' ' << r.weights.sibling << ' '
        << r.metrics.accuracy << ' ' << r.metrics.macro_precision << ' '
        << r.metrics.macro_recall << ' ' << r.metrics.f1;
    if (i == sweep.best_index) out << "  <- best";
    out << '\n';
  }
  return out.str();
}

}  // namespace topiclass
