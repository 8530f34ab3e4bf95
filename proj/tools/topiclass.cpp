#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "topiclass/corpus.hpp"
#include "topiclass/evaluation.hpp"
#include "topiclass/features.hpp"
#include "topiclass/hierarchy.hpp"
#include "topiclass/neighbor.hpp"
#include "topiclass/seeds.hpp"
#include "topiclass/svm.hpp"
#include "topiclass/topicmodel.hpp"

namespace {

using namespace topiclass;

// Input validation happens before any artifact is written.
void require_exists(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw std::invalid_argument("input file does not exist: " + path);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
}

std::vector<std::string> load_label_file(const std::filesystem::path& path,
                                         const std::vector<std::string>& ids) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open labels file: " + path.string());
  std::map<std::string, std::string> by_id;
  std::string id, label;
  while (in >> id >> label) by_id[id] = label;
  std::vector<std::string> labels;
  for (const std::string& doc : ids) {
    auto it = by_id.find(doc);
    if (it == by_id.end()) throw std::invalid_argument("no label for document '" + doc + "'");
    labels.push_back(it->second);
  }
  return labels;
}

ConfusionMatrix load_confusion_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open confusion matrix file: " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  ConfusionMatrix cm;
  std::string name;
  while (hs >> name) cm.classes.push_back(name);
  if (cm.classes.empty()) throw std::invalid_argument("confusion matrix header has no classes");
  cm.counts.assign(cm.classes.size(), std::vector<long>(cm.classes.size(), 0));
  for (auto& row : cm.counts)
    for (long& v : row)
      if (!(in >> v)) throw std::invalid_argument("truncated confusion matrix file");
  return cm;
}

std::size_t env_workers() {
  if (const char* env = std::getenv("TOPICLASS_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  return 1;
}

struct CommonEvalOptions {
  std::string input;
  EvalConfig config;

  void attach(CLI::App* cmd) {
    // The config file carries a section named after this command; fallthrough
    // lets --config appear after the subcommand name.
    cmd->configurable();
    cmd->fallthrough();
    cmd->add_option("--input", input, "corpus file (JSON lines)")->required();
    cmd->add_option("--folds", config.folds, "cross-validation folds");
    cmd->add_option("--inner-folds", config.inner_folds, "inner folds for the hierarchy CM");
    cmd->add_option("--seed", config.master_seed, "master seed");
    cmd->add_option("--topics", config.lda.n_topics, "LDA topic count");
    cmd->add_option("--epochs", config.lda.epochs, "LDA Gibbs sweeps");
    cmd->add_option("--alpha", config.lda.alpha, "LDA document-topic prior (default 50/K)");
    cmd->add_option("--beta", config.lda.beta, "LDA topic-word prior");
    cmd->add_option("--burn-in", config.lda.burn_in, "burn-in fraction");
    cmd->add_option("--sample-lag", config.lda.sample_lag, "sweeps between samples");
    cmd->add_option("--min-df", config.min_df, "minimum document frequency");
    cmd->add_option("--top-k", config.top_k, "IG feature budget for BOW");
    cmd->add_option("--C", config.svm.C, "SVM box constraint");
    cmd->add_option("--degree", config.svm.kernel.degree, "polynomial kernel degree");
    cmd->add_option("--coef0", config.svm.kernel.coef0, "polynomial kernel constant");
    cmd->add_option("--tol", config.svm.tol, "SMO KKT tolerance");
    cmd->add_flag("--per-fold", config.per_fold_lda, "train LDA per fold with fold-in");
    cmd->add_option("--wp", config.weights.parent, "parent page weight");
    cmd->add_option("--wc", config.weights.child, "child page weight");
    cmd->add_option("--ws", config.weights.sibling, "sibling page weight");
  }
};

int run(int argc, char** argv) {
  CLI::App app{"topiclass: web page classification with topic features, "
               "neighbor integration, and a confusion-driven class hierarchy"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override file values");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  SynthSpec spec;
  std::string synth_out;
  synth->add_option("--classes", spec.n_classes, "class count");
  synth->add_option("--pages", spec.pages_per_class, "pages per class");
  synth->add_option("--words-per-class", spec.words_per_class, "planted block size");
  synth->add_option("--pair-overlap", spec.pair_overlap, "words shared by paired classes");
  synth->add_option("--shared-words", spec.shared_words, "background vocabulary size");
  synth->add_option("--doc-length", spec.doc_length, "tokens per page");
  synth->add_option("--text-noise", spec.text_noise, "off-topic token fraction");
  synth->add_option("--links-per-page", spec.links_per_page, "links per page");
  synth->add_option("--link-noise", spec.link_noise, "cross-class link fraction");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--out", synth_out, "output corpus file")->required();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load and validate a corpus");
  std::string ingest_input;
  bool ingest_stats = false;
  ingest->add_option("--input", ingest_input, "corpus file")->required();
  ingest->add_flag("--stats", ingest_stats, "print corpus statistics");

  // bow
  auto* bow = app.add_subcommand("bow", "build the IG-selected BOW matrix");
  std::string bow_input, bow_out;
  std::size_t bow_min_df = 3, bow_top_k = 2000;
  bow->add_option("--input", bow_input, "corpus file")->required();
  bow->add_option("--min-df", bow_min_df, "minimum document frequency");
  bow->add_option("--top-k", bow_top_k, "IG feature budget");
  bow->add_option("--out", bow_out, "output matrix file")->required();

  // lda
  auto* lda_cmd = app.add_subcommand("lda", "train the LDA topic model");
  std::string lda_input, lda_out;
  std::size_t lda_min_df = 3;
  LdaConfig lda_config;
  lda_cmd->add_option("--input", lda_input, "corpus file")->required();
  lda_cmd->add_option("--topics", lda_config.n_topics, "topic count");
  lda_cmd->add_option("--epochs", lda_config.epochs, "Gibbs sweeps");
  lda_cmd->add_option("--alpha", lda_config.alpha, "document-topic prior (default 50/K)");
  lda_cmd->add_option("--beta", lda_config.beta, "topic-word prior");
  lda_cmd->add_option("--burn-in", lda_config.burn_in, "burn-in fraction");
  lda_cmd->add_option("--sample-lag", lda_config.sample_lag, "sweeps between samples");
  lda_cmd->add_option("--seed", lda_config.seed, "sampler seed");
  lda_cmd->add_option("--min-df", lda_min_df, "minimum document frequency");
  lda_cmd->add_option("--out", lda_out, "output directory")->required();

  // integrate
  auto* integrate = app.add_subcommand("integrate", "combine neighbor topic evidence");
  std::string int_input, int_theta, int_out;
  NeighborWeights int_w;
  integrate->add_option("--input", int_input, "corpus file")->required();
  integrate->add_option("--theta", int_theta, "document-topic matrix file")->required();
  integrate->add_option("--wp", int_w.parent, "parent page weight");
  integrate->add_option("--wc", int_w.child, "child page weight");
  integrate->add_option("--ws", int_w.sibling, "sibling page weight");
  integrate->add_option("--out", int_out, "output matrix file")->required();

  // train-flat
  auto* train_flat = app.add_subcommand("train-flat", "train the one-vs-one SVM");
  std::string tf_features, tf_labels, tf_out;
  SvmParams tf_params;
  train_flat->add_option("--features", tf_features, "feature matrix file")->required();
  train_flat->add_option("--labels", tf_labels, "labels file (id category per line)")->required();
  train_flat->add_option("--C", tf_params.C, "box constraint");
  train_flat->add_option("--degree", tf_params.kernel.degree, "kernel degree");
  train_flat->add_option("--coef0", tf_params.kernel.coef0, "kernel constant");
  train_flat->add_option("--tol", tf_params.tol, "KKT tolerance");
  train_flat->add_option("--out", tf_out, "output model file")->required();

  // build-hierarchy
  auto* build_h = app.add_subcommand("build-hierarchy", "derive the class dendrogram");
  std::string bh_cm, bh_out;
  build_h->add_option("--cm", bh_cm, "confusion matrix file")->required();
  build_h->add_option("--out", bh_out, "output tree file")->required();

  // train-hsvm
  auto* train_h = app.add_subcommand("train-hsvm", "train the hierarchical SVM");
  std::string th_tree, th_features, th_labels, th_out;
  SvmParams th_params;
  train_h->add_option("--tree", th_tree, "dendrogram file")->required();
  train_h->add_option("--features", th_features, "feature matrix file")->required();
  train_h->add_option("--labels", th_labels, "labels file")->required();
  train_h->add_option("--C", th_params.C, "box constraint");
  train_h->add_option("--degree", th_params.kernel.degree, "kernel degree");
  train_h->add_option("--coef0", th_params.kernel.coef0, "kernel constant");
  train_h->add_option("--tol", th_params.tol, "KKT tolerance");
  train_h->add_option("--out", th_out, "output model file")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "cross-validated experiment");
  CommonEvalOptions eval_opts;
  std::string eval_approach = "topic_integrated", eval_model = "hsvm", eval_out;
  eval_opts.attach(evaluate);
  evaluate->add_option("--approach", eval_approach, "bow | topic_current | topic_integrated");
  evaluate->add_option("--model", eval_model, "svm | hsvm");
  evaluate->add_option("--out", eval_out, "report file (JSON)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "neighbor weight grid sweep");
  CommonEvalOptions sweep_opts;
  std::string sweep_model = "svm", sweep_out;
  double sweep_step = 0.1;
  sweep_opts.attach(sweep_cmd);
  sweep_cmd->add_option("--model", sweep_model, "svm | hsvm");
  sweep_cmd->add_option("--step", sweep_step, "grid step in (0, 1]");
  sweep_cmd->add_option("--out", sweep_out, "report file");

  CLI11_PARSE(app, argc, argv);

  if (*synth) {
    Corpus corpus = generate_synthetic_corpus(spec);
    save_corpus(corpus, synth_out);
    std::cout << "wrote " << corpus.size() << " pages, " << corpus.categories().size()
              << " classes to " << synth_out << '\n';
  } else if (*ingest) {
    require_exists(ingest_input);
    Corpus corpus = load_corpus(ingest_input);
    std::cout << "pages=" << corpus.size() << " categories=" << corpus.categories().size()
              << " dropped_links=" << corpus.dropped_link_count() << '\n';
    if (ingest_stats) {
      std::map<std::string, std::size_t> histogram;
      for (const WebPage& p : corpus.pages()) ++histogram[p.label];
      for (const auto& [label, count] : histogram)
        std::cout << "  " << label << ": " << count << '\n';
    }
  } else if (*bow) {
    require_exists(bow_input);
    Corpus corpus = load_corpus(bow_input);
    Vocabulary vocab = build_vocabulary(corpus, bow_min_df);
    Matrix tdm = build_term_doc_matrix(corpus, vocab);
    std::vector<std::size_t> labels;
    for (std::size_t d = 0; d < corpus.size(); ++d) labels.push_back(corpus.label_index(d));
    std::vector<double> scores = information_gain(tdm, labels, corpus.categories().size());
    std::size_t k = std::min(bow_top_k, vocab.size());
    auto [selected, projected] = select_top_k(scores, k, vocab, tdm);
    save_term_doc_matrix(projected, bow_out);
    std::string vocab_text, label_text;
    for (const std::string& t : selected.terms()) vocab_text += t + "\n";
    for (const WebPage& p : corpus.pages()) label_text += p.id + " " + p.label + "\n";
    write_file(bow_out + ".vocab", vocab_text);
    write_file(bow_out + ".labels", label_text);
    std::cout << "kept " << k << " of " << vocab.size() << " terms\n";
  } else if (*lda_cmd) {
    require_exists(lda_input);
    Corpus corpus = load_corpus(lda_input);
    Vocabulary vocab = build_vocabulary(corpus, lda_min_df);
    std::vector<std::vector<std::size_t>> ids;
    for (const WebPage& p : corpus.pages())
      ids.push_back(to_vocab_ids(tokenize(p.text), vocab));
    LdaResult result = train_lda(ids, vocab.size(), lda_config);
    std::filesystem::create_directories(lda_out);
    save_topic_model(result.model, lda_config,
                     std::filesystem::path(lda_out) / "model.txt");
    std::vector<std::string> doc_ids;
    for (const WebPage& p : corpus.pages()) doc_ids.push_back(p.id);
    save_theta(result.theta, doc_ids, std::filesystem::path(lda_out) / "theta.txt");
    std::string vocab_text;
    for (const std::string& t : vocab.terms()) vocab_text += t + "\n";
    write_file(std::filesystem::path(lda_out) / "vocab.txt", vocab_text);
    std::cout << "trained " << lda_config.n_topics << " topics over " << vocab.size()
              << " terms\n";
  } else if (*integrate) {
    require_exists(int_input);
    require_exists(int_theta);
    Corpus corpus = load_corpus(int_input);
    auto [theta, doc_ids] = load_theta(int_theta);
    if (doc_ids.size() != corpus.size())
      throw std::invalid_argument("theta file does not match the corpus");
    // Theta rows are keyed by id; align them with corpus page order.
    Matrix aligned(corpus.size(), theta.cols());
    for (std::size_t r = 0; r < doc_ids.size(); ++r) {
      std::size_t d = corpus.index_of(doc_ids[r]);
      for (std::size_t k = 0; k < theta.cols(); ++k) aligned(d, k) = theta(r, k);
    }
    Matrix idt = inp_integrate(aligned, build_neighbor_matrices(corpus, aligned), int_w);
    std::vector<std::string> out_ids;
    for (const WebPage& p : corpus.pages()) out_ids.push_back(p.id);
    save_theta(idt, out_ids, int_out);
    std::cout << "integrated " << idt.rows() << " pages\n";
  } else if (*train_flat) {
    require_exists(tf_features);
    require_exists(tf_labels);
    auto [features, doc_ids] = load_theta(tf_features);
    std::vector<std::string> labels = load_label_file(tf_labels, doc_ids);
    std::set<std::string> label_set(labels.begin(), labels.end());
    std::vector<std::string> classes(label_set.begin(), label_set.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < classes.size(); ++c) index[classes[c]] = c;
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    for (std::size_t d = 0; d < features.rows(); ++d) {
      auto row = features.row(d);
      x.emplace_back(row.begin(), row.end());
      y.push_back(index.at(labels[d]));
    }
    MulticlassSvmModel model = train_multiclass(x, y, classes, tf_params);
    save_multiclass_model(model, tf_out);
    std::cout << "trained " << model.pairs.size() << " pairwise models\n";
  } else if (*build_h) {
    require_exists(bh_cm);
    ConfusionMatrix cm = load_confusion_file(bh_cm);
    Dendrogram tree = build_dendrogram(compute_apcm(cm), cm.classes);
    save_dendrogram(tree, bh_out);
    std::cout << dendrogram_to_text(tree);
  } else if (*train_h) {
    require_exists(th_tree);
    require_exists(th_features);
    require_exists(th_labels);
    Dendrogram tree = load_dendrogram(th_tree);
    auto [features, doc_ids] = load_theta(th_features);
    std::vector<std::string> labels = load_label_file(th_labels, doc_ids);
    std::map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < tree.classes.size(); ++c) index[tree.classes[c]] = c;
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    for (std::size_t d = 0; d < features.rows(); ++d) {
      auto row = features.row(d);
      x.emplace_back(row.begin(), row.end());
      auto it = index.find(labels[d]);
      if (it == index.end())
        throw std::invalid_argument("label '" + labels[d] + "' is not a dendrogram leaf");
      y.push_back(it->second);
    }
    HsvmModel model = train_hsvm(tree, x, y, th_params);
    save_hsvm_model(model, th_out);
    std::cout << "trained " << model.node_models.size() << " node models\n";
  } else if (*evaluate) {
    Approach approach = approach_from_string(eval_approach);
    ModelKind model = model_kind_from_string(eval_model);
    require_exists(eval_opts.input);
    Corpus corpus = load_corpus(eval_opts.input);
    eval_opts.config.workers = env_workers();
    ExperimentResult result = cross_validate(corpus, approach, model, eval_opts.config);
    std::cout << experiment_report_text(result);
    if (!eval_out.empty())
      write_file(eval_out, experiment_report_json(result, eval_opts.config));
  } else if (*sweep_cmd) {
    ModelKind model = model_kind_from_string(sweep_model);
    require_exists(sweep_opts.input);
    Corpus corpus = load_corpus(sweep_opts.input);
    sweep_opts.config.workers = env_workers();
    SweepResult result = sweep_weights(corpus, model, sweep_step, sweep_opts.config);
    std::cout << sweep_report_text(result);
    if (!sweep_out.empty()) write_file(sweep_out, sweep_report_text(result));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
