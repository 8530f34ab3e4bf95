#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "topiclass/features.hpp"
#include "topiclass/matrix.hpp"

namespace topiclass {

struct LdaConfig {
  std::size_t n_topics = 200;
  std::size_t epochs = 2000;   // full Gibbs sweeps
  double alpha = -1.0;         // < 0 means the 50/K default
  double beta = 0.01;
  double burn_in = 0.5;        // fraction of epochs discarded before sampling
  std::size_t sample_lag = 10; // sweeps between retained samples
  std::uint64_t seed = 0;

  double resolved_alpha() const {
    return alpha > 0.0 ? alpha : 50.0 / static_cast<double>(n_topics);
  }
  void validate() const;
};

// Token-topic assignments with their running count tables.
struct GibbsState {
  std::size_t n_topics = 0;
  std::size_t vocab_size = 0;
  std::vector<std::vector<int>> z;     // per doc, per token
  std::vector<int> doc_topic;          // M x K, row-major
  std::vector<int> topic_word;         // K x V, row-major
  std::vector<int> topic_total;        // K
};

// True when the count tables are exact tallies of z over the given documents.
bool counts_consistent(const GibbsState& state,
                       const std::vector<std::vector<std::size_t>>& docs);

// Joint log-likelihood log p(w, z | alpha, beta) from the count tables.
double joint_log_likelihood(const GibbsState& state, double alpha, double beta);

struct TopicModel {
  Matrix phi;  // K x V, each row a word distribution
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t n_topics() const { return phi.rows(); }
  std::size_t vocab_size() const { return phi.cols(); }
};

struct LdaResult {
  TopicModel model;
  Matrix theta;  // M x K, each row a topic distribution
};

using SweepHook = std::function<void(std::size_t sweep, const GibbsState&)>;

// Collapsed Gibbs training. Documents are vocabulary-id sequences.
// phi and theta are averages over post-burn-in samples taken every
// sample_lag sweeps (the final state if the schedule yields none).
// Bit-identical for a fixed seed.
LdaResult train_lda(const std::vector<std::vector<std::size_t>>& docs,
                    std::size_t vocab_size, const LdaConfig& config,
                    const SweepHook& hook = {});

// Fold-in inference for one document with phi held fixed. Out-of-vocabulary
// handling is the caller's job: tokens must be valid vocabulary ids.
std::vector<double> infer_topics(const TopicModel& model,
                                 const std::vector<std::size_t>& tokens,
                                 std::size_t iterations, std::uint64_t seed);

// Maps token strings through the vocabulary, dropping unknown terms.
std::vector<std::size_t> to_vocab_ids(const std::vector<std::string>& tokens,
                                      const Vocabulary& vocab);

// Versioned persistence. The model file holds the header
// (K, V, alpha, beta, seed, epochs) followed by phi rows; theta is stored
// separately with one document id per row.
void save_topic_model(const TopicModel& model, const LdaConfig& config,
                      const std::filesystem::path& path);
TopicModel load_topic_model(const std::filesystem::path& path);
void save_theta(const Matrix& theta, const std::vector<std::string>& doc_ids,
                const std::filesystem::path& path);
std::pair<Matrix, std::vector<std::string>> load_theta(const std::filesystem::path& path);

}  // namespace topiclass
