#include "topiclass/topicmodel.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace topiclass {

void LdaConfig::validate() const {
  if (n_topics < 1) throw std::invalid_argument("n_topics must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  // negative alpha selects the 50/K default; zero is invalid
  if (alpha == 0.0)
    throw std::invalid_argument("alpha must be positive (or negative for the default)");
  if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
  if (burn_in < 0.0 || burn_in >= 1.0) throw std::invalid_argument("burn_in must be in [0,1)");
  if (sample_lag < 1) throw std::invalid_argument("sample_lag must be >= 1");
}

bool counts_consistent(const GibbsState& s,
                       const std::vector<std::vector<std::size_t>>& docs) {
  if (s.z.size() != docs.size()) return false;
  const std::size_t K = s.n_topics, V = s.vocab_size;
  std::vector<int> dt(docs.size() * K, 0), tw(K * V, 0), tt(K, 0);
  std::size_t assigned = 0, tokens = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (s.z[d].size() != docs[d].size()) return false;
    tokens += docs[d].size();
    for (std::size_t n = 0; n < docs[d].size(); ++n) {
      int k = s.z[d][n];
      if (k < 0 || static_cast<std::size_t>(k) >= K) return false;
      ++dt[d * K + k];
      ++tw[static_cast<std::size_t>(k) * V + docs[d][n]];
      ++tt[k];
      ++assigned;
    }
  }
  return assigned == tokens && dt == s.doc_topic && tw == s.topic_word && tt == s.topic_total;
}

double joint_log_likelihood(const GibbsState& s, double alpha, double beta) {
  const std::size_t M = s.z.size(), K = s.n_topics, V = s.vocab_size;
  double ll = 0.0;
  for (std::size_t d = 0; d < M; ++d) {
    int nd = 0;
    for (std::size_t k = 0; k < K; ++k) nd += s.doc_topic[d * K + k];
    ll += std::lgamma(K * alpha) - K * std::lgamma(alpha) - std::lgamma(nd + K * alpha);
    for (std::size_t k = 0; k < K; ++k) ll += std::lgamma(s.doc_topic[d * K + k] + alpha);
  }
  for (std::size_t k = 0; k < K; ++k) {
    ll += std::lgamma(V * beta) - V * std::lgamma(beta) - std::lgamma(s.topic_total[k] + V * beta);
    for (std::size_t w = 0; w < V; ++w) ll += std::lgamma(s.topic_word[k * V + w] + beta);
  }
  return ll;
}

namespace {

// Samples an index proportional to the (unnormalized) weights.
std::size_t sample_discrete(const std::vector<double>& weight, double u01) {
  double total = 0.0;
  for (double w : weight) total += w;
  double target = u01 * total;
  double cum = 0.0;
  for (std::size_t k = 0; k + 1 < weight.size(); ++k) {
    cum += weight[k];
    if (target < cum) return k;
  }
  return weight.size() - 1;
}

}  // namespace

LdaResult train_lda(const std::vector<std::vector<std::size_t>>& docs,
                    std::size_t vocab_size, const LdaConfig& config,
                    const SweepHook& hook) {
  config.validate();
  if (docs.empty()) throw std::invalid_argument("empty document set");
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be >= 1");
  for (const auto& doc : docs)
    for (std::size_t w : doc)
      if (w >= vocab_size) throw std::invalid_argument("token id outside vocabulary");

  const std::size_t M = docs.size(), K = config.n_topics, V = vocab_size;
  const double alpha = config.resolved_alpha(), beta = config.beta;

  GibbsState s;
  s.n_topics = K;
  s.vocab_size = V;
  s.z.resize(M);
  s.doc_topic.assign(M * K, 0);
  s.topic_word.assign(K * V, 0);
  s.topic_total.assign(K, 0);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> topic_pick(0, K - 1);

  for (std::size_t d = 0; d < M; ++d) {
    s.z[d].resize(docs[d].size());
    for (std::size_t n = 0; n < docs[d].size(); ++n) {
      std::size_t k = topic_pick(rng);
      s.z[d][n] = static_cast<int>(k);
      ++s.doc_topic[d * K + k];
      ++s.topic_word[k * V + docs[d][n]];
      ++s.topic_total[k];
    }
  }

  Matrix theta_sum(M, K), phi_sum(K, V);
  std::size_t n_samples = 0;
  const std::size_t burn = static_cast<std::size_t>(config.burn_in * config.epochs);

  auto take_sample = [&]() {
    for (std::size_t d = 0; d < M; ++d) {
      double nd = static_cast<double>(docs[d].size());
      for (std::size_t k = 0; k < K; ++k)
        theta_sum(d, k) += (s.doc_topic[d * K + k] + alpha) / (nd + K * alpha);
    }
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t w = 0; w < V; ++w)
        phi_sum(k, w) += (s.topic_word[k * V + w] + beta) / (s.topic_total[k] + V * beta);
    ++n_samples;
  };

  std::vector<double> weight(K);
  for (std::size_t sweep = 1; sweep <= config.epochs; ++sweep) {
    for (std::size_t d = 0; d < M; ++d) {
      for (std::size_t n = 0; n < docs[d].size(); ++n) {
        const std::size_t w = docs[d][n];
        const std::size_t old_k = static_cast<std::size_t>(s.z[d][n]);
        --s.doc_topic[d * K + old_k];
        --s.topic_word[old_k * V + w];
        --s.topic_total[old_k];
        for (std::size_t k = 0; k < K; ++k)
          weight[k] = (s.doc_topic[d * K + k] + alpha) *
                      (s.topic_word[k * V + w] + beta) / (s.topic_total[k] + V * beta);
        const std::size_t new_k = sample_discrete(weight, unit(rng));
        s.z[d][n] = static_cast<int>(new_k);
        ++s.doc_topic[d * K + new_k];
        ++s.topic_word[new_k * V + w];
        ++s.topic_total[new_k];
      }
    }
    if (hook) hook(sweep, s);
    if (sweep > burn && (sweep - burn) % config.sample_lag == 0) take_sample();
  }
  if (n_samples == 0) take_sample();  // schedule yielded nothing; use final state

  LdaResult result;
  result.model.alpha = alpha;
  result.model.beta = beta;
  result.model.phi = Matrix(K, V);
  result.theta = Matrix(M, K);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t w = 0; w < V; ++w)
      result.model.phi(k, w) = phi_sum(k, w) / n_samples;
  for (std::size_t d = 0; d < M; ++d)
    for (std::size_t k = 0; k < K; ++k) result.theta(d, k) = theta_sum(d, k) / n_samples;
  return result;
}

std::vector<double> infer_topics(const TopicModel& model,
                                 const std::vector<std::size_t>& tokens,
                                 std::size_t iterations, std::uint64_t seed) {
  const std::size_t K = model.n_topics(), V = model.vocab_size();
  if (K < 1) throw std::invalid_argument("model has no topics");
  std::vector<double> theta(K, 1.0 / static_cast<double>(K));
  if (tokens.empty()) return theta;
  for (std::size_t w : tokens)
    if (w >= V) throw std::invalid_argument("token id outside model vocabulary");
  if (iterations < 1) iterations = 1;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> topic_pick(0, K - 1);

  const double alpha = model.alpha;
  std::vector<int> z(tokens.size());
  std::vector<int> doc_topic(K, 0);
  for (std::size_t n = 0; n < tokens.size(); ++n) {
    std::size_t k = topic_pick(rng);
    z[n] = static_cast<int>(k);
    ++doc_topic[k];
  }

  std::vector<double> theta_sum(K, 0.0);
  std::size_t n_samples = 0;
  const std::size_t burn = iterations / 2;
  std::vector<double> weight(K);
  for (std::size_t sweep = 1; sweep <= iterations; ++sweep) {
    for (std::size_t n = 0; n < tokens.size(); ++n) {
      const std::size_t w = tokens[n];
      --doc_topic[static_cast<std::size_t>(z[n])];
      for (std::size_t k = 0; k < K; ++k)
        weight[k] = (doc_topic[k] + alpha) * model.phi(k, w);
      const std::size_t new_k = sample_discrete(weight, unit(rng));
      z[n] = static_cast<int>(new_k);
      ++doc_topic[new_k];
    }
    if (sweep > burn) {
      const double nd = static_cast<double>(tokens.size());
      for (std::size_t k = 0; k < K; ++k)
        theta_sum[k] += (doc_topic[k] + alpha) / (nd + K * alpha);
      ++n_samples;
    }
  }
  for (std::size_t k = 0; k < K; ++k) theta[k] = theta_sum[k] / n_samples;
  return theta;
}

std::vector<std::size_t> to_vocab_ids(const std::vector<std::string>& tokens,
                                      const Vocabulary& vocab) {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens)
    if (vocab.contains(t)) ids.push_back(vocab.index_of(t));
  return ids;
}

void save_topic_model(const TopicModel& model, const LdaConfig& config,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path.string());
  out.precision(17);
  out << "topiclass-lda 1\n";
  out << model.n_topics() << ' ' << model.vocab_size() << ' ' << model.alpha << ' '
      << model.beta << ' ' << config.seed << ' ' << config.epochs << '\n';
  for (std::size_t k = 0; k < model.n_topics(); ++k) {
    for (std::size_t w = 0; w < model.vocab_size(); ++w) {
      if (w) out << ' ';
      out << model.phi(k, w);
    }
    out << '\n';
  }
}

TopicModel load_topic_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  std::string magic;
  int version;
  in >> magic >> version;
  if (magic != "topiclass-lda" || version != 1)
    throw std::runtime_error("unrecognized model file format");
  std::size_t K, V, seed, epochs;
  TopicModel model;
  in >> K >> V >> model.alpha >> model.beta >> seed >> epochs;
  model.phi = Matrix(K, V);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t w = 0; w < V; ++w)
      if (!(in >> model.phi(k, w))) throw std::runtime_error("truncated model file");
  return model;
}

void save_theta(const Matrix& theta, const std::vector<std::string>& doc_ids,
                const std::filesystem::path& path) {
  if (theta.rows() != doc_ids.size())
    throw std::invalid_argument("theta rows do not align with document ids");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write theta file: " + path.string());
  out.precision(17);
  out << "topiclass-theta 1\n";
  out << theta.rows() << ' ' << theta.cols() << '\n';
  for (std::size_t d = 0; d < theta.rows(); ++d) {
    out << doc_ids[d];
    for (std::size_t k = 0; k < theta.cols(); ++k) out << ' ' << theta(d, k);
    out << '\n';
  }
}

std::pair<Matrix, std::vector<std::string>> load_theta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open theta file: " + path.string());
  std::string magic;
  int version;
  in >> magic >> version;
  if (magic != "topiclass-theta" || version != 1)
    throw std::runtime_error("unrecognized theta file format");
  std::size_t M, K;
  in >> M >> K;
  Matrix theta(M, K);
  std::vector<std::string> ids(M);
  for (std::size_t d = 0; d < M; ++d) {
    in >> ids[d];
    for (std::size_t k = 0; k < K; ++k)
      if (!(in >> theta(d, k))) throw std::runtime_error("truncated theta file");
  }
  return {std::move(theta), std::move(ids)};
}

}  // namespace topiclass
