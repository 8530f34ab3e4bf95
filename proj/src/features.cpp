#include "topiclass/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace topiclass {

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
      "a",    "about", "above", "after", "again",  "all",   "also",  "am",
      "an",   "and",   "any",   "are",   "as",     "at",    "be",    "because",
      "been", "before", "being", "below", "between", "both", "but",  "by",
      "can",  "could", "did",   "do",    "does",   "doing", "down",  "during",
      "each", "few",   "for",   "from",  "further", "had",  "has",   "have",
      "having", "he",  "her",   "here",  "hers",   "him",   "his",   "how",
      "if",   "in",    "into",  "is",    "it",     "its",   "just",  "me",
      "more", "most",  "my",    "no",    "nor",    "not",   "now",   "of",
      "off",  "on",    "once",  "only",  "or",     "other", "our",   "out",
      "over", "own",   "same",  "she",   "should", "so",    "some",  "such",
      "than", "that",  "the",   "their", "them",   "then",  "there", "these",
      "they", "this",  "those", "through", "to",   "too",   "under", "until",
      "up",   "very",  "was",   "we",    "were",   "what",  "when",  "where",
      "which", "while", "who",  "whom",  "why",    "will",  "with",  "would",
      "you",  "your",  "yours"};
  return words;
}

namespace {

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> set(default_stopwords().begin(),
                                                   default_stopwords().end());
  return set;
}

bool pure_digits(const std::string& token) {
  return std::all_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, bool remove_stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&]() {
    if (current.size() >= 2 && !pure_digits(current) &&
        (!remove_stopwords || stopword_set().count(current) == 0))
      tokens.push_back(current);
    current.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c))
      current.push_back(static_cast<char>(std::tolower(c)));
    else
      flush();
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second)
      throw std::invalid_argument("duplicate vocabulary term '" + terms_[i] + "'");
  }
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            std::size_t min_df) {
  if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    std::set<std::string> uniq(doc.begin(), doc.end());
    for (const auto& t : uniq) ++df[t];
  }
  std::vector<std::string> terms;
  for (const auto& [term, count] : df)
    if (count >= min_df) terms.push_back(term);
  if (terms.empty()) throw std::runtime_error("empty vocabulary: all terms filtered");
  std::sort(terms.begin(), terms.end());
  return Vocabulary(std::move(terms));
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_df,
                            bool remove_stopwords) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const WebPage& p : corpus.pages()) docs.push_back(tokenize(p.text, remove_stopwords));
  return build_vocabulary(docs, min_df);
}

Matrix build_term_doc_matrix(const std::vector<std::vector<std::string>>& docs,
                             const Vocabulary& vocab) {
  if (vocab.size() == 0) throw std::invalid_argument("vocabulary is empty");
  Matrix m(docs.size(), vocab.size());
  for (std::size_t i = 0; i < docs.size(); ++i)
    for (const std::string& token : docs[i])
      if (vocab.contains(token)) m(i, vocab.index_of(token)) += 1.0;
  return m;
}

Matrix build_term_doc_matrix(const Corpus& corpus, const Vocabulary& vocab,
                             bool remove_stopwords) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const WebPage& p : corpus.pages()) docs.push_back(tokenize(p.text, remove_stopwords));
  return build_term_doc_matrix(docs, vocab);
}

namespace {

double entropy_bits(const std::vector<double>& counts) {
  double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

std::vector<double> information_gain(const Matrix& term_doc,
                                     const std::vector<std::size_t>& labels,
                                     std::size_t n_classes) {
  if (term_doc.rows() != labels.size())
    throw std::invalid_argument("matrix rows do not align with labels");
  const std::size_t n_docs = term_doc.rows();
  std::vector<double> class_counts(n_classes, 0.0);
  for (std::size_t l : labels) class_counts[l] += 1.0;
  const double h_class = entropy_bits(class_counts);

  std::vector<double> scores(term_doc.cols(), 0.0);
  std::vector<double> present(n_classes), absent(n_classes);
  for (std::size_t t = 0; t < term_doc.cols(); ++t) {
    std::fill(present.begin(), present.end(), 0.0);
    double n_present = 0.0;
    for (std::size_t d = 0; d < n_docs; ++d) {
      if (term_doc(d, t) > 0.0) {
        present[labels[d]] += 1.0;
        n_present += 1.0;
      }
    }
    for (std::size_t c = 0; c < n_classes; ++c) absent[c] = class_counts[c] - present[c];
    double p_present = n_present / static_cast<double>(n_docs);
    double ig = h_class - p_present * entropy_bits(present) -
                (1.0 - p_present) * entropy_bits(absent);
    scores[t] = std::max(ig, 0.0);  // clamp tiny negative rounding
  }
  return scores;
}

std::pair<Vocabulary, Matrix> select_top_k(const std::vector<double>& scores,
                                           std::size_t k, const Vocabulary& vocab,
                                           const Matrix& term_doc) {
  if (scores.size() != vocab.size() || term_doc.cols() != vocab.size())
    throw std::invalid_argument("scores/vocabulary/matrix size mismatch");
  if (k < 1 || k > vocab.size()) throw std::invalid_argument("k out of range");

  std::vector<std::size_t> order(vocab.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return vocab.term(a) < vocab.term(b);
  });
  order.resize(k);
  std::sort(order.begin(), order.end());  // retained terms stay lexicographic

  std::vector<std::string> kept;
  kept.reserve(k);
  for (std::size_t col : order) kept.push_back(vocab.term(col));
  Matrix projected(term_doc.rows(), k);
  for (std::size_t i = 0; i < term_doc.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) projected(i, j) = term_doc(i, order[j]);
  return {Vocabulary(std::move(kept)), std::move(projected)};
}

void save_term_doc_matrix(const Matrix& term_doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path.string());
  out << term_doc.rows() << ' ' << term_doc.cols() << '\n';
  for (std::size_t i = 0; i < term_doc.rows(); ++i)
    for (std::size_t j = 0; j < term_doc.cols(); ++j)
      if (term_doc(i, j) != 0.0)
        out << i << ' ' << j << ' ' << term_doc(i, j) << '\n';
}

Matrix load_term_doc_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path.string());
  std::size_t rows, cols;
  if (!(in >> rows >> cols)) throw std::runtime_error("malformed matrix header");
  Matrix m(rows, cols);
  std::size_t i, j;
  double v;
  while (in >> i >> j >> v) {
    if (i >= rows || j >= cols) throw std::runtime_error("matrix triplet out of range");
    m(i, j) = v;
  }
  return m;
}

}  // namespace topiclass
