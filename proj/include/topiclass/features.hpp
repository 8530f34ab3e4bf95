#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topiclass/corpus.hpp"
#include "topiclass/matrix.hpp"

namespace topiclass {

// Lowercases, splits on non-alphanumeric boundaries, drops tokens shorter
// than 2 characters, pure digits, and (optionally) stopwords.
std::vector<std::string> tokenize(std::string_view text, bool remove_stopwords = true);

const std::vector<std::string>& default_stopwords();

// Ordered term list with its inverse index map.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(std::size_t i) const { return terms_[i]; }
  bool contains(const std::string& term) const { return index_.count(term) > 0; }
  std::size_t index_of(const std::string& term) const { return index_.at(term); }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Terms appearing in at least min_df documents, sorted lexicographically.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            std::size_t min_df);
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_df,
                            bool remove_stopwords = true);

// M x k term-frequency matrix: cell (i, j) = count of vocab term j in doc i.
Matrix build_term_doc_matrix(const std::vector<std::vector<std::string>>& docs,
                             const Vocabulary& vocab);
Matrix build_term_doc_matrix(const Corpus& corpus, const Vocabulary& vocab,
                             bool remove_stopwords = true);

// Per-term information gain in bits, using binary term presence (cell > 0).
std::vector<double> information_gain(const Matrix& term_doc,
                                     const std::vector<std::size_t>& labels,
                                     std::size_t n_classes);

// Keeps the k highest-IG terms (ties broken lexicographically) and projects
// the matrix columns accordingly. Retained terms stay in lexicographic order.
std::pair<Vocabulary, Matrix> select_top_k(const std::vector<double>& scores,
                                           std::size_t k, const Vocabulary& vocab,
                                           const Matrix& term_doc);

// Sparse triplet persistence: header "M k", then "doc_index term_index count".
void save_term_doc_matrix(const Matrix& term_doc, const std::filesystem::path& path);
Matrix load_term_doc_matrix(const std::filesystem::path& path);

}  // namespace topiclass
