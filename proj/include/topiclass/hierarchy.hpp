#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "topiclass/matrix.hpp"
#include "topiclass/svm.hpp"

namespace topiclass {

// Rows = actual class, columns = predicted class.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<long>> counts;

  long total() const;
  long trace() const;
};

ConfusionMatrix build_confusion_matrix(const std::vector<std::string>& actual,
                                       const std::vector<std::string>& predicted,
                                       const std::vector<std::string>& classes);

// Average pairwise confusion matrix: w[a][p] = (v[a][p] + v[p][a]) / 2 off
// the diagonal, zero on it. Symmetric by construction.
Matrix compute_apcm(const ConfusionMatrix& cm);

struct DendrogramNode {
  int left = -1;   // node indexes; leaves are 0..m-1
  int right = -1;
  double similarity = 0.0;  // APCM similarity at which the merge happened
  int rank = -1;            // 0 for the first merge
  std::vector<std::size_t> leaves;  // class indexes under this node
};

struct Dendrogram {
  std::vector<std::string> classes;
  std::vector<DendrogramNode> nodes;  // m leaves then m-1 internal nodes
  int root = -1;

  std::size_t n_classes() const { return classes.size(); }
  bool is_leaf(int node) const { return node >= 0 && node < static_cast<int>(classes.size()); }
};

// Agglomeration by descending similarity, where cluster similarity is the
// maximum pairwise APCM entry across the two clusters. Equal similarities
// break toward the pair whose smallest class indexes come first.
Dendrogram build_dendrogram(const Matrix& apcm, const std::vector<std::string>& classes);

std::string dendrogram_to_text(const Dendrogram& tree);
void save_dendrogram(const Dendrogram& tree, const std::filesystem::path& path);
Dendrogram load_dendrogram(const std::filesystem::path& path);

struct HsvmModel {
  Dendrogram tree;
  std::map<int, BinarySvmModel> node_models;  // keyed by internal node index
  SvmParams params;
};

// One binary SVM per internal node: rows under the left child labeled +1,
// rows under the right child labeled -1.
HsvmModel train_hsvm(const Dendrogram& tree, const std::vector<std::vector<double>>& X,
                     const std::vector<std::size_t>& labels, const SvmParams& params);

// Root-to-leaf descent; a decision value >= 0 goes left.
std::size_t predict_hsvm(const HsvmModel& model, std::span<const double> x);

void save_hsvm_model(const HsvmModel& model, const std::filesystem::path& path);
HsvmModel load_hsvm_model(const std::filesystem::path& path);

}  // namespace topiclass
