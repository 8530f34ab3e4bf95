#include "topiclass/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topiclass {

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts)
    for (long v : row) t += v;
  return t;
}

long ConfusionMatrix::trace() const {
  long t = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
  return t;
}

ConfusionMatrix build_confusion_matrix(const std::vector<std::string>& actual,
                                       const std::vector<std::string>& predicted,
                                       const std::vector<std::string>& classes) {
  if (actual.size() != predicted.size())
    throw std::invalid_argument("actual/predicted length mismatch");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = i;

  ConfusionMatrix cm;
  cm.classes = classes;
  cm.counts.assign(classes.size(), std::vector<long>(classes.size(), 0));
  for (std::size_t i = 0; i < actual.size(); ++i) {
    auto a = index.find(actual[i]);
    auto p = index.find(predicted[i]);
    if (a == index.end()) throw std::invalid_argument("unknown label '" + actual[i] + "'");
    if (p == index.end()) throw std::invalid_argument("unknown label '" + predicted[i] + "'");
    ++cm.counts[a->second][p->second];
  }
  return cm;
}

Matrix compute_apcm(const ConfusionMatrix& cm) {
  const std::size_t m = cm.counts.size();
  for (const auto& row : cm.counts)
    if (row.size() != m) throw std::invalid_argument("confusion matrix is not square");
  Matrix w(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t p = 0; p < m; ++p)
      w(a, p) = (a == p) ? 0.0 : (cm.counts[a][p] + cm.counts[p][a]) / 2.0;
  return w;
}

Dendrogram build_dendrogram(const Matrix& apcm, const std::vector<std::string>& classes) {
  const std::size_t m = classes.size();
  if (m < 2) throw std::invalid_argument("need at least two classes");
  if (apcm.rows() != m || apcm.cols() != m)
    throw std::invalid_argument("APCM size does not match class list");
  for (std::size_t a = 0; a < m; ++a) {
    if (apcm(a, a) != 0.0) throw std::invalid_argument("APCM diagonal must be zero");
    for (std::size_t p = 0; p < m; ++p) {
      if (apcm(a, p) < 0.0) throw std::invalid_argument("APCM entries must be >= 0");
      if (apcm(a, p) != apcm(p, a)) throw std::invalid_argument("APCM must be symmetric");
    }
  }

  Dendrogram tree;
  tree.classes = classes;
  tree.nodes.resize(m);
  for (std::size_t c = 0; c < m; ++c) tree.nodes[c].leaves = {c};

  std::vector<int> active;  // current cluster roots
  for (std::size_t c = 0; c < m; ++c) active.push_back(static_cast<int>(c));

  auto cluster_similarity = [&](int a, int b) {
    double best = -1.0;
    for (std::size_t la : tree.nodes[a].leaves)
      for (std::size_t lb : tree.nodes[b].leaves) best = std::max(best, apcm(la, lb));
    return best;
  };
  auto smallest_leaf = [&](int node) {
    return *std::min_element(tree.nodes[node].leaves.begin(), tree.nodes[node].leaves.end());
  };

  for (int rank = 0; active.size() > 1; ++rank) {
    std::size_t best_a = 0, best_b = 1;
    double best_sim = -1.0;
    std::pair<std::size_t, std::size_t> best_key{0, 0};
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double sim = cluster_similarity(active[i], active[j]);
        std::size_t ra = smallest_leaf(active[i]), rb = smallest_leaf(active[j]);
        std::pair<std::size_t, std::size_t> key{std::min(ra, rb), std::max(ra, rb)};
        if (sim > best_sim || (sim == best_sim && key < best_key)) {
          best_sim = sim;
          best_key = key;
          best_a = i;
          best_b = j;
        }
      }
    }

    DendrogramNode merged;
    // Left child is the cluster holding the smaller class index.
    int left = active[best_a], right = active[best_b];
    if (smallest_leaf(right) < smallest_leaf(left)) std::swap(left, right);
    merged.left = left;
    merged.right = right;
    merged.similarity = best_sim;
    merged.rank = rank;
    merged.leaves = tree.nodes[left].leaves;
    merged.leaves.insert(merged.leaves.end(), tree.nodes[right].leaves.begin(),
                         tree.nodes[right].leaves.end());
    std::sort(merged.leaves.begin(), merged.leaves.end());
    tree.nodes.push_back(std::move(merged));

    const int new_node = static_cast<int>(tree.nodes.size()) - 1;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active[best_a] = new_node;
  }
  tree.root = active[0];
  return tree;
}

namespace {

void append_text(const Dendrogram& tree, int node, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  if (tree.is_leaf(node)) {
    out += tree.classes[static_cast<std::size_t>(node)];
    out += '\n';
    return;
  }
  const DendrogramNode& n = tree.nodes[static_cast<std::size_t>(node)];
  std::ostringstream line;
  line << "merge@" << n.similarity << '\n';
  out += line.str();
  append_text(tree, n.left, depth + 1, out);
  append_text(tree, n.right, depth + 1, out);
}

nlohmann::ordered_json node_to_json(const Dendrogram& tree, int node) {
  if (tree.is_leaf(node))
    return nlohmann::ordered_json{{"class", tree.classes[static_cast<std::size_t>(node)]}};
  const DendrogramNode& n = tree.nodes[static_cast<std::size_t>(node)];
  nlohmann::ordered_json j;
  j["similarity"] = n.similarity;
  j["rank"] = n.rank;
  j["left"] = node_to_json(tree, n.left);
  j["right"] = node_to_json(tree, n.right);
  return j;
}

// Internal nodes are re-placed at index m + rank so loaded trees use the
// same node numbering the builder produced.
int node_from_json(const nlohmann::json& j, Dendrogram& tree,
                   const std::map<std::string, std::size_t>& class_index) {
  if (j.contains("class")) {
    auto it = class_index.find(j.at("class").get<std::string>());
    if (it == class_index.end()) throw std::runtime_error("unknown class in dendrogram file");
    return static_cast<int>(it->second);
  }
  DendrogramNode n;
  n.similarity = j.at("similarity").get<double>();
  n.rank = j.at("rank").get<int>();
  n.left = node_from_json(j.at("left"), tree, class_index);
  n.right = node_from_json(j.at("right"), tree, class_index);
  n.leaves = tree.nodes[static_cast<std::size_t>(n.left)].leaves;
  const auto& rl = tree.nodes[static_cast<std::size_t>(n.right)].leaves;
  n.leaves.insert(n.leaves.end(), rl.begin(), rl.end());
  std::sort(n.leaves.begin(), n.leaves.end());

  const std::size_t m = tree.classes.size();
  const std::size_t slot = m + static_cast<std::size_t>(n.rank);
  if (n.rank < 0 || slot >= 2 * m - 1 || n.rank == tree.nodes[slot].rank)
    throw std::runtime_error("invalid or duplicate merge rank in dendrogram file");
  tree.nodes[slot] = std::move(n);
  return static_cast<int>(slot);
}

}  // namespace

std::string dendrogram_to_text(const Dendrogram& tree) {
  std::string out;
  append_text(tree, tree.root, 0, out);
  return out;
}

void save_dendrogram(const Dendrogram& tree, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format"] = "topiclass-dendrogram";
  j["version"] = 1;
  j["classes"] = tree.classes;
  j["tree"] = node_to_json(tree, tree.root);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dendrogram file: " + path.string());
  out << j.dump(2) << '\n';
}

Dendrogram load_dendrogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dendrogram file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("format", "") != "topiclass-dendrogram" || j.value("version", 0) != 1)
    throw std::runtime_error("unrecognized dendrogram file format");
  Dendrogram tree;
  tree.classes = j.at("classes").get<std::vector<std::string>>();
  if (tree.classes.size() < 2) throw std::runtime_error("dendrogram needs at least two classes");
  tree.nodes.resize(2 * tree.classes.size() - 1);
  for (std::size_t c = 0; c < tree.classes.size(); ++c) tree.nodes[c].leaves = {c};
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < tree.classes.size(); ++c) index[tree.classes[c]] = c;
  tree.root = node_from_json(j.at("tree"), tree, index);
  return tree;
}

HsvmModel train_hsvm(const Dendrogram& tree, const std::vector<std::vector<double>>& X,
                     const std::vector<std::size_t>& labels, const SvmParams& params) {
  if (X.size() != labels.size()) throw std::invalid_argument("rows/labels misaligned");
  const std::size_t m = tree.n_classes();
  std::vector<std::size_t> class_count(m, 0);
  for (std::size_t l : labels) {
    if (l >= m) throw std::invalid_argument("label index outside dendrogram leaves");
    ++class_count[l];
  }
  for (std::size_t c = 0; c < m; ++c)
    if (class_count[c] == 0)
      throw std::invalid_argument("class '" + tree.classes[c] + "' missing from training data");

  HsvmModel model;
  model.tree = tree;
  model.params = params;
  for (std::size_t node = m; node < tree.nodes.size(); ++node) {
    const DendrogramNode& n = tree.nodes[node];
    std::set<std::size_t> left_leaves(tree.nodes[static_cast<std::size_t>(n.left)].leaves.begin(),
                                      tree.nodes[static_cast<std::size_t>(n.left)].leaves.end());
    std::set<std::size_t> all_leaves(n.leaves.begin(), n.leaves.end());
    std::vector<std::vector<double>> node_x;
    std::vector<int> node_y;
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (!all_leaves.count(labels[i])) continue;
      node_x.push_back(X[i]);
      node_y.push_back(left_leaves.count(labels[i]) ? 1 : -1);
    }
    model.node_models.emplace(static_cast<int>(node), train_binary(node_x, node_y, params));
  }
  return model;
}

std::size_t predict_hsvm(const HsvmModel& model, std::span<const double> x) {
  int node = model.tree.root;
  while (!model.tree.is_leaf(node)) {
    const DendrogramNode& n = model.tree.nodes[static_cast<std::size_t>(node)];
    const double f = decision_value(model.node_models.at(node), x);
    node = (f >= 0.0) ? n.left : n.right;
  }
  return static_cast<std::size_t>(node);
}

void save_hsvm_model(const HsvmModel& model, const std::filesystem::path& path) {
  save_dendrogram(model.tree, path.string() + ".tree");
  MulticlassSvmModel flat;  // reuse the pairwise container for node models
  flat.classes = model.tree.classes;
  for (const auto& [node, binary] : model.node_models)
    flat.pairs.push_back({static_cast<std::size_t>(node), 0, binary});
  save_multiclass_model(flat, path);
}

HsvmModel load_hsvm_model(const std::filesystem::path& path) {
  HsvmModel model;
  model.tree = load_dendrogram(path.string() + ".tree");
  MulticlassSvmModel flat = load_multiclass_model(path);
  for (const PairwiseModel& p : flat.pairs)
    model.node_models.emplace(static_cast<int>(p.first), p.model);
  return model;
}

}  // namespace topiclass
