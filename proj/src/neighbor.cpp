#include "topiclass/neighbor.hpp"

#include <stdexcept>

namespace topiclass {

void NeighborWeights::validate() const {
  auto in_range = [](double w) { return w >= 0.0 && w <= 1.0; };
  if (!in_range(parent) || !in_range(child) || !in_range(sibling))
    throw std::invalid_argument("neighbor weights must lie in [0, 1]");
}

Matrix aggregate_neighbor_topics(const Corpus& corpus, const Matrix& theta,
                                 NeighborKind kind) {
  if (theta.rows() != corpus.size())
    throw std::invalid_argument("theta rows do not cover the corpus");
  Matrix out(theta.rows(), theta.cols());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::vector<std::size_t> neighbors;
    switch (kind) {
      case NeighborKind::parent: neighbors = corpus.parents_of(i); break;
      case NeighborKind::child: neighbors = corpus.children_of(i); break;
      case NeighborKind::sibling: neighbors = corpus.siblings_of(i); break;
    }
    if (neighbors.empty()) continue;
    for (std::size_t n : neighbors)
      for (std::size_t j = 0; j < theta.cols(); ++j) out(i, j) += theta(n, j);
    for (std::size_t j = 0; j < theta.cols(); ++j)
      out(i, j) /= static_cast<double>(neighbors.size());
  }
  return out;
}

NeighborTopicMatrices build_neighbor_matrices(const Corpus& corpus, const Matrix& theta) {
  return {aggregate_neighbor_topics(corpus, theta, NeighborKind::parent),
          aggregate_neighbor_topics(corpus, theta, NeighborKind::child),
          aggregate_neighbor_topics(corpus, theta, NeighborKind::sibling)};
}

Matrix inp_integrate(const Matrix& cur, const NeighborTopicMatrices& neigh,
                     const NeighborWeights& w) {
  w.validate();
  auto same_shape = [&cur](const Matrix& m) {
    return m.rows() == cur.rows() && m.cols() == cur.cols();
  };
  if (!same_shape(neigh.pdt) || !same_shape(neigh.cdt) || !same_shape(neigh.sdt))
    throw std::invalid_argument("matrix shape mismatch");
  Matrix idt(cur.rows(), cur.cols());
  for (std::size_t i = 0; i < cur.rows(); ++i)
    for (std::size_t j = 0; j < cur.cols(); ++j)
      idt(i, j) = cur(i, j) + w.parent * neigh.pdt(i, j) + w.child * neigh.cdt(i, j) +
                  w.sibling * neigh.sdt(i, j);
  return idt;
}

}  // namespace topiclass
