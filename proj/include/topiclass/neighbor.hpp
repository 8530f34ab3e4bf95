#pragma once

#include "topiclass/corpus.hpp"
#include "topiclass/matrix.hpp"

namespace topiclass {

struct NeighborWeights {
  double parent = 0.4;
  double child = 0.0;
  double sibling = 0.3;
  void validate() const;
};

enum class NeighborKind { parent, child, sibling };

// Row i = arithmetic mean of the theta rows of page i's neighbors of the
// given kind; the zero vector when it has none.
Matrix aggregate_neighbor_topics(const Corpus& corpus, const Matrix& theta,
                                 NeighborKind kind);

struct NeighborTopicMatrices {
  Matrix pdt;  // parent pages
  Matrix cdt;  // child pages
  Matrix sdt;  // sibling pages
};

NeighborTopicMatrices build_neighbor_matrices(const Corpus& corpus, const Matrix& theta);

// IDT[i][j] = cur[i][j] + w_p*pdt[i][j] + w_c*cdt[i][j] + w_s*sdt[i][j].
// Rows are deliberately not renormalized.
Matrix inp_integrate(const Matrix& cur, const NeighborTopicMatrices& neigh,
                     const NeighborWeights& w);

}  // namespace topiclass
