#pragma once

#include <array>
#include <string>
#include <vector>

#include "topiclass/hierarchy.hpp"
#include "topiclass/matrix.hpp"

namespace fixtures {

// 15-class confusion matrix of a flat classifier on a reference collection
// (rows = actual, columns = predicted). Classes are labeled a..o.
inline const std::vector<std::string>& class_names() {
  static const std::vector<std::string> names = {"a", "b", "c", "d", "e", "f", "g", "h",
                                                 "i", "j", "k", "l", "m", "n", "o"};
  return names;
}

inline topiclass::ConfusionMatrix reference_confusion_matrix() {
  static const std::array<std::array<long, 15>, 15> v = {{
      {49, 0, 1, 0, 5, 1, 0, 2, 0, 1, 0, 0, 2, 2, 0},
      {0, 50, 11, 0, 4, 3, 1, 1, 3, 0, 0, 0, 1, 0, 0},
      {1, 4, 140, 2, 1, 9, 9, 8, 2, 0, 0, 0, 1, 1, 4},
      {0, 1, 0, 199, 0, 0, 19, 2, 0, 0, 0, 0, 0, 0, 0},
      {4, 2, 0, 0, 162, 2, 8, 4, 1, 0, 0, 0, 2, 0, 6},
      {0, 0, 6, 0, 1, 254, 11, 2, 0, 5, 0, 2, 8, 1, 24},
      {0, 0, 9, 10, 4, 5, 681, 8, 0, 0, 0, 0, 1, 0, 18},
      {0, 3, 11, 0, 5, 3, 14, 206, 0, 3, 0, 0, 25, 9, 6},
      {0, 1, 0, 1, 2, 1, 0, 0, 63, 0, 1, 0, 0, 0, 0},
      {1, 0, 2, 0, 3, 10, 0, 7, 0, 105, 0, 5, 10, 3, 0},
      {0, 0, 0, 0, 0, 2, 0, 0, 1, 0, 40, 0, 0, 0, 0},
      {0, 0, 0, 0, 2, 2, 1, 1, 0, 1, 0, 113, 2, 0, 0},
      {0, 0, 1, 0, 3, 3, 4, 13, 1, 6, 0, 2, 436, 4, 2},
      {0, 1, 6, 0, 2, 2, 2, 16, 0, 4, 0, 0, 1, 87, 0},
      {1, 0, 0, 0, 4, 19, 12, 1, 0, 0, 1, 0, 3, 1, 828},
  }};
  topiclass::ConfusionMatrix cm;
  cm.classes = class_names();
  for (const auto& row : v) cm.counts.emplace_back(row.begin(), row.end());
  return cm;
}

// The symmetrized pairwise matrix that goes with the confusion matrix above.
// The source table's (h, n) cell reads 13 but its transpose and the raw
// counts both give 12.5; the matrix is symmetric by definition, so 12.5 is
// the consistent value and is what we use.
inline topiclass::Matrix reference_apcm() {
  static const std::array<std::array<double, 15>, 15> w = {{
      {0, 0, 1, 0, 4.5, 0.5, 0, 1, 0, 1, 0, 0, 1, 1, 0.5},
      {0, 0, 7.5, 0.5, 3, 1.5, 0.5, 2, 2, 0, 0, 0, 0.5, 0.5, 0},
      {1, 7.5, 0, 1, 0.5, 7.5, 9, 9.5, 1, 1, 0, 0, 1, 3.5, 2},
      {0, 0.5, 1, 0, 0, 0, 14.5, 1, 0.5, 0, 0, 0, 0, 0, 0},
      {4.5, 3, 0.5, 0, 0, 1.5, 6, 4.5, 1.5, 1.5, 0, 1, 2.5, 1, 5},
      {0.5, 1.5, 7.5, 0, 1.5, 0, 8, 2.5, 0.5, 7.5, 1, 2, 5.5, 1.5, 21.5},
      {0, 0.5, 9, 14.5, 6, 8, 0, 11, 0, 0, 0, 0.5, 2.5, 1, 15},
      {1, 2, 9.5, 1, 4.5, 2.5, 11, 0, 0, 5, 0, 0.5, 19, 12.5, 3.5},
      {0, 2, 1, 0.5, 1.5, 0.5, 0, 0, 0, 0, 1, 0, 0.5, 0, 0},
      {1, 0, 1, 0, 1.5, 7.5, 0, 5, 0, 0, 0, 3, 8, 3.5, 0},
      {0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0.5},
      {0, 0, 0, 0, 1, 2, 0.5, 0.5, 0, 3, 0, 0, 2, 0, 0},
      {1, 0.5, 1, 0, 2.5, 5.5, 2.5, 19, 0.5, 8, 0, 2, 0, 2.5, 2.5},
      {1, 0.5, 3.5, 0, 1, 1.5, 1, 12.5, 0, 3.5, 0, 0, 2.5, 0, 0.5},
      {0.5, 0, 2, 0, 5, 21.5, 15, 3.5, 0, 0, 0.5, 0, 2.5, 0.5, 0},
  }};
  topiclass::Matrix m(15, 15);
  for (std::size_t a = 0; a < 15; ++a)
    for (std::size_t p = 0; p < 15; ++p) m(a, p) = w[a][p];
  return m;
}

}  // namespace fixtures
