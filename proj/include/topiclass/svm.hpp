#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace topiclass {

// kernel(x, y) = (x . y + coef0)^degree
struct KernelSpec {
  int degree = 1;
  double coef0 = 1.0;
};

double kernel_eval(const KernelSpec& kernel, std::span<const double> a,
                   std::span<const double> b);

struct SvmParams {
  double C = 1.0;
  KernelSpec kernel;
  double tol = 1e-3;           // KKT tolerance
  std::size_t max_iter = 200000;  // working-pair update cap
};

struct SmoSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  double objective = 0.0;  // dual objective at the solution
  std::size_t iterations = 0;
};

// Two-variable SMO on the dual, selecting the maximal-violating pair each
// step; stops when the KKT gap falls below tol or the iteration cap hits.
SmoSolution smo_solve(const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y, const SvmParams& params);

struct BinarySvmModel {
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> coeffs;  // alpha_i * y_i per support vector
  double bias = 0.0;
  KernelSpec kernel;
  double C = 1.0;
};

// y must be +-1 with at least one example of each sign.
BinarySvmModel train_binary(const std::vector<std::vector<double>>& X,
                            const std::vector<int>& y, const SvmParams& params);

// f(x) = sum_i coeff_i * kernel(sv_i, x) + bias
double decision_value(const BinarySvmModel& model, std::span<const double> x);

struct PairwiseModel {
  std::size_t first = 0;   // class index labeled +1
  std::size_t second = 0;  // class index labeled -1
  BinarySvmModel model;
};

struct MulticlassSvmModel {
  std::vector<std::string> classes;
  std::vector<PairwiseModel> pairs;  // one per unordered class pair
};

// One-vs-one decomposition: one binary model per class pair, trained on
// only that pair's rows, with the earlier class labeled +1.
MulticlassSvmModel train_multiclass(const std::vector<std::vector<double>>& X,
                                    const std::vector<std::size_t>& labels,
                                    const std::vector<std::string>& classes,
                                    const SvmParams& params);

// Majority vote over pairwise winners; ties broken by the largest sum of
// |decision value| among the winning votes, then by class-list order.
std::size_t predict_multiclass_index(const MulticlassSvmModel& model,
                                     std::span<const double> x);
const std::string& predict_multiclass(const MulticlassSvmModel& model,
                                      std::span<const double> x);

void save_multiclass_model(const MulticlassSvmModel& model,
                           const std::filesystem::path& path);
MulticlassSvmModel load_multiclass_model(const std::filesystem::path& path);

}  // namespace topiclass
