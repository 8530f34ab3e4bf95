#include "topiclass/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace topiclass {

double kernel_eval(const KernelSpec& kernel, std::span<const double> a,
                   std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("kernel dimension mismatch");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  double base = dot + kernel.coef0;
  double result = 1.0;
  for (int d = 0; d < kernel.degree; ++d) result *= base;
  return result;
}

SmoSolution smo_solve(const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y, const SvmParams& params) {
  const std::size_t n = X.size();
  if (n == 0 || y.size() != n) throw std::invalid_argument("empty or misaligned training set");
  if (params.C <= 0.0) throw std::invalid_argument("C must be positive");
  if (params.tol <= 0.0) throw std::invalid_argument("tol must be positive");
  if (params.kernel.degree < 1) throw std::invalid_argument("kernel degree must be >= 1");
  bool has_pos = false, has_neg = false;
  for (int yi : y) {
    if (yi == 1) has_pos = true;
    else if (yi == -1) has_neg = true;
    else throw std::invalid_argument("labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw std::invalid_argument("training set has a single class");
  for (const auto& row : X)
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");

  // Precompute the full kernel matrix; problem sizes here are modest.
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      K[i * n + j] = K[j * n + i] = kernel_eval(params.kernel, X[i], X[j]);

  const double C = params.C;
  std::vector<double> alpha(n, 0.0);
  // Gradient of (1/2) a'Qa - e'a with Q_ij = y_i y_j K_ij; starts at -e.
  std::vector<double> grad(n, -1.0);

  SmoSolution sol;
  double gap_high = 0.0, gap_low = 0.0;
  while (true) {
    // Maximal-violating pair: i maximizes -y_i g_i over I_up,
    // j minimizes -y_j g_j over I_low.
    std::ptrdiff_t best_i = -1, best_j = -1;
    double max_up = -std::numeric_limits<double>::infinity();
    double min_low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      const bool in_up = (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0.0);
      const bool in_low = (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < C);
      if (in_up && v > max_up) {
        max_up = v;
        best_i = static_cast<std::ptrdiff_t>(t);
      }
      if (in_low && v < min_low) {
        min_low = v;
        best_j = static_cast<std::ptrdiff_t>(t);
      }
    }
    gap_high = max_up;
    gap_low = min_low;
    if (best_i < 0 || best_j < 0 || max_up - min_low <= params.tol ||
        sol.iterations >= params.max_iter)
      break;

    const std::size_t i = static_cast<std::size_t>(best_i);
    const std::size_t j = static_cast<std::size_t>(best_j);
    double quad = K[i * n + i] + K[j * n + j] - 2.0 * K[i * n + j];
    if (quad <= 0.0) quad = 1e-12;
    // Step along alpha_i += y_i t, alpha_j -= y_j t (keeps y'a constant).
    double step = (max_up - min_low) / quad;
    double limit = (y[i] == 1) ? C - alpha[i] : alpha[i];
    step = std::min(step, limit);
    limit = (y[j] == 1) ? alpha[j] : C - alpha[j];
    step = std::min(step, limit);

    const double delta_i = y[i] * step;
    const double delta_j = -y[j] * step;
    alpha[i] += delta_i;
    alpha[j] += delta_j;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += y[t] * (y[i] * K[t * n + i] * delta_i + y[j] * K[t * n + j] * delta_j);
    ++sol.iterations;
  }

  // Bias sits midway between the two boundary estimates.
  if (std::isfinite(gap_high) && std::isfinite(gap_low))
    sol.bias = 0.5 * (gap_high + gap_low);
  else if (std::isfinite(gap_high))
    sol.bias = gap_high;
  else
    sol.bias = gap_low;

  double sum_alpha = 0.0, alpha_grad = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    sum_alpha += alpha[t];
    alpha_grad += alpha[t] * grad[t];
  }
  sol.objective = 0.5 * (sum_alpha - alpha_grad);
  sol.alpha = std::move(alpha);
  return sol;
}

BinarySvmModel train_binary(const std::vector<std::vector<double>>& X,
                            const std::vector<int>& y, const SvmParams& params) {
  SmoSolution sol = smo_solve(X, y, params);
  BinarySvmModel model;
  model.kernel = params.kernel;
  model.C = params.C;
  model.bias = sol.bias;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (sol.alpha[i] > 1e-12) {
      model.support_vectors.push_back(X[i]);
      model.coeffs.push_back(sol.alpha[i] * y[i]);
    }
  }
  return model;
}

double decision_value(const BinarySvmModel& model, std::span<const double> x) {
  double f = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
    f += model.coeffs[i] * kernel_eval(model.kernel, model.support_vectors[i], x);
  return f;
}

MulticlassSvmModel train_multiclass(const std::vector<std::vector<double>>& X,
                                    const std::vector<std::size_t>& labels,
                                    const std::vector<std::string>& classes,
                                    const SvmParams& params) {
  if (X.size() != labels.size()) throw std::invalid_argument("rows/labels misaligned");
  if (classes.size() < 2) throw std::invalid_argument("need at least two classes");
  std::vector<std::size_t> class_count(classes.size(), 0);
  for (std::size_t l : labels) {
    if (l >= classes.size()) throw std::invalid_argument("label index out of range");
    ++class_count[l];
  }
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (class_count[c] == 0)
      throw std::invalid_argument("class '" + classes[c] + "' has no examples");

  MulticlassSvmModel model;
  model.classes = classes;
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = a + 1; b < classes.size(); ++b) {
      std::vector<std::vector<double>> pair_x;
      std::vector<int> pair_y;
      for (std::size_t i = 0; i < X.size(); ++i) {
        if (labels[i] == a) {
          pair_x.push_back(X[i]);
          pair_y.push_back(1);
        } else if (labels[i] == b) {
          pair_x.push_back(X[i]);
          pair_y.push_back(-1);
        }
      }
      model.pairs.push_back({a, b, train_binary(pair_x, pair_y, params)});
    }
  }
  return model;
}

std::size_t predict_multiclass_index(const MulticlassSvmModel& model,
                                     std::span<const double> x) {
  const std::size_t m = model.classes.size();
  std::vector<int> votes(m, 0);
  std::vector<double> strength(m, 0.0);  // |f| summed over won pairs
  for (const PairwiseModel& p : model.pairs) {
    const double f = decision_value(p.model, x);
    const std::size_t winner = (f >= 0.0) ? p.first : p.second;
    ++votes[winner];
    strength[winner] += std::fabs(f);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < m; ++c) {
    if (votes[c] > votes[best] ||
        (votes[c] == votes[best] && strength[c] > strength[best]))
      best = c;
  }
  return best;
}

const std::string& predict_multiclass(const MulticlassSvmModel& model,
                                      std::span<const double> x) {
  return model.classes[predict_multiclass_index(model, x)];
}

namespace {

void write_binary_model(std::ostream& out, const BinarySvmModel& m) {
  out << m.kernel.degree << ' ' << m.kernel.coef0 << ' ' << m.C << ' ' << m.bias << ' '
      << m.support_vectors.size() << ' '
      << (m.support_vectors.empty() ? 0 : m.support_vectors[0].size()) << '\n';
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
    out << m.coeffs[i];
    for (double v : m.support_vectors[i]) out << ' ' << v;
    out << '\n';
  }
}

BinarySvmModel read_binary_model(std::istream& in) {
  BinarySvmModel m;
  std::size_t n_sv, dim;
  if (!(in >> m.kernel.degree >> m.kernel.coef0 >> m.C >> m.bias >> n_sv >> dim))
    throw std::runtime_error("truncated SVM model file");
  m.support_vectors.resize(n_sv, std::vector<double>(dim));
  m.coeffs.resize(n_sv);
  for (std::size_t i = 0; i < n_sv; ++i) {
    in >> m.coeffs[i];
    for (std::size_t d = 0; d < dim; ++d)
      if (!(in >> m.support_vectors[i][d]))
        throw std::runtime_error("truncated SVM model file");
  }
  return m;
}

}  // namespace

void save_multiclass_model(const MulticlassSvmModel& model,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path.string());
  out.precision(17);
  out << "topiclass-svm 1\n" << model.classes.size() << '\n';
  for (const auto& c : model.classes) out << c << '\n';
  out << model.pairs.size() << '\n';
  for (const PairwiseModel& p : model.pairs) {
    out << p.first << ' ' << p.second << '\n';
    write_binary_model(out, p.model);
  }
}

MulticlassSvmModel load_multiclass_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  std::string magic;
  int version;
  in >> magic >> version;
  if (magic != "topiclass-svm" || version != 1)
    throw std::runtime_error("unrecognized SVM model file format");
  std::size_t n_classes;
  in >> n_classes;
  MulticlassSvmModel model;
  model.classes.resize(n_classes);
  for (auto& c : model.classes) in >> c;
  std::size_t n_pairs;
  in >> n_pairs;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    PairwiseModel p;
    in >> p.first >> p.second;
    p.model = read_binary_model(in);
    model.pairs.push_back(std::move(p));
  }
  return model;
}

}  // namespace topiclass
