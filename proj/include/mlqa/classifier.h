#ifndef MLQA_CLASSIFIER_H_
#define MLQA_CLASSIFIER_H_

// Maximum-entropy (binary logistic) ensemble trained on balanced subsets:
// every member sees all positives plus a disjoint slice of the negatives.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlqa/features.h"

namespace mlqa {

struct TrainingExample {
  FeatureVector features;
  bool label = false;
};

struct TrainerConfig {
  double l2 = 1.0;
  double tolerance = 1e-6;
  int max_iterations = 1000;
  std::uint64_t seed = 0;
};

// Dense logistic-regression problem; row-major features, one label per row.
struct LogisticProblem {
  std::size_t dim = 0;
  std::vector<double> x;
  std::vector<unsigned char> y;

  std::size_t rows() const { return y.size(); }
  std::span<const double> row(std::size_t i) const {
    return {x.data() + i * dim, dim};
  }
};

// sum_i [y_i log p_i + (1 - y_i) log(1 - p_i)] - (l2 / 2) |w|^2 with
// p_i = sigmoid(b + w.x_i). params = {b, w_1..w_dim}; the bias is not
// regularized.
double regularized_log_likelihood(const LogisticProblem& problem,
                                  std::span<const double> params, double l2);
std::vector<double> regularized_gradient(const LogisticProblem& problem,
                                         std::span<const double> params,
                                         double l2);

struct LogisticFit {
  std::vector<double> params;
  int iterations = 0;
  bool converged = false;
};

// Full-batch gradient ascent with a Barzilai-Borwein trial step and Armijo
// backtracking. Stops at |gradient| <= tolerance or max_iterations.
LogisticFit fit_logistic(const LogisticProblem& problem,
                         const TrainerConfig& config);

double sigmoid(double z);

// ceil(#neg / #pos) subsets of indices into examples. Every subset holds all
// positives; the shuffled negatives are split into slices whose sizes differ
// by at most one. Throws Error without at least one of each label.
std::vector<std::vector<std::size_t>> partition_balanced(
    std::span<const TrainingExample> examples, std::uint64_t seed);

struct EnsembleMember {
  double bias = 0.0;
  std::vector<double> weights;
};

struct EnsembleModel {
  std::vector<std::string> feature_names;
  std::vector<bool> active;
  TrainerConfig config;
  std::vector<EnsembleMember> members;

  std::size_t dim() const { return feature_names.size(); }
};

// One member per balanced subset. Inactive features keep weight 0. Throws
// Error on non-finite feature values.
EnsembleModel train_ensemble(std::span<const TrainingExample> examples,
                             const TrainerConfig& config);

std::vector<double> member_probabilities(const EnsembleModel& model,
                                         std::span<const double> x);
// Mean member probability. Throws Error on a dimensionality mismatch.
double score(const EnsembleModel& model, std::span<const double> x);
double score(const EnsembleModel& model, const FeatureVector& fv);
// Majority vote at 0.5; an even split goes to relevant iff the mean
// probability is at least 0.5.
bool predict(const EnsembleModel& model, std::span<const double> x);
bool predict(const EnsembleModel& model, const FeatureVector& fv);

void write_model(std::ostream& out, const EnsembleModel& model);
EnsembleModel read_model(std::istream& in, const std::string& source_name);
EnsembleModel load_model(const std::filesystem::path& path);

}  // namespace mlqa

#endif  // MLQA_CLASSIFIER_H_
