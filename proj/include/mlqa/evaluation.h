#ifndef MLQA_EVALUATION_H_
#define MLQA_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mlqa {

// Average precision over the first min(k, total_relevant) relevant hits.
// Each hit adds precision-at-its-rank; hits never reached add 0. The sum is
// divided by min(k, total_relevant), and the result is 0 when that is 0.
double ap_k(std::span<const bool> ranked_relevance, std::size_t k,
            std::size_t total_relevant);
double ap_k(const std::vector<bool>& ranked_relevance, std::size_t k,
            std::size_t total_relevant);

// Arithmetic mean. Throws Error on an empty list.
double mean_average_precision(std::span<const double> ap_values);

struct Fold {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

// k test folds of near-equal size covering every id once. Ids keep their
// input order inside each fold. Throws Error unless 1 <= k <= #ids.
std::vector<Fold> kfold_split(std::span<const std::string> ids, std::size_t k,
                              std::uint64_t seed);

enum class PermutationMode { automatic, exact, monte_carlo };

// Two-sided paired sign-flip test on the differences a_i - b_i. Automatic
// mode enumerates all 2^n sign patterns when n <= 20 and 2^n <= iterations,
// otherwise draws `iterations` random patterns and returns (hits+1)/(iters+1).
double paired_permutation_test(std::span<const double> a,
                               std::span<const double> b,
                               std::size_t iterations, std::uint64_t seed,
                               PermutationMode mode = PermutationMode::automatic);

struct LanguageRatio {
  double en = 0.0;
  double ch = 0.0;
  double ar = 0.0;
};

struct EvalReport {
  std::vector<std::pair<std::string, double>> ap;  // per question, input order
  double map = 0.0;
  std::optional<LanguageRatio> ratio;
  std::optional<double> p_value;
};

// Tab-separated: one "question_id ap" row per question, then MAP, the
// En-Ch-Ar ratio and the p-value when present. Fixed six-digit precision.
void write_report(std::ostream& out, const EvalReport& report);

}  // namespace mlqa

#endif  // MLQA_EVALUATION_H_
