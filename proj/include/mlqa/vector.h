#ifndef MLQA_VECTOR_H_
#define MLQA_VECTOR_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "mlqa/text.h"
#include "mlqa/translation.h"

namespace mlqa {

// Sparse nonnegative word weights. Weights below kDropBelow are not stored.
class WeightedVector {
 public:
  static constexpr double kDropBelow = 1e-12;

  WeightedVector() = default;
  // Throws Error on a negative or non-finite weight.
  explicit WeightedVector(std::map<std::string, double, std::less<>> weights);

  double weight(std::string_view word) const;
  double l1() const;
  double l2() const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, double, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, double, std::less<>> entries_;
};

// weight(w) = (1/T) sum_i Pr(w | q_i). Throws Error on a query with no terms.
WeightedVector question_vector(const ProbabilisticQuery& query);

// weight(w) = freq(w) / |tokens|. Throws Error("empty sentence").
WeightedVector sentence_vector(const Tokens& tokens);

// Cosine similarity; 0 when either side is empty.
double cosine(const WeightedVector& u, const WeightedVector& v);

// word \t weight, heaviest first (ties by word).
void write_vector_dump(std::ostream& out, const WeightedVector& v);

}  // namespace mlqa

#endif  // MLQA_VECTOR_H_
