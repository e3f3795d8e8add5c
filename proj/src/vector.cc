#include "mlqa/vector.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>
#include <vector>

#include "mlqa/error.h"

namespace mlqa {

WeightedVector::WeightedVector(
    std::map<std::string, double, std::less<>> weights) {
  for (auto& [word, w] : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error("weight of '" + word + "' must be finite and nonnegative");
    }
    if (w >= kDropBelow) entries_.emplace(word, w);
  }
}

double WeightedVector::weight(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? 0.0 : it->second;
}

double WeightedVector::l1() const {
  double sum = 0.0;
  for (const auto& [word, w] : entries_) sum += w;
  return sum;
}

double WeightedVector::l2() const {
  double sum = 0.0;
  for (const auto& [word, w] : entries_) sum += w * w;
  return std::sqrt(sum);
}

WeightedVector question_vector(const ProbabilisticQuery& query) {
  const std::size_t terms = query.distributions.size();
  if (terms == 0) throw Error("question has no terms");
  std::map<std::string, double, std::less<>> sums;
  for (const Distribution& d : query.distributions) {
    for (const auto& [word, p] : d.entries()) sums[word] += p;
  }
  for (auto& [word, w] : sums) w /= static_cast<double>(terms);
  return WeightedVector(std::move(sums));
}

WeightedVector sentence_vector(const Tokens& tokens) {
  if (tokens.empty()) throw Error("empty sentence");
  std::map<std::string, double, std::less<>> freq;
  for (const auto& t : tokens) freq[t] += 1.0;
  for (auto& [word, w] : freq) w /= static_cast<double>(tokens.size());
  return WeightedVector(std::move(freq));
}

double cosine(const WeightedVector& u, const WeightedVector& v) {
  if (u.empty() || v.empty()) return 0.0;
  const WeightedVector& small = u.size() <= v.size() ? u : v;
  const WeightedVector& large = u.size() <= v.size() ? v : u;
  double dot = 0.0;
  for (const auto& [word, w] : small.entries()) dot += w * large.weight(word);
  double c = dot / (u.l2() * v.l2());
  return std::clamp(c, 0.0, 1.0);
}

void write_vector_dump(std::ostream& out, const WeightedVector& v) {
  std::vector<std::pair<std::string, double>> rows(v.entries().begin(),
                                                   v.entries().end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  for (const auto& [word, w] : rows) {
    out << word << '\t' << format_double(w) << '\n';
  }
}

}  // namespace mlqa
