#include "mlqa/evaluation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "mlqa/error.h"
#include "mlqa/random.h"
#include "mlqa/text.h"

namespace mlqa {

namespace {

template <typename Flags>
double ap_k_impl(const Flags& ranked_relevance, std::size_t k,
                 std::size_t total_relevant) {
  const std::size_t needed = std::min(k, total_relevant);
  if (needed == 0) return 0.0;
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ranked_relevance.size() && hits < needed; ++i) {
    if (!ranked_relevance[i]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(needed);
}

}  // namespace

double ap_k(std::span<const bool> ranked_relevance, std::size_t k,
            std::size_t total_relevant) {
  return ap_k_impl(ranked_relevance, k, total_relevant);
}

double ap_k(const std::vector<bool>& ranked_relevance, std::size_t k,
            std::size_t total_relevant) {
  return ap_k_impl(ranked_relevance, k, total_relevant);
}

double mean_average_precision(std::span<const double> ap_values) {
  if (ap_values.empty()) throw Error("MAP of an empty list");
  double sum = 0.0;
  for (double ap : ap_values) sum += ap;
  return sum / static_cast<double>(ap_values.size());
}

std::vector<Fold> kfold_split(std::span<const std::string> ids, std::size_t k,
                              std::uint64_t seed) {
  if (k == 0 || k > ids.size()) {
    throw Error("cannot split " + std::to_string(ids.size()) + " questions into " +
                std::to_string(k) + " folds");
  }
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!position.emplace(ids[i], i).second) {
      throw Error("duplicate id '" + ids[i] + "' in fold split");
    }
  }
  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::size_t> fold_of(ids.size());
  for (std::size_t p = 0; p < order.size(); ++p) fold_of[order[p]] = p % k;

  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(ids[i]);
    }
  }
  return folds;
}

double paired_permutation_test(std::span<const double> a,
                               std::span<const double> b,
                               std::size_t iterations, std::uint64_t seed,
                               PermutationMode mode) {
  if (a.size() != b.size()) {
    throw Error("paired test needs equal-length lists (" +
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                ")");
  }
  const std::size_t n = a.size();
  if (n < 2) throw Error("paired test needs at least two pairs");
  std::vector<double> d(n);
  double observed = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a[i] - b[i];
    observed += d[i];
    scale += std::fabs(d[i]);
  }
  observed = std::fabs(observed);
  const double slack = 1e-12 * std::max(1.0, scale);

  bool exact = false;
  switch (mode) {
    case PermutationMode::exact:
      if (n > 30) throw Error("exact enumeration limited to 30 pairs");
      exact = true;
      break;
    case PermutationMode::monte_carlo:
      exact = false;
      break;
    case PermutationMode::automatic:
      exact = n <= 20 && (std::size_t{1} << n) <= iterations;
      break;
  }

  if (exact) {
    const std::uint64_t patterns = std::uint64_t{1} << n;
    std::uint64_t hits = 0;
    for (std::uint64_t m = 0; m < patterns; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += ((m >> i) & 1u) ? -d[i] : d[i];
      if (std::fabs(s) >= observed - slack) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(patterns);
  }

  if (iterations == 0) throw Error("Monte Carlo test needs iterations > 0");
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    double s = 0.0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng.next();
      s += (bits & 1u) ? -d[i] : d[i];
      bits >>= 1;
    }
    if (std::fabs(s) >= observed - slack) ++hits;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(iterations + 1);
}

void write_report(std::ostream& out, const EvalReport& report) {
  out << "question\tap_k\n";
  for (const auto& [qid, ap] : report.ap) {
    out << qid << '\t' << format_fixed(ap, 6) << '\n';
  }
  out << "MAP\t" << format_fixed(report.map, 6) << '\n';
  if (report.ratio) {
    out << "en_ch_ar_percent\t" << format_fixed(report.ratio->en, 1) << '\t'
        << format_fixed(report.ratio->ch, 1) << '\t'
        << format_fixed(report.ratio->ar, 1) << '\n';
  }
  if (report.p_value) {
    out << "p_value\t" << format_fixed(*report.p_value, 6) << '\n';
  }
}

}  // namespace mlqa
