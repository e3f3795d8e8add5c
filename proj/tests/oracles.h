#ifndef MLQA_TESTS_ORACLES_H_
#define MLQA_TESTS_ORACLES_H_

// Brute-force reference implementations and random instance generators
// shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mlqa/classifier.h"
#include "mlqa/random.h"
#include "mlqa/translation.h"
#include "support.h"

namespace mlqa::testing {

using Weights = std::map<std::string, double, std::less<>>;

inline TranslationTable word_table_oracle(const AlignedPairCorpus& corpus) {
  std::set<std::string> sources, targets;
  for (const auto& p : corpus) {
    sources.insert(p.source.begin(), p.source.end());
    targets.insert(p.target.begin(), p.target.end());
  }
  std::map<std::string, Distribution, std::less<>> rows;
  for (const std::string& w : sources) {
    double m = 0;
    for (const auto& p : corpus) {
      for (const auto& s : p.source) m += s == w ? 1 : 0;
    }
    Weights entries;
    for (const std::string& t : targets) {
      double k = 0;
      for (const auto& p : corpus) {
        for (const auto& [i, j] : p.links) {
          if (p.source[i] != w || p.target[j] != t) continue;
          double degree = 0;
          for (const auto& [i2, j2] : p.links) degree += i2 == i ? 1 : 0;
          k += 1.0 / degree;
        }
      }
      if (k > 0) entries[t] = k / m;
    }
    rows.emplace(w, Distribution(entries));
  }
  return TranslationTable(rows);
}

// Every source occurrence has 0, 1, 2 or 4 links, which keeps every share
// dyadic so the builder and the oracle agree bit for bit. With full_links
// each occurrence gets at least one link.
inline AlignedPairCorpus random_aligned_corpus(Rng& rng, bool full_links = false) {
  AlignedPairCorpus corpus;
  const std::size_t sentences = 1 + rng.below(5);
  for (std::size_t s = 0; s < sentences; ++s) {
    AlignedPair p;
    const std::size_t n = 1 + rng.below(5), m = 1 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) p.source.push_back(random_word(rng, 6));
    for (std::size_t j = 0; j < m; ++j) p.target.push_back("t" + std::to_string(rng.below(6)));
    for (std::size_t i = 0; i < n; ++i) {
      static const std::size_t kDegrees[] = {0, 1, 2, 4};
      std::size_t degree = kDegrees[full_links ? 1 + rng.below(3) : rng.below(4)];
      degree = std::min(degree, m);
      if (degree == 3) degree = 2;
      std::vector<std::size_t> js(m);
      for (std::size_t j = 0; j < m; ++j) js[j] = j;
      rng.shuffle(js);
      for (std::size_t d = 0; d < degree; ++d) p.links.push_back({i, js[d]});
    }
    corpus.push_back(std::move(p));
  }
  return corpus;
}

inline GrammarRule random_rule(Rng& rng) {
  GrammarRule r;
  const std::size_t n = 1 + rng.below(3), m = 1 + rng.below(3);
  for (std::size_t i = 0; i < n; ++i) r.source.push_back(random_word(rng, 4));
  for (std::size_t j = 0; j < m; ++j) r.target.push_back("t" + std::to_string(rng.below(5)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (rng.bernoulli(0.4)) r.alignments.push_back({i, j});
    }
  }
  r.likelihood = static_cast<double>(1 + rng.below(8)) / 8.0;  // dyadic
  return r;
}

inline std::vector<GrammarRule> random_rules(Rng& rng) {
  std::vector<GrammarRule> rules;
  const std::size_t count = 1 + rng.below(5);
  for (std::size_t r = 0; r < count; ++r) rules.push_back(random_rule(rng));
  return rules;
}

inline std::vector<NBestDerivation> random_derivations(Rng& rng) {
  std::vector<NBestDerivation> ds;
  const std::size_t count = 1 + rng.below(5);
  for (std::size_t d = 0; d < count; ++d) {
    NBestDerivation der{static_cast<int>(d + 1), {}};
    const std::size_t rules = 1 + rng.below(3);
    for (std::size_t r = 0; r < rules; ++r) der.rules.push_back(random_rule(rng));
    ds.push_back(std::move(der));
  }
  return ds;
}

// Enumerates every (rule, link, target word) triple explicitly.
inline ProbabilisticQuery accumulation_oracle(
    const std::vector<std::pair<const GrammarRule*, double>>& weighted_rules,
    const Tokens& terms) {
  ProbabilisticQuery q;
  q.terms = terms;
  for (const std::string& term : terms) {
    std::set<std::string> targets;
    for (const auto& [r, w] : weighted_rules) {
      targets.insert(r->target.begin(), r->target.end());
    }
    Weights mass;
    double total = 0;
    for (const std::string& t : targets) {
      double sum = 0;
      for (const auto& [r, w] : weighted_rules) {
        for (const auto& [i, j] : r->alignments) {
          if (r->source[i] == term && r->target[j] == t) sum += w;
        }
      }
      if (sum > 0) mass[t] = sum;
      total += sum;
    }
    Weights probs;
    for (const auto& [t, v] : mass) probs[t] = v / total;
    q.distributions.emplace_back(probs);
  }
  return q;
}

inline ProbabilisticQuery grammar_oracle(const std::vector<GrammarRule>& rules,
                                         const Tokens& terms) {
  std::vector<std::pair<const GrammarRule*, double>> weighted;
  for (const auto& r : rules) weighted.emplace_back(&r, r.likelihood);
  return accumulation_oracle(weighted, terms);
}

inline ProbabilisticQuery nbest_oracle(const std::vector<NBestDerivation>& ds,
                                       const Tokens& terms) {
  std::vector<std::pair<const GrammarRule*, double>> weighted;
  for (const auto& d : ds) {
    for (const auto& r : d.rules) weighted.emplace_back(&r, 1.0);
  }
  return accumulation_oracle(weighted, terms);
}

// From the definition: precision at every relevant rank until k relevant
// answers are seen, averaged over min(k, R).
inline double ap_oracle(const std::vector<bool>& ranking, std::size_t k,
                        std::size_t r) {
  const std::size_t denom = std::min(k, r);
  if (denom == 0) return 0.0;
  std::vector<double> precisions;
  for (std::size_t i = 0; i < ranking.size() && precisions.size() < denom; ++i) {
    if (!ranking[i]) continue;
    std::size_t hits = 0;
    for (std::size_t j = 0; j <= i; ++j) hits += ranking[j];
    precisions.push_back(static_cast<double>(hits) / static_cast<double>(i + 1));
  }
  double sum = 0;
  for (double p : precisions) sum += p;
  return sum / static_cast<double>(denom);
}

struct RandomRanking {
  std::vector<bool> relevance;
  std::size_t k = 0;
  std::size_t total_relevant = 0;
};

inline RandomRanking random_ranking(Rng& rng) {
  RandomRanking out;
  out.relevance.resize(rng.below(51));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < out.relevance.size(); ++i) {
    out.relevance[i] = rng.bernoulli(0.3);
    hits += out.relevance[i];
  }
  out.total_relevant = hits + rng.below(5);
  out.k = 1 + rng.below(25);
  return out;
}

inline LogisticProblem random_problem(Rng& rng) {
  LogisticProblem p;
  p.dim = 1 + rng.below(10);
  const std::size_t n = 1 + rng.below(50);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < p.dim; ++k) p.x.push_back(rng.uniform() * 2 - 0.5);
    p.y.push_back(rng.bernoulli(0.4) ? 1 : 0);
  }
  return p;
}

// ||fd - g|| / max(1, ||g||) with central differences of step 1e-5.
inline double gradient_relative_error(const LogisticProblem& p,
                                      const std::vector<double>& params, double l2) {
  const auto g = regularized_gradient(p, params, l2);
  double diff2 = 0, norm2 = 0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double h = 1e-5;
    auto up = params, down = params;
    up[k] += h;
    down[k] -= h;
    const double fd = (regularized_log_likelihood(p, up, l2) -
                       regularized_log_likelihood(p, down, l2)) / (2 * h);
    diff2 += (fd - g[k]) * (fd - g[k]);
    norm2 += g[k] * g[k];
  }
  return std::sqrt(diff2) / std::max(1.0, std::sqrt(norm2));
}

}  // namespace mlqa::testing

#endif  // MLQA_TESTS_ORACLES_H_
