#include "mlqa/translation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "mlqa/error.h"
#include "mlqa/random.h"

namespace mlqa {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::word: return "word";
    case Method::nbest: return "10best";
    case Method::context: return "context";
    case Method::grammar: return "grammar";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  for (Method m : kMethods) {
    if (to_string(m) == text) return m;
  }
  if (text == "nbest") return Method::nbest;
  throw Error("unknown translation method '" + std::string(text) + "'");
}

Distribution::Distribution(std::map<std::string, double, std::less<>> entries)
    : entries_(std::move(entries)) {
  double sum = 0.0;
  for (const auto& [target, p] : entries_) {
    if (!(p > 0.0) || p > 1.0 + kSumTolerance) {
      throw Error("probability of '" + target + "' is " + format_double(p) +
                  ", outside (0, 1]");
    }
    sum += p;
  }
  if (sum > 1.0 + kSumTolerance) {
    throw Error("probabilities sum to " + format_double(sum) + " > 1");
  }
}

Distribution Distribution::normalized(
    const std::map<std::string, double, std::less<>>& weights) {
  double sum = 0.0;
  for (const auto& [target, w] : weights) {
    if (w > 0.0) sum += w;
  }
  std::map<std::string, double, std::less<>> entries;
  if (sum > 0.0) {
    for (const auto& [target, w] : weights) {
      if (w > 0.0 && w / sum > 0.0) entries.emplace(target, w / sum);
    }
  }
  return Distribution(std::move(entries));
}

double Distribution::probability(std::string_view target) const {
  auto it = entries_.find(target);
  return it == entries_.end() ? 0.0 : it->second;
}

double Distribution::total() const {
  double sum = 0.0;
  for (const auto& [target, p] : entries_) sum += p;
  return sum;
}

const Distribution* TranslationTable::find(std::string_view source) const {
  auto it = rows_.find(source);
  return it == rows_.end() ? nullptr : &it->second;
}

Distribution term_distribution(const TranslationTable& table,
                               std::string_view term) {
  const Distribution* d = table.find(term);
  return d ? *d : Distribution();
}

ProbabilisticQuery lookup_query(const TranslationTable& table,
                                const Tokens& terms) {
  ProbabilisticQuery query;
  query.terms = terms;
  for (const auto& term : terms) {
    query.distributions.push_back(term_distribution(table, term));
  }
  return query;
}

ProbabilisticQuery identity_query(const Tokens& terms) {
  ProbabilisticQuery query;
  query.terms = terms;
  for (const auto& term : terms) {
    query.distributions.emplace_back(
        std::map<std::string, double, std::less<>>{{term, 1.0}});
  }
  return query;
}

TranslationTable build_word_table(const AlignedPairCorpus& corpus) {
  std::map<std::string, double, std::less<>> occurrences;
  std::map<std::string, std::map<std::string, double, std::less<>>,
           std::less<>>
      mass;
  for (const AlignedPair& pair : corpus) {
    std::vector<std::vector<std::size_t>> links_of(pair.source.size());
    for (const auto& [i, j] : pair.links) {
      if (i >= pair.source.size() || j >= pair.target.size()) {
        throw Error("alignment link " + std::to_string(i) + "-" +
                    std::to_string(j) + " out of range");
      }
      links_of[i].push_back(j);
    }
    for (std::size_t i = 0; i < pair.source.size(); ++i) {
      const std::string& word = pair.source[i];
      occurrences[word] += 1.0;
      auto& row = mass[word];
      const double share = 1.0 / static_cast<double>(links_of[i].size());
      for (std::size_t j : links_of[i]) row[pair.target[j]] += share;
    }
  }
  std::map<std::string, Distribution, std::less<>> rows;
  for (const auto& [word, m] : occurrences) {
    std::map<std::string, double, std::less<>> entries;
    for (const auto& [target, k] : mass[word]) entries.emplace(target, k / m);
    rows.emplace(word, Distribution(std::move(entries)));
  }
  return TranslationTable(std::move(rows));
}

namespace {

void check_rule(const GrammarRule& rule) {
  for (const auto& [i, j] : rule.alignments) {
    if (i >= rule.source.size() || j >= rule.target.size()) {
      throw Error("rule alignment " + std::to_string(i) + "-" +
                  std::to_string(j) + " out of range");
    }
  }
  if (!(rule.likelihood >= 0.0) || !std::isfinite(rule.likelihood)) {
    throw Error("rule likelihood must be finite and nonnegative");
  }
}

}  // namespace

ProbabilisticQuery build_grammar_table(std::span<const GrammarRule> rules,
                                       const Tokens& terms) {
  for (const GrammarRule& rule : rules) check_rule(rule);
  ProbabilisticQuery query;
  query.terms = terms;
  for (const std::string& term : terms) {
    std::map<std::string, double, std::less<>> weights;
    for (const GrammarRule& rule : rules) {
      for (const auto& [i, j] : rule.alignments) {
        if (rule.source[i] == term) weights[rule.target[j]] += rule.likelihood;
      }
    }
    query.distributions.push_back(Distribution::normalized(weights));
  }
  return query;
}

ProbabilisticQuery build_nbest_table(
    std::span<const NBestDerivation> derivations, const Tokens& terms) {
  std::set<int> ranks;
  for (const NBestDerivation& d : derivations) {
    if (!ranks.insert(d.rank).second) {
      throw Error("duplicate derivation rank " + std::to_string(d.rank));
    }
    for (const GrammarRule& rule : d.rules) check_rule(rule);
  }
  ProbabilisticQuery query;
  query.terms = terms;
  for (const std::string& term : terms) {
    std::map<std::string, double, std::less<>> counts;
    for (const NBestDerivation& d : derivations) {
      for (const GrammarRule& rule : d.rules) {
        for (const auto& [i, j] : rule.alignments) {
          if (rule.source[i] == term) counts[rule.target[j]] += 1.0;
        }
      }
    }
    query.distributions.push_back(Distribution::normalized(counts));
  }
  return query;
}

std::vector<Tokens> mask_contexts(const Tokens& tokens, std::size_t focus_index,
                                  std::size_t window, std::size_t sample_count,
                                  std::uint64_t seed) {
  if (focus_index >= tokens.size()) {
    throw Error("focus index " + std::to_string(focus_index) +
                " outside a sentence of " + std::to_string(tokens.size()) +
                " tokens");
  }
  std::vector<std::size_t> context;
  std::size_t lo = focus_index >= window ? focus_index - window : 0;
  std::size_t hi = std::min(tokens.size() - 1, focus_index + window);
  for (std::size_t i = lo; i <= hi; ++i) {
    if (i != focus_index) context.push_back(i);
  }
  const std::size_t c = context.size();
  std::vector<Tokens> samples;
  if (c == 0 || sample_count == 0) return samples;

  auto render = [&](auto&& is_masked) {
    Tokens masked = tokens;
    for (std::size_t b = 0; b < c; ++b) {
      if (is_masked(b)) masked[context[b]] = std::string(kFillerToken);
    }
    samples.push_back(std::move(masked));
  };

  Rng rng(seed);
  if (c <= 62) {
    const std::uint64_t total = (std::uint64_t{1} << c) - 1;
    std::vector<std::uint64_t> masks;
    if (sample_count >= total) {
      for (std::uint64_t m = 1; m <= total; ++m) masks.push_back(m);
    } else if (total <= (std::uint64_t{1} << 20)) {
      std::vector<std::uint64_t> all(total);
      for (std::uint64_t m = 0; m < total; ++m) all[m] = m + 1;
      for (std::size_t s = 0; s < sample_count; ++s) {
        std::size_t pick = s + static_cast<std::size_t>(rng.below(total - s));
        std::swap(all[s], all[pick]);
        masks.push_back(all[s]);
      }
    } else {
      std::set<std::uint64_t> seen;
      while (masks.size() < sample_count) {
        std::uint64_t m = 1 + rng.below(total);
        if (seen.insert(m).second) masks.push_back(m);
      }
    }
    for (std::uint64_t m : masks) {
      render([m](std::size_t b) { return ((m >> b) & 1u) != 0; });
    }
    return samples;
  }

  // Too many positions for a bit mask; draw independent bits.
  std::set<std::vector<bool>> seen;
  while (samples.size() < sample_count) {
    std::vector<bool> bits(c);
    bool any = false;
    for (std::size_t b = 0; b < c; ++b) {
      bits[b] = (rng.next() & 1u) != 0;
      any = any || bits[b];
    }
    if (!any || !seen.insert(bits).second) continue;
    render([&bits](std::size_t b) { return bits[b]; });
  }
  return samples;
}

// ---------------------------------------------------------------------------
// File formats

TranslationTable read_table(std::istream& in, const std::string& source_name) {
  std::map<std::string, std::map<std::string, double, std::less<>>,
           std::less<>>
      raw;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    auto fields = split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(source_name, line_no,
                       "expected 'source<TAB>target<TAB>prob'");
    }
    double p = 0.0;
    try {
      p = parse_double(fields[2]);
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
    if (!raw[fields[0]].emplace(fields[1], p).second) {
      throw ParseError(source_name, line_no,
                       "duplicate entry " + fields[0] + " -> " + fields[1]);
    }
  });
  std::map<std::string, Distribution, std::less<>> rows;
  for (auto& [source, entries] : raw) {
    try {
      rows.emplace(source, Distribution(std::move(entries)));
    } catch (const Error& e) {
      throw Error(source_name + ": row '" + source + "': " + e.what());
    }
  }
  return TranslationTable(std::move(rows));
}

TranslationTable load_table(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_table(in, path.string());
}

void write_table(std::ostream& out, const TranslationTable& table) {
  for (const auto& [source, dist] : table.rows()) {
    for (const auto& [target, p] : dist.entries()) {
      out << source << '\t' << target << '\t' << format_double(p) << '\n';
    }
  }
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<AlignmentLink> parse_links(std::string_view text) {
  std::vector<AlignmentLink> links;
  for (const std::string& pair : split_whitespace(text)) {
    std::size_t dash = pair.find('-');
    if (dash == std::string::npos) {
      throw Error("alignment '" + pair + "' is not of the form i-j");
    }
    long long i = parse_integer(std::string_view(pair).substr(0, dash));
    long long j = parse_integer(std::string_view(pair).substr(dash + 1));
    if (i < 0 || j < 0) throw Error("negative alignment index in '" + pair + "'");
    links.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  return links;
}

std::string format_links(const std::vector<AlignmentLink>& links) {
  std::string out;
  for (std::size_t n = 0; n < links.size(); ++n) {
    if (n) out += ' ';
    out += std::to_string(links[n].first) + "-" + std::to_string(links[n].second);
  }
  return out;
}

}  // namespace

GrammarRule parse_grammar_rule(std::string_view line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = line.find("|||", start);
    if (bar == std::string_view::npos) {
      parts.push_back(trim(line.substr(start)));
      break;
    }
    parts.push_back(trim(line.substr(start, bar - start)));
    start = bar + 3;
  }
  if (parts.size() != 4) {
    throw Error("expected 'source ||| target ||| alignments ||| likelihood'");
  }
  GrammarRule rule;
  rule.source = split_whitespace(parts[0]);
  rule.target = split_whitespace(parts[1]);
  rule.alignments = parse_links(parts[2]);
  rule.likelihood = parse_double(parts[3]);
  if (rule.source.empty() || rule.target.empty()) {
    throw Error("rule with an empty side");
  }
  check_rule(rule);
  return rule;
}

std::string format_grammar_rule(const GrammarRule& rule) {
  return join(rule.source) + " ||| " + join(rule.target) + " ||| " +
         format_links(rule.alignments) + " ||| " +
         format_double(rule.likelihood);
}

std::vector<GrammarRule> read_grammar(std::istream& in,
                                      const std::string& source_name) {
  std::vector<GrammarRule> rules;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    try {
      rules.push_back(parse_grammar_rule(line));
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  });
  return rules;
}

std::vector<GrammarRule> load_grammar(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_grammar(in, path.string());
}

NBestLists read_nbest(std::istream& in, const std::string& source_name) {
  std::map<std::string, std::map<int, NBestDerivation>> grouped;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    auto fields = split_tabs(line);
    if (fields.size() != 3 || fields[0].empty()) {
      throw ParseError(source_name, line_no,
                       "expected 'question_id<TAB>rank<TAB>rule'");
    }
    try {
      long long rank = parse_integer(fields[1]);
      if (rank < 1 || rank > 10) throw Error("rank outside 1-10");
      NBestDerivation& d = grouped[fields[0]][static_cast<int>(rank)];
      d.rank = static_cast<int>(rank);
      d.rules.push_back(parse_grammar_rule(fields[2]));
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  });
  NBestLists lists;
  for (auto& [qid, by_rank] : grouped) {
    auto& out = lists[qid];
    for (auto& [rank, d] : by_rank) out.push_back(std::move(d));
  }
  return lists;
}

NBestLists load_nbest(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_nbest(in, path.string());
}

void write_nbest(std::ostream& out, const NBestLists& lists) {
  for (const auto& [qid, derivations] : lists) {
    for (const NBestDerivation& d : derivations) {
      for (const GrammarRule& rule : d.rules) {
        out << qid << '\t' << d.rank << '\t' << format_grammar_rule(rule)
            << '\n';
      }
    }
  }
}

AlignedPairCorpus read_aligned_corpus(std::istream& in,
                                      const std::string& source_name) {
  AlignedPairCorpus corpus;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(source_name, line_no,
                       "expected 'source<TAB>target<TAB>links'");
    }
    AlignedPair pair;
    pair.source = split_whitespace(fields[0]);
    pair.target = split_whitespace(fields[1]);
    try {
      pair.links = parse_links(fields[2]);
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
    for (const auto& [i, j] : pair.links) {
      if (i >= pair.source.size() || j >= pair.target.size()) {
        throw ParseError(source_name, line_no,
                         "link " + std::to_string(i) + "-" + std::to_string(j) +
                             " out of range");
      }
    }
    corpus.push_back(std::move(pair));
  });
  return corpus;
}

AlignedPairCorpus load_aligned_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_aligned_corpus(in, path.string());
}

void write_aligned_corpus(std::ostream& out, const AlignedPairCorpus& corpus) {
  for (const AlignedPair& pair : corpus) {
    out << join(pair.source) << '\t' << join(pair.target) << '\t'
        << format_links(pair.links) << '\n';
  }
}

void write_query(std::ostream& out, std::string_view question_id,
                 const ProbabilisticQuery& query) {
  for (std::size_t i = 0; i < query.terms.size(); ++i) {
    const Distribution& d = query.distributions[i];
    if (d.empty()) {
      out << question_id << '\t' << i << '\t' << query.terms[i] << "\t-\t0\n";
      continue;
    }
    for (const auto& [target, p] : d.entries()) {
      out << question_id << '\t' << i << '\t' << query.terms[i] << '\t'
          << target << '\t' << format_double(p) << '\n';
    }
  }
}

}  // namespace mlqa
