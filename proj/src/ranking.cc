#include "mlqa/ranking.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "mlqa/error.h"

namespace mlqa {

namespace {

int language_order(Language language) {
  switch (language) {
    case Language::en: return 0;
    case Language::ar: return 1;
    case Language::ch: return 2;
  }
  return 3;
}

std::optional<Language> list_language(const RankedList& list) {
  if (list.language) return list.language;
  if (list.entries.empty()) return std::nullopt;
  return list.entries.front().language;
}

struct MergeItem {
  const RankedEntry* entry;
  double key;
  std::size_t list;
  std::size_t position;
};

// Sorts by key descending, then language, list and position; keeps the
// first occurrence of every candidate and stops at n.
RankedList take_sorted(std::vector<MergeItem> items, std::size_t n,
                       const std::string& question_id) {
  std::stable_sort(items.begin(), items.end(),
                   [](const MergeItem& a, const MergeItem& b) {
                     if (a.key != b.key) return a.key > b.key;
                     int la = language_order(a.entry->language);
                     int lb = language_order(b.entry->language);
                     if (la != lb) return la < lb;
                     if (a.list != b.list) return a.list < b.list;
                     return a.position < b.position;
                   });
  RankedList out;
  out.question_id = question_id;
  std::unordered_set<std::string> seen;
  for (const MergeItem& item : items) {
    if (out.entries.size() >= n) break;
    if (!seen.insert(item.entry->candidate_id).second) continue;
    out.entries.push_back(*item.entry);
  }
  return out;
}

std::string common_question(std::span<const RankedList> lists) {
  std::string qid;
  for (const RankedList& list : lists) {
    if (list.question_id.empty()) continue;
    if (qid.empty()) {
      qid = list.question_id;
    } else if (qid != list.question_id) {
      throw Error("cannot merge lists of different questions (" + qid +
                  ", " + list.question_id + ")");
    }
  }
  return qid;
}

RankedList merge_by_key(std::span<const RankedList> lists, std::size_t n,
                        double english_weight) {
  std::vector<MergeItem> items;
  for (std::size_t l = 0; l < lists.size(); ++l) {
    for (std::size_t p = 0; p < lists[l].entries.size(); ++p) {
      const RankedEntry& e = lists[l].entries[p];
      double key = e.normalized_score;
      if (e.language == Language::en) key *= english_weight;
      items.push_back({&e, key, l, p});
    }
  }
  return take_sorted(std::move(items), n, common_question(lists));
}

}  // namespace

RankedList rank_scored(std::string question_id,
                       std::optional<Language> language,
                       std::vector<ScoredCandidate> candidates, std::size_t n) {
  if (n == 0) throw Error("ranking depth n must be at least 1");
  std::sort(candidates.begin(), candidates.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.candidate_id < b.candidate_id;
            });
  RankedList list;
  list.question_id = std::move(question_id);
  list.language = language;
  std::unordered_set<std::string> seen;
  for (auto& c : candidates) {
    if (list.entries.size() >= n) break;
    if (!seen.insert(c.candidate_id).second) {
      throw Error("candidate '" + c.candidate_id + "' ranked twice");
    }
    list.entries.push_back({std::move(c.candidate_id), c.language, c.score,
                            c.score});
  }
  return list;
}

RankedList rank(const EnsembleModel& model, std::string question_id,
                std::optional<Language> language,
                std::span<const RankInput> candidates, std::size_t n) {
  std::vector<ScoredCandidate> scored;
  scored.reserve(candidates.size());
  for (const RankInput& c : candidates) {
    scored.push_back({c.candidate_id, c.language, score(model, c.features)});
  }
  return rank_scored(std::move(question_id), language, std::move(scored), n);
}

RankedList normalize_scores(RankedList list) {
  if (list.entries.empty()) throw Error("cannot normalize an empty list");
  double lo = list.entries.front().raw_score;
  double hi = lo;
  for (const RankedEntry& e : list.entries) {
    lo = std::min(lo, e.raw_score);
    hi = std::max(hi, e.raw_score);
  }
  for (RankedEntry& e : list.entries) {
    e.normalized_score = hi > lo ? (e.raw_score - lo) / (hi - lo) : 1.0;
  }
  return list;
}

RankedList merge_uniform(std::span<const RankedList> lists, std::size_t n) {
  return merge_by_key(lists, n, 1.0);
}

RankedList merge_alternate(std::span<const RankedList> lists, std::size_t n) {
  std::vector<std::size_t> order(lists.size());
  for (std::size_t l = 0; l < order.size(); ++l) order[l] = l;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto la = list_language(lists[a]);
    auto lb = list_language(lists[b]);
    return (la ? language_order(*la) : 3) < (lb ? language_order(*lb) : 3);
  });
  RankedList out;
  out.question_id = common_question(lists);
  std::vector<std::size_t> cursor(lists.size(), 0);
  std::unordered_set<std::string> seen;
  bool progressed = true;
  while (out.entries.size() < n && progressed) {
    progressed = false;
    for (std::size_t l : order) {
      if (out.entries.size() >= n) break;
      const auto& entries = lists[l].entries;
      while (cursor[l] < entries.size() &&
             seen.count(entries[cursor[l]].candidate_id)) {
        ++cursor[l];
      }
      if (cursor[l] >= entries.size()) continue;
      seen.insert(entries[cursor[l]].candidate_id);
      out.entries.push_back(entries[cursor[l]++]);
      progressed = true;
    }
  }
  return out;
}

RankedList merge_english_first(std::span<const RankedList> lists,
                               std::size_t n, double threshold) {
  RankedList out;
  out.question_id = common_question(lists);
  std::vector<RankedList> rest;
  std::unordered_set<std::string> seen;
  for (const RankedList& list : lists) {
    if (list_language(list) != Language::en) {
      rest.push_back(list);
      continue;
    }
    RankedList below = list;
    below.entries.clear();
    for (const RankedEntry& e : list.entries) {
      if (e.normalized_score > threshold && out.entries.size() < n &&
          seen.insert(e.candidate_id).second) {
        out.entries.push_back(e);
      } else if (!seen.count(e.candidate_id)) {
        below.entries.push_back(e);
      }
    }
    rest.push_back(std::move(below));
  }
  if (out.entries.size() < n) {
    RankedList tail = merge_uniform(rest, n - out.entries.size());
    for (RankedEntry& e : tail.entries) {
      if (seen.insert(e.candidate_id).second) out.entries.push_back(std::move(e));
    }
  }
  return out;
}

RankedList merge_weighted(std::span<const RankedList> lists, std::size_t n,
                          double english_weight) {
  if (!(english_weight > 0.0)) throw Error("English weight must be positive");
  return merge_by_key(lists, n, english_weight);
}

std::string_view to_string(MergeStrategy strategy) {
  switch (strategy) {
    case MergeStrategy::uniform: return "uniform";
    case MergeStrategy::alternate: return "alternate";
    case MergeStrategy::english_first: return "english-first";
    case MergeStrategy::weighted: return "weighted";
  }
  return "?";
}

MergeStrategy parse_merge_strategy(std::string_view text) {
  if (text == "uniform") return MergeStrategy::uniform;
  if (text == "alternate") return MergeStrategy::alternate;
  if (text == "english-first" || text == "english_first") {
    return MergeStrategy::english_first;
  }
  if (text == "weighted") return MergeStrategy::weighted;
  throw Error("unknown merge strategy '" + std::string(text) + "'");
}

std::map<std::string, double> learn_merge_weight(
    std::span<const MergeQuestion> questions,
    std::span<const double> candidate_weights, std::size_t n, std::size_t k) {
  if (questions.size() < 2) {
    throw Error("learning a merge weight needs at least two questions");
  }
  if (candidate_weights.empty()) throw Error("no candidate merge weights");
  std::vector<double> weights(candidate_weights.begin(), candidate_weights.end());
  std::sort(weights.begin(), weights.end());

  // ap[q][w]
  std::vector<std::vector<double>> ap(questions.size());
  for (std::size_t q = 0; q < questions.size(); ++q) {
    for (double w : weights) {
      RankedList merged = merge_weighted(questions[q].lists, n, w);
      std::vector<bool> relevance;
      for (const RankedEntry& e : merged.entries) {
        relevance.push_back(questions[q].relevant.count(e.candidate_id) > 0);
      }
      ap[q].push_back(ap_k(relevance, k, questions[q].total_relevant));
    }
  }

  std::map<std::string, double> chosen;
  for (std::size_t q = 0; q < questions.size(); ++q) {
    std::size_t best = 0;
    double best_sum = -1.0;
    for (std::size_t w = 0; w < weights.size(); ++w) {
      double sum = 0.0;
      for (std::size_t other = 0; other < questions.size(); ++other) {
        if (other != q) sum += ap[other][w];
      }
      if (sum > best_sum) {
        best_sum = sum;
        best = w;
      }
    }
    chosen[questions[q].question_id] = weights[best];
  }
  return chosen;
}

LanguageRatio language_ratio(const RankedList& list) {
  return language_ratio(std::span<const RankedList>(&list, 1));
}

LanguageRatio language_ratio(std::span<const RankedList> lists) {
  std::size_t counts[3] = {0, 0, 0};
  std::size_t total = 0;
  for (const RankedList& list : lists) {
    for (const RankedEntry& e : list.entries) {
      ++counts[language_order(e.language)];
      ++total;
    }
  }
  if (total == 0) throw Error("language ratio of an empty list");
  const double scale = 100.0 / static_cast<double>(total);
  LanguageRatio ratio;
  ratio.en = static_cast<double>(counts[0]) * scale;
  ratio.ar = static_cast<double>(counts[1]) * scale;
  ratio.ch = static_cast<double>(counts[2]) * scale;
  return ratio;
}

void write_ranked_lists(std::ostream& out, std::span<const RankedList> lists) {
  for (const RankedList& list : lists) {
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      const RankedEntry& e = list.entries[r];
      out << list.question_id << '\t' << r + 1 << '\t' << e.candidate_id << '\t'
          << to_string(e.language) << '\t' << format_double(e.raw_score) << '\t'
          << format_double(e.normalized_score) << '\n';
    }
  }
}

std::vector<RankedList> read_ranked_lists(std::istream& in,
                                          const std::string& source_name) {
  std::vector<RankedList> lists;
  std::map<std::string, std::size_t> index;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    auto fields = split_tabs(line);
    if (fields.size() != 6) {
      throw ParseError(source_name, line_no,
                       "expected question, rank, candidate, language, raw and "
                       "normalized score");
    }
    auto [it, inserted] = index.emplace(fields[0], lists.size());
    if (inserted) {
      lists.emplace_back();
      lists.back().question_id = fields[0];
    }
    RankedList& list = lists[it->second];
    RankedEntry e;
    try {
      long long r = parse_integer(fields[1]);
      if (r != static_cast<long long>(list.entries.size()) + 1) {
        throw Error("ranks must run 1, 2, ... within a question");
      }
      e.candidate_id = fields[2];
      e.language = parse_language(fields[3]);
      e.raw_score = parse_double(fields[4]);
      e.normalized_score = parse_double(fields[5]);
    } catch (const Error& err) {
      throw ParseError(source_name, line_no, err.what());
    }
    list.entries.push_back(std::move(e));
  });
  for (RankedList& list : lists) {
    bool same = true;
    for (const RankedEntry& e : list.entries) {
      same = same && e.language == list.entries.front().language;
    }
    if (same) list.language = list.entries.front().language;
  }
  return lists;
}

std::vector<RankedList> load_ranked_lists(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_ranked_lists(in, path.string());
}

}  // namespace mlqa
