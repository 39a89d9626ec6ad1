#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dlr {

/// query id -> document ids in rank order.
using Run = std::map<std::string, std::vector<std::string>>;

/// query id -> (doc id -> grade >= 0).
using Qrels = std::map<std::string, std::map<std::string, int>>;

/// Parses TREC 6-column run lines (`qid Q0 docid rank score tag`). Each
/// query's documents are ordered by the rank column, then by score
/// descending. Throws ParseError with the line number.
Run parse_run(std::istream& in, const std::string& source = "<run>");
Run read_run(const std::filesystem::path& path);

/// Parses TREC 4-column qrels (`qid 0 docid grade`).
Qrels parse_qrels(std::istream& in, const std::string& source = "<qrels>");
Qrels read_qrels(const std::filesystem::path& path);

struct MetricSpec {
  enum class Kind { kMrr, kRecall, kCappedRecall, kNdcg };
  Kind kind = Kind::kMrr;
  std::size_t k = 10;
  int relevance_threshold = 1;  // grade >= threshold counts as relevant

  std::string name() const;
};

/// Accepts mrr@K, recall@K, capped_recall@K and ndcg@K.
MetricSpec parse_metric(std::string_view name);

struct MetricResult {
  std::map<std::string, double> per_query;
  double mean = 0.0;
};

/// Evaluates one metric. Query sets follow trec_eval conventions:
/// MRR and recall average over judged queries with at least one relevant
/// doc (absent from the run scores 0); nDCG averages over judged queries
/// with nonzero ideal DCG.
MetricResult evaluate(const Run& run, const Qrels& qrels, const MetricSpec& metric);

double mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k, int relevance_threshold = 1);
double recall_at_k(const Run& run, const Qrels& qrels, std::size_t k,
                   int relevance_threshold = 1);
/// Recall with denominator min(|relevant|, k).
double capped_recall_at_k(const Run& run, const Qrels& qrels, std::size_t k,
                          int relevance_threshold = 1);
/// Exponential gain 2^grade - 1, discount log2(rank + 1).
double ndcg_at_k(const Run& run, const Qrels& qrels, std::size_t k);

}  // namespace dlr
