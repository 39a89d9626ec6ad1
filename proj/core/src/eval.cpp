#include "dlr/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dlr/error.hpp"

namespace dlr {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

const std::vector<std::string> kEmpty;

const std::vector<std::string>& ranked_docs(const Run& run, const std::string& qid) {
  auto it = run.find(qid);
  return it == run.end() ? kEmpty : it->second;
}

std::size_t relevant_count(const std::map<std::string, int>& judged, int threshold) {
  return static_cast<std::size_t>(std::count_if(
      judged.begin(), judged.end(), [threshold](const auto& p) { return p.second >= threshold; }));
}

int grade_of(const std::map<std::string, int>& judged, const std::string& doc) {
  auto it = judged.find(doc);
  return it == judged.end() ? 0 : it->second;
}

double mean_of(const std::map<std::string, double>& per_query) {
  if (per_query.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [q, v] : per_query) sum += v;
  return sum / static_cast<double>(per_query.size());
}

std::map<std::string, double> reciprocal_rank(const Run& run, const Qrels& qrels, std::size_t k,
                                              int threshold) {
  std::map<std::string, double> out;
  for (const auto& [qid, judged] : qrels) {
    if (relevant_count(judged, threshold) == 0) continue;
    const auto& docs = ranked_docs(run, qid);
    double rr = 0.0;
    for (std::size_t i = 0; i < docs.size() && i < k; ++i) {
      if (grade_of(judged, docs[i]) >= threshold) {
        rr = 1.0 / static_cast<double>(i + 1);
        break;
      }
    }
    out[qid] = rr;
  }
  return out;
}

std::map<std::string, double> recall(const Run& run, const Qrels& qrels, std::size_t k,
                                     int threshold, bool capped) {
  std::map<std::string, double> out;
  for (const auto& [qid, judged] : qrels) {
    const std::size_t rel = relevant_count(judged, threshold);
    if (rel == 0) continue;
    const auto& docs = ranked_docs(run, qid);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < docs.size() && i < k; ++i) {
      if (grade_of(judged, docs[i]) >= threshold) ++hit;
    }
    const std::size_t denom = capped ? std::min(rel, k) : rel;
    out[qid] = static_cast<double>(hit) / static_cast<double>(denom);
  }
  return out;
}

std::map<std::string, double> ndcg(const Run& run, const Qrels& qrels, std::size_t k) {
  auto gain = [](int grade) { return grade > 0 ? std::exp2(grade) - 1.0 : 0.0; };
  auto discount = [](std::size_t rank) { return std::log2(static_cast<double>(rank) + 1.0); };
  std::map<std::string, double> out;
  for (const auto& [qid, judged] : qrels) {
    std::vector<int> grades;
    for (const auto& [doc, g] : judged) grades.push_back(g);
    std::sort(grades.rbegin(), grades.rend());
    double ideal = 0.0;
    for (std::size_t i = 0; i < grades.size() && i < k; ++i) ideal += gain(grades[i]) / discount(i + 1);
    if (ideal <= 0.0) continue;
    const auto& docs = ranked_docs(run, qid);
    double dcg = 0.0;
    for (std::size_t i = 0; i < docs.size() && i < k; ++i) {
      dcg += gain(grade_of(judged, docs[i])) / discount(i + 1);
    }
    out[qid] = dcg / ideal;
  }
  return out;
}

}  // namespace

Run parse_run(std::istream& in, const std::string& source) {
  struct Row {
    long rank;
    double score;
    std::string doc;
  };
  std::map<std::string, std::vector<Row>> rows;
  std::map<std::string, std::map<std::string, std::size_t>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 6) {
      throw ParseError(source, line_no,
                       "expected 6 columns (qid Q0 docid rank score tag), found " +
                           std::to_string(f.size()));
    }
    Row r;
    if (!parse_number(f[3], r.rank)) throw ParseError(source, line_no, "bad rank '" + std::string(f[3]) + "'");
    if (!parse_number(f[4], r.score)) throw ParseError(source, line_no, "bad score '" + std::string(f[4]) + "'");
    r.doc = std::string(f[2]);
    const std::string qid(f[0]);
    auto [it, fresh] = seen[qid].emplace(r.doc, line_no);
    if (!fresh) {
      throw ParseError(source, line_no,
                       "duplicate document '" + r.doc + "' for query '" + qid +
                           "' (first seen on line " + std::to_string(it->second) + ")");
    }
    rows[qid].push_back(std::move(r));
  }
  Run run;
  for (auto& [qid, list] : rows) {
    std::stable_sort(list.begin(), list.end(), [](const Row& a, const Row& b) {
      if (a.rank != b.rank) return a.rank < b.rank;
      return a.score > b.score;
    });
    auto& docs = run[qid];
    for (auto& r : list) docs.push_back(std::move(r.doc));
  }
  return run;
}

Run read_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open run file '" + path.string() + "'");
  return parse_run(in, path.string());
}

Qrels parse_qrels(std::istream& in, const std::string& source) {
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 4) {
      throw ParseError(source, line_no,
                       "expected 4 columns (qid 0 docid grade), found " + std::to_string(f.size()));
    }
    int grade = 0;
    if (!parse_number(f[3], grade) || grade < 0) {
      throw ParseError(source, line_no, "bad grade '" + std::string(f[3]) + "'");
    }
    qrels[std::string(f[0])][std::string(f[2])] = grade;
  }
  return qrels;
}

Qrels read_qrels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open qrels file '" + path.string() + "'");
  return parse_qrels(in, path.string());
}

std::string MetricSpec::name() const {
  std::string base;
  switch (kind) {
    case Kind::kMrr:
      base = "mrr";
      break;
    case Kind::kRecall:
      base = "recall";
      break;
    case Kind::kCappedRecall:
      base = "capped_recall";
      break;
    case Kind::kNdcg:
      base = "ndcg";
      break;
  }
  return base + "@" + std::to_string(k);
}

MetricSpec parse_metric(std::string_view name) {
  const auto at = name.find('@');
  MetricSpec m;
  if (at == std::string_view::npos || !parse_number(name.substr(at + 1), m.k) || m.k == 0) {
    throw ParameterError("metric '" + std::string(name) +
                         "' must look like mrr@10, recall@1000, capped_recall@100 or ndcg@10");
  }
  const auto base = name.substr(0, at);
  if (base == "mrr") {
    m.kind = MetricSpec::Kind::kMrr;
  } else if (base == "recall") {
    m.kind = MetricSpec::Kind::kRecall;
  } else if (base == "capped_recall") {
    m.kind = MetricSpec::Kind::kCappedRecall;
  } else if (base == "ndcg") {
    m.kind = MetricSpec::Kind::kNdcg;
  } else {
    throw ParameterError("unknown metric '" + std::string(base) +
                         "' (expected mrr, recall, capped_recall or ndcg)");
  }
  return m;
}

MetricResult evaluate(const Run& run, const Qrels& qrels, const MetricSpec& metric) {
  if (metric.k == 0) throw ParameterError("metric cutoff k must be >= 1");
  MetricResult r;
  switch (metric.kind) {
    case MetricSpec::Kind::kMrr:
      r.per_query = reciprocal_rank(run, qrels, metric.k, metric.relevance_threshold);
      break;
    case MetricSpec::Kind::kRecall:
      r.per_query = recall(run, qrels, metric.k, metric.relevance_threshold, false);
      break;
    case MetricSpec::Kind::kCappedRecall:
      r.per_query = recall(run, qrels, metric.k, metric.relevance_threshold, true);
      break;
    case MetricSpec::Kind::kNdcg:
      r.per_query = ndcg(run, qrels, metric.k);
      break;
  }
  r.mean = mean_of(r.per_query);
  return r;
}

double mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k, int relevance_threshold) {
  return evaluate(run, qrels, {MetricSpec::Kind::kMrr, k, relevance_threshold}).mean;
}

double recall_at_k(const Run& run, const Qrels& qrels, std::size_t k, int relevance_threshold) {
  return evaluate(run, qrels, {MetricSpec::Kind::kRecall, k, relevance_threshold}).mean;
}

double capped_recall_at_k(const Run& run, const Qrels& qrels, std::size_t k,
                          int relevance_threshold) {
  return evaluate(run, qrels, {MetricSpec::Kind::kCappedRecall, k, relevance_threshold}).mean;
}

double ndcg_at_k(const Run& run, const Qrels& qrels, std::size_t k) {
  return evaluate(run, qrels, {MetricSpec::Kind::kNdcg, k, 1}).mean;
}

}  // namespace dlr
