#include "dlr/retrieval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <thread>

#include "dlr/error.hpp"

namespace dlr {
namespace {

struct Hit {
  float score;
  std::uint32_t id_rank;
  std::uint32_t row;
};

// Strict total order: higher score first, then lower id rank.
inline bool better(const Hit& a, const Hit& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id_rank < b.id_rank;
}

// Bounded heap whose top is the worst retained hit.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) { heap_.reserve(k); }

  void push(const Hit& h) {
    if (k_ == 0) return;
    if (heap_.size() < k_) {
      heap_.push_back(h);
      std::push_heap(heap_.begin(), heap_.end(), better);
    } else if (better(h, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), better);
      heap_.back() = h;
      std::push_heap(heap_.begin(), heap_.end(), better);
    }
  }

  std::vector<Hit> take() && { return std::move(heap_); }

 private:
  std::size_t k_;
  std::vector<Hit> heap_;
};

struct QueryView {
  std::vector<float> values;
  std::vector<std::uint16_t> indices;
  std::uint32_t lexical_dims = 0;
  std::uint32_t total_dims = 0;
};

QueryView prepare_query(const Index& index, const HybridVector& q) {
  q.validate();
  const auto layout = index.layout();
  if (!q.layout.same_shape(layout)) {
    throw DimensionError("query layout (M=" + std::to_string(q.layout.lexical_dims) + ", D=" +
                         std::to_string(q.layout.semantic_dims) + ") does not match index (M=" +
                         std::to_string(layout.lexical_dims) + ", D=" +
                         std::to_string(layout.semantic_dims) + ")");
  }
  QueryView v;
  v.lexical_dims = layout.lexical_dims;
  v.total_dims = layout.total_dims();
  v.values.assign(q.values.begin(), q.values.end());
  v.indices.reserve(q.indices.size());
  for (std::uint32_t i : q.indices) {
    if (i >= index.header().slice_width) {
      throw BoundsError("query index " + std::to_string(i) + " >= N=" +
                        std::to_string(index.header().slice_width));
    }
    v.indices.push_back(static_cast<std::uint16_t>(i));
  }
  return v;
}

float exact_score(const QueryView& q, const Index& index, std::size_t row) {
  const float* dv = index.values_row(row).data();
  const std::uint16_t* di = index.indices_row(row).data();
  float s = 0.0f;
  for (std::uint32_t m = 0; m < q.lexical_dims; ++m) {
    if (q.indices[m] == di[m]) s += q.values[m] * dv[m];
  }
  for (std::uint32_t j = q.lexical_dims; j < q.total_dims; ++j) s += q.values[j] * dv[j];
  return s;
}

unsigned resolve_workers(unsigned requested, std::size_t docs) {
  unsigned w = requested;
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  if (docs < w) w = static_cast<unsigned>(std::max<std::size_t>(docs, 1));
  return w;
}

// Scores every row with `score_row` across `workers` contiguous shards and
// merges into a sorted top-k.
template <typename ScoreRow>
std::vector<Hit> scan_top_k(const Index& index, std::size_t k, unsigned workers,
                            const ScoreRow& score_row) {
  const std::size_t n = index.size();
  k = std::min(k, n);
  if (k == 0) return {};
  const unsigned shards = resolve_workers(workers, n);

  std::vector<std::vector<Hit>> partial(shards);
  auto run_shard = [&](unsigned s) {
    const std::size_t begin = n * s / shards;
    const std::size_t end = n * (s + 1) / shards;
    TopK top(k);
    for (std::size_t row = begin; row < end; ++row) {
      top.push({score_row(row), index.id_rank(row), static_cast<std::uint32_t>(row)});
    }
    partial[s] = std::move(top).take();
  };

  if (shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(shards);
    for (unsigned s = 0; s < shards; ++s) pool.emplace_back(run_shard, s);
  }

  std::vector<Hit> merged;
  for (auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
  std::sort(merged.begin(), merged.end(), better);
  if (merged.size() > k) merged.resize(k);
  return merged;
}

RankedList to_ranked(const Index& index, const std::vector<Hit>& hits) {
  RankedList out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back({index.doc_ids()[h.row], h.score});
  return out;
}

void check_params(const TwoStageParams& p) {
  if (!(p.theta >= 0.0) || !std::isfinite(p.theta)) {
    throw ParameterError("theta must be a finite value >= 0");
  }
}

std::vector<Hit> stage_one(const Index& index, const QueryView& q, const TwoStageParams& params,
                           unsigned workers) {
  if (params.first_stage == FirstStage::kValueIp) {
    return scan_top_k(index, params.candidates, workers, [&](std::size_t row) {
      const float* dv = index.values_row(row).data();
      float s = 0.0f;
      for (std::uint32_t j = 0; j < q.total_dims; ++j) s += q.values[j] * dv[j];
      return s;
    });
  }
  // Filtered dims are chosen once per query; only those columns are read.
  std::vector<std::uint32_t> lexical;
  std::vector<std::uint32_t> semantic;
  for (std::uint32_t m = 0; m < q.lexical_dims; ++m) {
    if (q.values[m] > params.theta) lexical.push_back(m);
  }
  for (std::uint32_t j = q.lexical_dims; j < q.total_dims; ++j) {
    if (std::abs(q.values[j]) > params.theta) semantic.push_back(j);
  }
  return scan_top_k(index, params.candidates, workers, [&](std::size_t row) {
    const float* dv = index.values_row(row).data();
    const std::uint16_t* di = index.indices_row(row).data();
    float s = 0.0f;
    for (std::uint32_t m : lexical) {
      if (q.indices[m] == di[m]) s += q.values[m] * dv[m];
    }
    for (std::uint32_t j : semantic) s += q.values[j] * dv[j];
    return s;
  });
}

}  // namespace

std::string_view to_string(FirstStage s) {
  return s == FirstStage::kValueIp ? "value_ip" : "approx_gip";
}

FirstStage parse_first_stage(std::string_view name) {
  if (name == "approx_gip") return FirstStage::kApproxGip;
  if (name == "value_ip") return FirstStage::kValueIp;
  throw ParameterError("unknown first stage '" + std::string(name) +
                       "' (expected approx_gip or value_ip)");
}

RankedList search_exact(const Index& index, const HybridVector& query, std::size_t k,
                        const SearchOptions& options) {
  const auto q = prepare_query(index, query);
  return to_ranked(index, scan_top_k(index, k, options.workers, [&](std::size_t row) {
                     return exact_score(q, index, row);
                   }));
}

RankedList first_stage(const Index& index, const HybridVector& query,
                       const TwoStageParams& params, const SearchOptions& options) {
  check_params(params);
  const auto q = prepare_query(index, query);
  return to_ranked(index, stage_one(index, q, params, options.workers));
}

RankedList search_two_stage(const Index& index, const HybridVector& query,
                            const TwoStageParams& params, const SearchOptions& options) {
  check_params(params);
  const auto q = prepare_query(index, query);
  auto hits = stage_one(index, q, params, options.workers);
  for (auto& h : hits) h.score = exact_score(q, index, h.row);
  std::sort(hits.begin(), hits.end(), better);
  if (hits.size() > params.k) hits.resize(params.k);
  return to_ranked(index, hits);
}

std::string format_score(float score) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, score);
  return std::string(buf, res.ptr);
}

void write_trec_run(std::ostream& out, std::string_view query_id, const RankedList& results,
                    std::string_view tag) {
  std::size_t rank = 1;
  for (const auto& r : results) {
    out << query_id << " Q0 " << r.doc_id << ' ' << rank++ << ' ' << format_score(r.score) << ' '
        << tag << '\n';
  }
}

}  // namespace dlr
