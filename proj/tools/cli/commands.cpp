#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <unordered_map>

#include "dlr/densify.hpp"
#include "dlr/error.hpp"
#include "dlr/eval.hpp"
#include "dlr/io.hpp"
#include "dlr/scoring.hpp"

namespace dlr::cli {
namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string format_weight(double w) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, res.ptr);
}

std::uint32_t parse_discard(const std::string& text) {
  std::uint32_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("--discard must be a nonnegative integer or 'auto', got '" + text + "'");
  }
  return v;
}

std::unordered_map<std::string, const DenseVector*> by_id(const std::vector<DenseVector>& vs) {
  std::unordered_map<std::string, const DenseVector*> m;
  for (const auto& v : vs) m.emplace(v.id, &v);
  return m;
}

HybridVector to_hybrid(const Dlr& lex, const IndexHeader& header, const std::string& id,
                       const std::unordered_map<std::string, const DenseVector*>& semantic) {
  if (header.semantic_dims == 0) return as_hybrid(lex);
  auto it = semantic.find(id);
  if (it == semantic.end()) {
    throw BuildError("no semantic vector for '" + id + "'");
  }
  if (it->second->values.size() != header.semantic_dims) {
    throw DimensionError("semantic vector for '" + id + "' has " +
                         std::to_string(it->second->values.size()) + " dims, index expects " +
                         std::to_string(header.semantic_dims));
  }
  return fuse(lex, *it->second, static_cast<double>(header.lambda));
}

// Term-weight listing ordered by weight descending, then term-id ascending.
void print_terms(std::ostream& out, const std::string& id, const SparseVector& v,
                 std::size_t top, const CorpusStats* stats) {
  auto entries = v.entries;
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SparseEntry& a, const SparseEntry& b) { return a.weight > b.weight; });
  if (entries.size() > top) entries.resize(top);
  for (const auto& e : entries) {
    out << id << '\t';
    if (stats && e.term < stats->vocab_size()) {
      out << stats->terms[e.term];
    } else {
      out << e.term;
    }
    out << '\t' << format_weight(e.weight) << '\n';
  }
}

}  // namespace

std::optional<std::uint32_t> VocabSource::resolve() const {
  if (vocab_size) return vocab_size;
  if (vocab) return io::read_stats_jsonl(*vocab).vocab_size();
  return std::nullopt;
}

DensificationConfig config_for_index(const IndexHeader& header,
                                     std::optional<std::uint32_t> vocab_size) {
  const std::uint64_t kept = static_cast<std::uint64_t>(header.lexical_dims) * header.slice_width;
  const std::uint64_t v = vocab_size.value_or(static_cast<std::uint32_t>(kept));
  if (v < kept) {
    throw ConfigError("vocabulary size " + std::to_string(v) + " is smaller than M*N = " +
                      std::to_string(kept) + " recorded in the index");
  }
  return DensificationConfig::with_discard(static_cast<std::uint32_t>(v), header.lexical_dims,
                                           static_cast<std::uint32_t>(v - kept), header.strategy,
                                           header.seed);
}

unsigned threads_from_env() {
  const char* env = std::getenv("DLR_THREADS");
  if (!env) return 0;
  unsigned v = 0;
  const std::string_view s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() ? v : 0;
}

void cmd_weight(const WeightOptions& opt, std::ostream& log) {
  opt.bm25.validate();
  const auto docs = io::read_corpus_jsonl(opt.corpus);
  if (docs.empty()) throw ParameterError("corpus '" + opt.corpus.string() + "' is empty");

  if (opt.vocab) {
    const auto stats = io::read_stats_jsonl(*opt.vocab);
    std::vector<SparseVector> queries;
    queries.reserve(docs.size());
    for (const auto& d : docs) queries.push_back(vectorize_query(d.id, tokenize(d.text), stats));
    auto out = open_output(opt.out);
    io::write_sparse_jsonl(out, queries);
    log << "weighted " << queries.size() << " queries against " << stats.vocab_size()
        << " terms\n";
    return;
  }

  const auto vc = vectorize_corpus(docs, opt.bm25, opt.seed,
                                   opt.sorted_ids ? IdOrder::kSorted : IdOrder::kShuffled);
  auto out = open_output(opt.out);
  io::write_sparse_jsonl(out, vc.vectors);
  const fs::path stats_path = opt.stats_out.value_or(fs::path(opt.out.string() + ".vocab.jsonl"));
  auto stats_out = open_output(stats_path);
  io::write_stats_jsonl(stats_out, vc.stats);
  log << "weighted " << vc.vectors.size() << " documents; vocabulary " << vc.stats.vocab_size()
      << " terms -> " << stats_path.string() << "\n";
}

Index cmd_index(const IndexOptions& opt, std::ostream& log) {
  const auto vocab_size = opt.vocab.resolve();
  if (!vocab_size) throw ConfigError("index needs --vocab-size or --vocab");
  const auto config =
      opt.discard == "auto"
          ? DensificationConfig::derive(*vocab_size, opt.dims, opt.strategy, opt.seed)
          : DensificationConfig::with_discard(*vocab_size, opt.dims, parse_discard(opt.discard),
                                              opt.strategy, opt.seed);
  const SliceAssignment assignment(config);
  const auto vectors = io::read_sparse_jsonl(opt.vectors, *vocab_size);

  std::vector<DenseVector> semantic;
  HybridLayout layout{config.target_dims, 0, 0.0};
  if (opt.semantic) {
    semantic = io::read_dense_jsonl(*opt.semantic);
    layout.semantic_dims =
        semantic.empty() ? 0 : static_cast<std::uint32_t>(semantic.front().values.size());
    layout.lambda = opt.lambda;
  }
  IndexBuilder builder(config, layout);
  const auto sem = by_id(semantic);
  for (const auto& v : vectors) {
    const auto lex = densify(v, assignment);
    if (layout.semantic_dims == 0) {
      builder.add(v.id, as_hybrid(lex));
    } else {
      auto it = sem.find(v.id);
      if (it == sem.end()) throw BuildError("no semantic vector for document '" + v.id + "'");
      builder.add(v.id, fuse(lex, *it->second, layout.lambda));
    }
  }
  if (builder.saturated_count() > 0) {
    log << "warning: " << builder.saturated_count()
        << " values exceeded the half-precision range and were clamped to +/-65504\n";
  }
  auto index = std::move(builder).finish();
  save_index(index, opt.out);
  log << "indexed " << index.size() << " documents (M=" << config.target_dims
      << ", N=" << config.slice_width << ", D=" << layout.semantic_dims
      << ", discard=" << config.discard_count << ") -> " << opt.out.string() << "\n";
  return index;
}

void cmd_search(const SearchCommandOptions& opt, std::ostream& out, std::ostream& log) {
  const auto index = load_index(opt.index);
  const auto& h = index.header();
  if (opt.dims && *opt.dims != h.lexical_dims) {
    throw ConfigError("--dims " + std::to_string(*opt.dims) + " does not match index M=" +
                      std::to_string(h.lexical_dims));
  }
  if (opt.strategy && *opt.strategy != h.strategy) {
    throw ConfigError("--strategy " + std::string(to_string(*opt.strategy)) +
                      " does not match index strategy " + std::string(to_string(h.strategy)));
  }
  if (opt.seed && *opt.seed != h.seed) {
    throw ConfigError("--seed " + std::to_string(*opt.seed) + " does not match index seed " +
                      std::to_string(h.seed));
  }
  const auto vocab_size = opt.vocab.resolve();
  const auto config = config_for_index(h, vocab_size);
  const SliceAssignment assignment(config);
  const auto queries = io::read_sparse_jsonl(opt.queries, config.vocab_size);

  std::vector<DenseVector> semantic;
  if (h.semantic_dims > 0) {
    if (!opt.query_semantic) {
      throw ConfigError("index has a " + std::to_string(h.semantic_dims) +
                        "-dim semantic block; pass --query-semantic");
    }
    semantic = io::read_dense_jsonl(*opt.query_semantic);
  }
  const auto sem = by_id(semantic);

  const SearchOptions so{opt.threads};
  for (const auto& q : queries) {
    const auto hq = to_hybrid(densify(q, assignment), h, q.id, sem);
    const auto results = opt.exact ? search_exact(index, hq, opt.two_stage.k, so)
                                   : search_two_stage(index, hq, opt.two_stage, so);
    write_trec_run(out, q.id, results, opt.tag);
  }
  log << "searched " << queries.size() << " queries over " << index.size() << " documents ("
      << (opt.exact ? std::string("exact GIP")
                    : "two-stage " + std::string(to_string(opt.two_stage.first_stage)) +
                          " theta=" + format_weight(opt.two_stage.theta) +
                          " K=" + std::to_string(opt.two_stage.candidates))
      << ", k=" << opt.two_stage.k << ")\n";
}

void cmd_eval(const EvalOptions& opt, std::ostream& out) {
  std::vector<MetricSpec> metrics;
  for (const auto& name : opt.metrics) {
    auto m = parse_metric(name);
    m.relevance_threshold = opt.relevance_threshold;
    metrics.push_back(m);
  }
  const auto run = read_run(opt.run);
  const auto qrels = read_qrels(opt.qrels);
  for (const auto& m : metrics) {
    const auto r = evaluate(run, qrels, m);
    if (opt.per_query) {
      for (const auto& [qid, v] : r.per_query) {
        out << m.name() << '\t' << qid << '\t' << format_weight(v) << '\n';
      }
    }
    out << m.name() << "\tall\t" << format_weight(r.mean) << '\n';
  }
}

void cmd_reconstruct(const ReconstructOptions& opt, std::ostream& out) {
  if (opt.doc_id.has_value() == opt.queries.has_value()) {
    throw ParameterError("reconstruct needs exactly one of --doc or --queries");
  }
  const auto index = load_index(opt.index);
  std::optional<CorpusStats> stats;
  if (opt.vocab.vocab) stats = io::read_stats_jsonl(*opt.vocab.vocab);
  const auto vocab_size = stats ? std::optional<std::uint32_t>(stats->vocab_size())
                                : opt.vocab.vocab_size;
  const auto config = config_for_index(index.header(), vocab_size);
  const SliceAssignment assignment(config);
  const CorpusStats* names = stats ? &*stats : nullptr;

  if (opt.doc_id) {
    const auto row = index.find(*opt.doc_id);
    if (!row) throw ParameterError("unknown document id '" + *opt.doc_id + "'");
    const auto doc = index.document(*row);
    Dlr lex;
    lex.values.assign(doc.values.begin(), doc.values.begin() + config.target_dims);
    lex.indices = doc.indices;
    print_terms(out, *opt.doc_id, reconstruct(lex, assignment, *opt.doc_id), opt.top, names);
    return;
  }
  for (const auto& q : io::read_sparse_jsonl(*opt.queries, config.vocab_size)) {
    print_terms(out, q.id, reconstruct(densify(q, assignment), assignment, q.id), opt.top, names);
  }
}

void cmd_inspect(const fs::path& index, std::ostream& out) {
  out << describe_header(load_index(index).header());
}

}  // namespace dlr::cli
