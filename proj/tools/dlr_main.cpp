// dlr: weight -> index -> search -> eval -> reconstruct pipeline.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cli/commands.hpp"
#include "dlr/error.hpp"

namespace {

using namespace dlr;
using namespace dlr::cli;

void add_vocab_flags(CLI::App* cmd, VocabSource& vocab) {
  auto* size = cmd->add_option("--vocab-size", vocab.vocab_size, "Vocabulary size |V|");
  auto* file = cmd->add_option("--vocab", vocab.vocab, "Vocabulary sidecar from `dlr weight`")
                   ->check(CLI::ExistingFile);
  size->excludes(file);
}

const CLI::IsMember kStrategies({"contiguous", "stride", "random"});

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Densified lexical retrieval: densify sparse vectors, index, search with GIP"};
  app.require_subcommand(1);

  WeightOptions weight;
  auto* w = app.add_subcommand("weight", "BM25-weight a JSONL corpus into sparse vectors");
  w->add_option("corpus", weight.corpus, "Corpus JSONL {id, text}")->required()->check(CLI::ExistingFile);
  w->add_option("-o,--out", weight.out, "Sparse-vector JSONL output")->required();
  w->add_option("--stats", weight.stats_out, "Vocabulary sidecar path (default <out>.vocab.jsonl)");
  auto* wv = w->add_option("--vocab", weight.vocab, "Weight as queries against this vocabulary")
                 ->check(CLI::ExistingFile);
  w->add_option("--k1", weight.bm25.k1, "BM25 k1")->capture_default_str();
  w->add_option("--b", weight.bm25.b, "BM25 b")->capture_default_str();
  w->add_option("--seed", weight.seed, "Seed for term-id assignment")->capture_default_str();
  auto* ws = w->add_flag("--sorted-ids", weight.sorted_ids, "Assign term-ids in lexicographic order");
  wv->excludes(ws);
  wv->excludes("--stats");

  IndexOptions index;
  auto* ix = app.add_subcommand("index", "Densify sparse vectors and build a binary index");
  ix->add_option("vectors", index.vectors, "Sparse-vector JSONL")->required()->check(CLI::ExistingFile);
  ix->add_option("-o,--out", index.out, "Index file")->required();
  ix->add_option("--semantic", index.semantic, "Dense semantic JSONL {id, values}")->check(CLI::ExistingFile);
  add_vocab_flags(ix, index.vocab);
  ix->add_option("--dims", index.dims, "Number of slices M")->capture_default_str();
  ix->add_option("--discard", index.discard, "Leading term-ids to drop, or 'auto'")->capture_default_str();
  std::string index_strategy = "stride";
  ix->add_option("--strategy", index_strategy, "contiguous | stride | random")
      ->check(kStrategies)
      ->capture_default_str();
  ix->add_option("--seed", index.seed, "Seed for random slicing")->capture_default_str();
  ix->add_option("--lambda", index.lambda, "Semantic fusion weight")->capture_default_str();

  SearchCommandOptions search;
  std::string first_stage = "approx_gip";
  search.out = "-";
  auto* s = app.add_subcommand("search", "Search an index and write a TREC run");
  s->add_option("index", search.index, "Index file")->required()->check(CLI::ExistingFile);
  s->add_option("queries", search.queries, "Query sparse-vector JSONL")->required()->check(CLI::ExistingFile);
  s->add_option("-o,--out", search.out, "Run file ('-' for stdout)")->capture_default_str();
  s->add_option("--query-semantic", search.query_semantic, "Query dense JSONL for hybrid indexes")
      ->check(CLI::ExistingFile);
  add_vocab_flags(s, search.vocab);
  s->add_option("--dims", search.dims, "Expected M (checked against the index)");
  std::string search_strategy;
  s->add_option("--strategy", search_strategy, "Expected strategy (checked)")->check(kStrategies);
  s->add_option("--seed", search.seed, "Expected slicing seed (checked)");
  auto* theta = s->add_option("--theta", search.two_stage.theta, "Stage-1 threshold")->capture_default_str();
  auto* fs = s->add_option("--first-stage", first_stage, "approx_gip | value_ip")
                 ->check(CLI::IsMember({"approx_gip", "value_ip"}))
                 ->capture_default_str();
  auto* big_k = s->add_option("--K", search.two_stage.candidates, "Stage-1 candidates")->capture_default_str();
  s->add_option("--k", search.two_stage.k, "Results per query")->capture_default_str();
  auto* exact = s->add_flag("--exact", search.exact, "Exact GIP over the whole index");
  exact->excludes(theta)->excludes(fs)->excludes(big_k);
  s->add_option("--tag", search.tag, "Run tag")->capture_default_str();
  s->add_option("--threads", search.threads, "Worker threads (0 = auto; default $DLR_THREADS)");

  EvalOptions eval;
  auto* e = app.add_subcommand("eval", "Score a TREC run against qrels");
  e->add_option("run", eval.run, "TREC run file")->required()->check(CLI::ExistingFile);
  e->add_option("qrels", eval.qrels, "TREC qrels file")->required()->check(CLI::ExistingFile);
  e->add_option("-m,--metric", eval.metrics, "mrr@10 | recall@1000 | ndcg@10 | capped_recall@100")
      ->capture_default_str();
  e->add_flag("--per-query", eval.per_query, "Also print per-query values");
  e->add_option("--rel-threshold", eval.relevance_threshold, "Minimum relevant grade")
      ->capture_default_str();

  ReconstructOptions recon;
  auto* r = app.add_subcommand("reconstruct", "List the terms that survive densification");
  r->add_option("index", recon.index, "Index file")->required()->check(CLI::ExistingFile);
  auto* rd = r->add_option("--doc", recon.doc_id, "Document id in the index");
  auto* rq = r->add_option("--queries", recon.queries, "Query sparse-vector JSONL")->check(CLI::ExistingFile);
  rd->excludes(rq);
  add_vocab_flags(r, recon.vocab);
  r->add_option("--top", recon.top, "Terms to show")->capture_default_str();

  std::string inspect_path;
  auto* in = app.add_subcommand("inspect", "Print an index header");
  in->add_option("index", inspect_path, "Index file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (w->parsed()) {
      cmd_weight(weight, std::cerr);
    } else if (ix->parsed()) {
      index.strategy = parse_slice_strategy(index_strategy);
      cmd_index(index, std::cerr);
    } else if (s->parsed()) {
      search.two_stage.first_stage = parse_first_stage(first_stage);
      if (!search_strategy.empty()) search.strategy = parse_slice_strategy(search_strategy);
      if (s->count("--threads") == 0) search.threads = threads_from_env();
      if (search.out == "-") {
        cmd_search(search, std::cout, std::cerr);
      } else {
        std::ofstream out(search.out, std::ios::binary | std::ios::trunc);
        if (!out) throw dlr::Error("cannot open '" + search.out.string() + "' for writing");
        cmd_search(search, out, std::cerr);
      }
    } else if (e->parsed()) {
      cmd_eval(eval, std::cout);
    } else if (r->parsed()) {
      if (!recon.doc_id && !recon.queries) {
        std::cerr << r->help();
        return 2;
      }
      cmd_reconstruct(recon, std::cout);
    } else if (in->parsed()) {
      cmd_inspect(inspect_path, std::cout);
    }
  } catch (const std::exception& ex) {
    std::cerr << "dlr: error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
