#include "dlr/io.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>

#include "dlr/error.hpp"

namespace dlr::io {
namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

// Calls fn(json, line_no) for each non-blank line.
template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(source, line_no, "expected a JSON object");
    try {
      fn(j, line_no);
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

std::string require_string(const json& j, const char* key, const std::string& source,
                           std::size_t line) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ParseError(source, line, std::string("missing string field \"") + key + "\"");
  }
  return j[key].get<std::string>();
}

const json& require_array(const json& j, const char* key, const std::string& source,
                          std::size_t line) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(source, line, std::string("missing array field \"") + key + "\"");
  }
  return j[key];
}

}  // namespace

std::vector<TextDocument> parse_corpus_jsonl(std::istream& in, const std::string& source) {
  std::vector<TextDocument> docs;
  for_each_json_line(in, source, [&](const json& j, std::size_t line) {
    docs.push_back({require_string(j, "id", source, line), require_string(j, "text", source, line)});
  });
  return docs;
}

std::vector<TextDocument> read_corpus_jsonl(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus_jsonl(in, path.string());
}

std::vector<SparseVector> parse_sparse_jsonl(std::istream& in, const std::string& source,
                                             std::optional<std::uint32_t> vocab_size) {
  std::vector<SparseVector> out;
  for_each_json_line(in, source, [&](const json& j, std::size_t line) {
    auto id = require_string(j, "id", source, line);
    const auto& idx = require_array(j, "indices", source, line);
    const auto& val = require_array(j, "values", source, line);
    std::vector<std::uint32_t> terms;
    std::vector<double> weights;
    terms.reserve(idx.size());
    weights.reserve(val.size());
    for (const auto& t : idx) {
      if (!t.is_number_unsigned() ||
          t.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(source, line, "indices must be nonnegative 32-bit integers");
      }
      terms.push_back(t.get<std::uint32_t>());
    }
    for (const auto& w : val) {
      if (!w.is_number()) throw ParseError(source, line, "values must be numbers");
      weights.push_back(w.get<double>());
    }
    out.push_back(make_sparse_vector(std::move(id), terms, weights,
                                     vocab_size.value_or(std::numeric_limits<std::uint32_t>::max())));
  });
  return out;
}

std::vector<SparseVector> read_sparse_jsonl(const std::filesystem::path& path,
                                            std::optional<std::uint32_t> vocab_size) {
  auto in = open_input(path);
  return parse_sparse_jsonl(in, path.string(), vocab_size);
}

void write_sparse_jsonl(std::ostream& out, std::span<const SparseVector> vectors) {
  for (const auto& v : vectors) {
    json j;
    j["id"] = v.id;
    json idx = json::array();
    json val = json::array();
    for (const auto& e : v.entries) {
      idx.push_back(e.term);
      val.push_back(e.weight);
    }
    j["indices"] = std::move(idx);
    j["values"] = std::move(val);
    out << j.dump() << '\n';
  }
}

std::vector<DenseVector> parse_dense_jsonl(std::istream& in, const std::string& source) {
  std::vector<DenseVector> out;
  for_each_json_line(in, source, [&](const json& j, std::size_t line) {
    DenseVector d;
    d.id = require_string(j, "id", source, line);
    for (const auto& v : require_array(j, "values", source, line)) {
      if (!v.is_number()) throw ParseError(source, line, "values must be numbers");
      d.values.push_back(v.get<double>());
    }
    if (!out.empty() && d.values.size() != out.front().values.size()) {
      throw ParseError(source, line,
                       "vector '" + d.id + "' has " + std::to_string(d.values.size()) +
                           " dims, expected " + std::to_string(out.front().values.size()));
    }
    out.push_back(std::move(d));
  });
  return out;
}

std::vector<DenseVector> read_dense_jsonl(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_dense_jsonl(in, path.string());
}

void write_stats_jsonl(std::ostream& out, const CorpusStats& stats) {
  json head;
  head["doc_count"] = stats.doc_count;
  head["avg_doc_len"] = stats.avg_doc_len;
  head["vocab_size"] = stats.vocab_size();
  head["id_seed"] = stats.id_seed;
  out << head.dump() << '\n';
  for (std::uint32_t id = 0; id < stats.vocab_size(); ++id) {
    json j;
    j["id"] = id;
    j["term"] = stats.terms[id];
    j["df"] = stats.doc_freq[id];
    out << j.dump() << '\n';
  }
}

CorpusStats parse_stats_jsonl(std::istream& in, const std::string& source) {
  CorpusStats stats;
  bool have_header = false;
  std::uint32_t declared = 0;
  std::vector<bool> filled;
  for_each_json_line(in, source, [&](const json& j, std::size_t line) {
    if (!have_header) {
      stats.doc_count = j.at("doc_count").get<std::uint64_t>();
      stats.avg_doc_len = j.at("avg_doc_len").get<double>();
      declared = j.at("vocab_size").get<std::uint32_t>();
      stats.id_seed = j.at("id_seed").get<std::uint64_t>();
      stats.terms.resize(declared);
      stats.doc_freq.resize(declared);
      filled.assign(declared, false);
      have_header = true;
      return;
    }
    const auto id = j.at("id").get<std::uint32_t>();
    if (id >= declared || filled[id]) {
      throw ParseError(source, line, "term id " + std::to_string(id) + " out of range or repeated");
    }
    filled[id] = true;
    stats.terms[id] = j.at("term").get<std::string>();
    stats.doc_freq[id] = j.at("df").get<std::uint32_t>();
    stats.vocab.emplace(stats.terms[id], id);
  });
  if (!have_header) throw ParseError(source, 1, "empty vocabulary sidecar");
  for (std::uint32_t id = 0; id < declared; ++id) {
    if (!filled[id]) throw ParseError(source, declared + 1, "term id " + std::to_string(id) + " missing");
  }
  return stats;
}

CorpusStats read_stats_jsonl(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_stats_jsonl(in, path.string());
}

}  // namespace dlr::io
