#include "dlr/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dlr/error.hpp"
#include "dlr/slicing.hpp"

namespace dlr {
namespace {

bool is_separator_codepoint(std::uint32_t cp) {
  if (cp < 0x80) {
    const auto c = static_cast<unsigned char>(cp);
    return !((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'));
  }
  return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x2190 && cp <= 0x2BFF) ||
         (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
         (cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65) || cp == 0xFEFF;
}

// Length of the UTF-8 sequence starting at s[i] and its code point; invalid
// input decodes as a one-byte separator.
std::size_t decode(std::string_view s, std::size_t i, std::uint32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    cp = 0x80;
    return 1;
  }
  if (i + len > s.size()) {
    cp = 0x80;
    return 1;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      cp = 0x80;
      return 1;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  return len;
}

std::map<std::string_view, std::uint32_t> term_counts(std::span<const std::string> tokens) {
  std::map<std::string_view, std::uint32_t> tf;
  for (const auto& t : tokens) ++tf[t];
  return tf;
}

}  // namespace

void Bm25Params::validate() const {
  if (!(k1 > 0.0) || !(b >= 0.0 && b <= 1.0)) {
    throw ParameterError("BM25 parameters require k1 > 0 and b in [0, 1]; got k1=" +
                         std::to_string(k1) + " b=" + std::to_string(b));
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    std::uint32_t cp = 0;
    const std::size_t len = decode(text, i, cp);
    if (is_separator_codepoint(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      current.push_back(c);
    } else {
      current.append(text.substr(i, len));
    }
    i += len;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::optional<std::uint32_t> CorpusStats::term_id(std::string_view token) const {
  auto it = vocab.find(std::string(token));
  if (it == vocab.end()) return std::nullopt;
  return it->second;
}

double bm25_idf(std::uint64_t df, std::uint64_t doc_count) {
  const double n = static_cast<double>(doc_count);
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double bm25_term_weight(std::uint32_t tf, std::uint32_t doc_len, std::uint64_t df,
                        const CorpusStats& stats, const Bm25Params& params) {
  if (tf == 0 || df == 0) return 0.0;
  const double norm = 1.0 - params.b + params.b * static_cast<double>(doc_len) / stats.avg_doc_len;
  const double t = static_cast<double>(tf);
  return bm25_idf(df, stats.doc_count) * (t * (params.k1 + 1.0)) / (t + params.k1 * norm);
}

double bm25_weight(std::string_view term, std::span<const std::string> doc_tokens,
                   const CorpusStats& stats, const Bm25Params& params) {
  params.validate();
  const auto id = stats.term_id(term);
  if (!id) return 0.0;
  const auto tf = static_cast<std::uint32_t>(
      std::count(doc_tokens.begin(), doc_tokens.end(), term));
  return bm25_term_weight(tf, static_cast<std::uint32_t>(doc_tokens.size()),
                          stats.doc_freq[*id], stats, params);
}

CorpusStats build_corpus_stats(std::span<const std::vector<std::string>> tokenized_docs,
                               std::uint64_t seed, IdOrder order) {
  if (tokenized_docs.empty()) throw ParameterError("cannot build statistics for an empty corpus");
  std::map<std::string, std::uint32_t> df;
  std::uint64_t total_len = 0;
  for (const auto& doc : tokenized_docs) {
    total_len += doc.size();
    for (const auto& [term, count] : term_counts(doc)) {
      (void)count;
      ++df[std::string(term)];
    }
  }
  CorpusStats stats;
  stats.doc_count = tokenized_docs.size();
  stats.avg_doc_len = static_cast<double>(total_len) / static_cast<double>(stats.doc_count);
  stats.id_seed = seed;

  const auto n = static_cast<std::uint32_t>(df.size());
  // sorted_rank -> term-id
  std::vector<std::uint32_t> id_of_rank(n);
  if (order == IdOrder::kShuffled) {
    id_of_rank = seeded_permutation(n, seed);
  } else {
    for (std::uint32_t r = 0; r < n; ++r) id_of_rank[r] = r;
  }
  stats.terms.resize(n);
  stats.doc_freq.resize(n);
  stats.vocab.reserve(n);
  std::uint32_t rank = 0;
  for (const auto& [term, count] : df) {
    const std::uint32_t id = id_of_rank[rank++];
    stats.terms[id] = term;
    stats.doc_freq[id] = count;
    stats.vocab.emplace(term, id);
  }
  return stats;
}

SparseVector vectorize_document(std::string id, std::span<const std::string> tokens,
                                const CorpusStats& stats, const Bm25Params& params) {
  params.validate();
  SparseVector v;
  v.id = std::move(id);
  const auto len = static_cast<std::uint32_t>(tokens.size());
  for (const auto& [term, tf] : term_counts(tokens)) {
    const auto tid = stats.term_id(term);
    if (!tid) continue;
    const double w = bm25_term_weight(tf, len, stats.doc_freq[*tid], stats, params);
    if (w > 0.0) v.entries.push_back({*tid, w});
  }
  std::sort(v.entries.begin(), v.entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.term < b.term; });
  return v;
}

SparseVector vectorize_query(std::string id, std::span<const std::string> tokens,
                             const CorpusStats& stats) {
  SparseVector v;
  v.id = std::move(id);
  for (const auto& [term, tf] : term_counts(tokens)) {
    (void)tf;
    if (const auto tid = stats.term_id(term)) v.entries.push_back({*tid, 1.0});
  }
  std::sort(v.entries.begin(), v.entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.term < b.term; });
  return v;
}

VectorizedCorpus vectorize_corpus(std::span<const TextDocument> docs, const Bm25Params& params,
                                  std::uint64_t seed, IdOrder order) {
  params.validate();
  if (docs.empty()) throw ParameterError("cannot vectorize an empty corpus");
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(docs.size());
  for (const auto& d : docs) tokenized.push_back(tokenize(d.text));

  VectorizedCorpus out;
  out.stats = build_corpus_stats(tokenized, seed, order);
  out.vectors.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out.vectors.push_back(vectorize_document(docs[i].id, tokenized[i], out.stats, params));
  }
  return out;
}

}  // namespace dlr
