#include "dlr/densify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dlr/error.hpp"

namespace dlr {

SparseVector make_sparse_vector(std::string id, std::span<const std::uint32_t> terms,
                                std::span<const double> weights, std::uint32_t vocab_size) {
  if (terms.size() != weights.size()) {
    throw IngestError("vector '" + id + "': " + std::to_string(terms.size()) +
                      " indices but " + std::to_string(weights.size()) + " values");
  }
  SparseVector v;
  v.id = std::move(id);
  v.entries.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && terms[i] <= terms[i - 1]) {
      throw IngestError("vector '" + v.id + "': term-ids not strictly ascending at position " +
                        std::to_string(i) + " (" + std::to_string(terms[i - 1]) + " then " +
                        std::to_string(terms[i]) + ")");
    }
    if (weights[i] == 0.0) continue;
    v.entries.push_back({terms[i], weights[i]});
  }
  validate_sparse(v, vocab_size);
  return v;
}

void validate_sparse(const SparseVector& v, std::uint32_t vocab_size) {
  for (std::size_t i = 0; i < v.entries.size(); ++i) {
    const auto& e = v.entries[i];
    if (e.term >= vocab_size) {
      throw IngestError("vector '" + v.id + "': term-id " + std::to_string(e.term) +
                        " >= vocab_size " + std::to_string(vocab_size));
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      throw IngestError("vector '" + v.id + "': term-id " + std::to_string(e.term) +
                        " has non-positive or non-finite weight " + std::to_string(e.weight));
    }
    if (i > 0 && e.term <= v.entries[i - 1].term) {
      throw IngestError("vector '" + v.id + "': term-ids not strictly ascending at term-id " +
                        std::to_string(e.term));
    }
  }
}

double sparse_dot(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->term < ib->term) {
      ++ia;
    } else if (ib->term < ia->term) {
      ++ib;
    } else {
      sum += ia->weight * ib->weight;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

Dlr densify(const SparseVector& v, const SliceAssignment& assignment) {
  const std::uint32_t dims = assignment.dims();
  Dlr out;
  out.values.assign(dims, 0.0);
  out.indices.assign(dims, 0);
  for (const auto& e : v.entries) {
    if (e.term >= assignment.config().vocab_size) {
      throw IngestError("vector '" + v.id + "': term-id " + std::to_string(e.term) +
                        " >= vocab_size " + std::to_string(assignment.config().vocab_size));
    }
    if (e.weight < 0.0 || !std::isfinite(e.weight)) {
      throw IngestError("vector '" + v.id + "': term-id " + std::to_string(e.term) +
                        " has negative or non-finite weight");
    }
    const auto slot = assignment.forward(e.term);
    if (!slot || e.weight == 0.0) continue;
    double& best = out.values[slot->slice];
    std::uint32_t& pos = out.indices[slot->slice];
    if (e.weight > best || (e.weight == best && slot->position < pos)) {
      best = e.weight;
      pos = slot->position;
    }
  }
  return out;
}

void validate_dlr(const Dlr& r, const SliceAssignment& assignment) {
  if (r.values.size() != assignment.dims() || r.indices.size() != assignment.dims()) {
    throw DimensionError("DLR has " + std::to_string(r.values.size()) + " values and " +
                         std::to_string(r.indices.size()) + " indices, expected " +
                         std::to_string(assignment.dims()));
  }
  for (std::size_t m = 0; m < r.indices.size(); ++m) {
    if (r.indices[m] >= assignment.slice_width()) {
      throw BoundsError("DLR index " + std::to_string(r.indices[m]) + " at dim " +
                        std::to_string(m) + " >= slice width " +
                        std::to_string(assignment.slice_width()));
    }
  }
}

SparseVector reconstruct(const Dlr& r, const SliceAssignment& assignment, std::string id) {
  validate_dlr(r, assignment);
  SparseVector out;
  out.id = std::move(id);
  for (std::uint32_t m = 0; m < r.values.size(); ++m) {
    if (r.values[m] > 0.0) {
      out.entries.push_back({assignment.invert(m, r.indices[m]), r.values[m]});
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.term < b.term; });
  return out;
}

}  // namespace dlr
