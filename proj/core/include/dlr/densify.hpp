#pragma once

#include <cstdint>
#include <vector>

#include "dlr/slicing.hpp"
#include "dlr/sparse.hpp"

namespace dlr {

/// Dense lexical representation: per-slice maximum weight and the in-slice
/// position holding it. An empty slice is (0.0, 0).
struct Dlr {
  std::vector<double> values;
  std::vector<std::uint32_t> indices;

  std::size_t dims() const { return values.size(); }

  friend bool operator==(const Dlr&, const Dlr&) = default;
};

/// Max-pools each slice of `v`. Ties on the maximum go to the lowest
/// in-slice position. Discarded term-ids are skipped.
Dlr densify(const SparseVector& v, const SliceAssignment& assignment);

/// Maps each non-empty slice back to its surviving (term-id, weight) pair.
/// The result is sorted by term-id and carries `id`.
SparseVector reconstruct(const Dlr& r, const SliceAssignment& assignment, std::string id = {});

/// Throws DimensionError / BoundsError if `r` does not fit the assignment.
void validate_dlr(const Dlr& r, const SliceAssignment& assignment);

}  // namespace dlr
