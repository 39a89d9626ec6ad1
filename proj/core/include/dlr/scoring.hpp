#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlr/densify.hpp"

namespace dlr {

/// Width of a hybrid vector: M gated lexical dims followed by D semantic
/// dims whose gate is always open. `lambda` is the fusion weight the
/// semantic block was scaled with (by sqrt(lambda)).
struct HybridLayout {
  std::uint32_t lexical_dims = 0;
  std::uint32_t semantic_dims = 0;
  double lambda = 0.0;

  std::uint32_t total_dims() const { return lexical_dims + semantic_dims; }
  bool same_shape(const HybridLayout& o) const {
    return lexical_dims == o.lexical_dims && semantic_dims == o.semantic_dims;
  }
  void validate() const;

  friend bool operator==(const HybridLayout&, const HybridLayout&) = default;
};

struct DenseVector {
  std::string id;
  std::vector<double> values;
};

/// DLR values/indices followed by a sqrt(lambda)-scaled semantic block.
/// `indices` covers only the lexical dims.
struct HybridVector {
  HybridLayout layout;
  std::vector<double> values;
  std::vector<std::uint32_t> indices;

  /// Throws DimensionError when the arrays disagree with `layout`.
  void validate() const;

  friend bool operator==(const HybridVector&, const HybridVector&) = default;
};

/// A purely lexical hybrid vector (D = 0).
HybridVector as_hybrid(const Dlr& lex);

/// values = lex.values ++ sqrt(lambda) * sem.values; indices = lex.indices.
/// Throws ParameterError for negative or non-finite lambda.
HybridVector fuse(const Dlr& lex, const DenseVector& sem, double lambda);

/// Gated inner product. Lexical dim m contributes q[m] * d[m] only when the
/// index entries agree; semantic dims always contribute. Accumulates in
/// ascending dim order.
double gip(const HybridVector& q, const HybridVector& d);

/// GIP restricted to the query dims selected by `approx_dims`.
double approx_gip(const HybridVector& q, const HybridVector& d, double theta);

/// Plain dot product of the value arrays, ignoring indices.
double value_ip(const HybridVector& q, const HybridVector& d);

/// Flat dims used by approximate GIP: lexical dims with q > theta and
/// semantic dims with |q| > theta, ascending.
std::vector<std::uint32_t> approx_dims(const HybridVector& q, double theta);

}  // namespace dlr
