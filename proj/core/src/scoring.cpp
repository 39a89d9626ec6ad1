#include "dlr/scoring.hpp"

#include <cmath>
#include <string>

#include "dlr/error.hpp"

namespace dlr {
namespace {

void require_same_layout(const HybridVector& q, const HybridVector& d) {
  if (!q.layout.same_shape(d.layout)) {
    throw DimensionError("layout mismatch: query (M=" + std::to_string(q.layout.lexical_dims) +
                         ", D=" + std::to_string(q.layout.semantic_dims) + ") vs document (M=" +
                         std::to_string(d.layout.lexical_dims) +
                         ", D=" + std::to_string(d.layout.semantic_dims) + ")");
  }
  q.validate();
  d.validate();
}

void require_theta(double theta) {
  if (!(theta >= 0.0)) {
    throw ParameterError("theta must be >= 0, got " + std::to_string(theta));
  }
}

}  // namespace

void HybridLayout::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("lambda must be a finite value >= 0, got " + std::to_string(lambda));
  }
}

void HybridVector::validate() const {
  if (values.size() != layout.total_dims() || indices.size() != layout.lexical_dims) {
    throw DimensionError("hybrid vector has " + std::to_string(values.size()) + " values and " +
                         std::to_string(indices.size()) + " indices; layout expects " +
                         std::to_string(layout.total_dims()) + " and " +
                         std::to_string(layout.lexical_dims));
  }
}

HybridVector as_hybrid(const Dlr& lex) {
  if (lex.values.size() != lex.indices.size()) {
    throw DimensionError("DLR value/index length mismatch");
  }
  HybridVector h;
  h.layout.lexical_dims = static_cast<std::uint32_t>(lex.values.size());
  h.values = lex.values;
  h.indices = lex.indices;
  return h;
}

HybridVector fuse(const Dlr& lex, const DenseVector& sem, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("lambda must be a finite value >= 0, got " + std::to_string(lambda));
  }
  HybridVector h = as_hybrid(lex);
  h.layout.semantic_dims = static_cast<std::uint32_t>(sem.values.size());
  h.layout.lambda = lambda;
  const double scale = std::sqrt(lambda);
  h.values.reserve(h.layout.total_dims());
  for (double v : sem.values) h.values.push_back(scale * v);
  return h;
}

double gip(const HybridVector& q, const HybridVector& d) {
  require_same_layout(q, d);
  const std::uint32_t m_dims = q.layout.lexical_dims;
  double sum = 0.0;
  for (std::uint32_t m = 0; m < m_dims; ++m) {
    if (q.indices[m] == d.indices[m]) sum += q.values[m] * d.values[m];
  }
  for (std::uint32_t j = m_dims; j < q.layout.total_dims(); ++j) {
    sum += q.values[j] * d.values[j];
  }
  return sum;
}

std::vector<std::uint32_t> approx_dims(const HybridVector& q, double theta) {
  require_theta(theta);
  q.validate();
  std::vector<std::uint32_t> dims;
  const std::uint32_t m_dims = q.layout.lexical_dims;
  for (std::uint32_t m = 0; m < m_dims; ++m) {
    if (q.values[m] > theta) dims.push_back(m);
  }
  for (std::uint32_t j = m_dims; j < q.layout.total_dims(); ++j) {
    if (std::abs(q.values[j]) > theta) dims.push_back(j);
  }
  return dims;
}

double approx_gip(const HybridVector& q, const HybridVector& d, double theta) {
  require_same_layout(q, d);
  const std::uint32_t m_dims = q.layout.lexical_dims;
  double sum = 0.0;
  for (std::uint32_t dim : approx_dims(q, theta)) {
    if (dim >= m_dims || q.indices[dim] == d.indices[dim]) sum += q.values[dim] * d.values[dim];
  }
  return sum;
}

double value_ip(const HybridVector& q, const HybridVector& d) {
  require_same_layout(q, d);
  double sum = 0.0;
  for (std::size_t j = 0; j < q.values.size(); ++j) sum += q.values[j] * d.values[j];
  return sum;
}

}  // namespace dlr
