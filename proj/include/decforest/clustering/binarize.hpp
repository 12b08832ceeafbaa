#pragma once

#include <vector>

#include "decforest/core/forest.hpp"

namespace decforest {

/// Result of `binarize`: vertices 0..n-1 keep their ids, auxiliary path
/// vertices are appended after them.
template <class W>
struct Binarized {
  RootedForest forest;
  std::vector<W> weights;
  /// original_of[x] is x for x < n and kNoVertex for added vertices.
  std::vector<Vertex> original_of;
};

/// Parent array and aux flags of the binarized forest. A vertex v with
/// d >= 3 children becomes the top of a path v, a_1, ..., a_{d-1} of new
/// auxiliary vertices; the i-th child hangs off the i-th path vertex.
std::pair<std::vector<Vertex>, std::vector<bool>> binarize_shape(const RootedForest& f);

template <class W>
Binarized<W> binarize(const RootedForest& f, const std::vector<W>& weights, const W& zero) {
  auto [parents, aux] = binarize_shape(f);
  Binarized<W> out;
  out.forest = RootedForest::build(parents, aux);
  out.weights.assign(parents.size(), zero);
  for (std::size_t v = 0; v < f.size() && v < weights.size(); ++v) out.weights[v] = weights[v];
  out.original_of.assign(parents.size(), kNoVertex);
  for (std::size_t v = 0; v < f.size(); ++v) out.original_of[v] = static_cast<Vertex>(v);
  return out;
}

}  // namespace decforest
