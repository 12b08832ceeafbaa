#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "decforest/core/structure.hpp"
#include "decforest/oracle/generators.hpp"

namespace decforest {

/// What a named structure accepts, so generators can stay legal.
struct StructureTraits {
  bool tree_sum = false;
  bool subtree_sum = false;
  bool update = false;
  /// Weights and update values must be 0 or 1.
  bool binary = false;
};

/// Names accepted by `make_structure`: simple, iterated:<t>, linear01,
/// subtree, universal, oracle, and the test fixture faulty-simple (tree-sum
/// answers are off by one once vertex n-1 has been updated).
std::vector<std::string> structure_names();

/// Throws `UnknownStructure`.
StructureTraits structure_traits(std::string_view name);

/// Builds the structure on the trace's initial forest. Throws
/// `UnknownStructure`, or whatever the structure's constructor throws.
std::unique_ptr<ForestStructure> make_structure(std::string_view name, const OperationTrace& initial);

/// An op mix and value range legal for the structure.
OpMix default_mix(const StructureTraits& t);
ValueRange default_range(const StructureTraits& t);

}  // namespace decforest
