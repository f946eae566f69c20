#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xorwl/xor.hpp"

namespace xorwl {

using Elem = std::uint32_t;
using Tuple = std::vector<Elem>;

struct Relation {
  std::uint32_t arity = 0;
  std::vector<Tuple> tuples;  // sorted, unique
  bool operator==(const Relation&) const = default;
};

/// Finite structure with named unary predicates and named relations.
/// Maps are keyed by name so that two structures over the same vocabulary
/// line up symbol by symbol.
struct RelStructure {
  std::vector<std::string> domain;
  std::map<std::string, std::vector<Elem>> unary;  // sorted extents
  std::map<std::string, Relation> relations;

  std::uint32_t size() const { return static_cast<std::uint32_t>(domain.size()); }

  /// Sorts and deduplicates every extent and tuple list.
  void canonicalize();
  /// Throws StructuralError on out-of-range elements or arity mismatches.
  void validate() const;

  bool operator==(const RelStructure&) const = default;
};

/// Total map from the domain of one structure onto the domain of another.
using StructBijection = std::vector<Elem>;

/// Element id of x_v^b.
inline Elem encoded_elem(Var v, std::uint8_t b) { return 2 * v + (b & 1U); }

/// Builds A(F) and B(F). Clauses of equal width share the relation R<width>.
/// Requires support-form clauses of width >= 1.
std::pair<RelStructure, RelStructure> encode(const XorFormula& f);

StructBijection assignment_to_bijection(const Assignment& a, std::uint32_t num_vars);
/// Rejects bijections that do not preserve every pair {2i, 2i+1}.
Assignment bijection_to_assignment(const StructBijection& beta, std::uint32_t num_vars);

bool is_isomorphism(const RelStructure& a, const RelStructure& b, const StructBijection& beta);

/// True when the unary predicates are exactly the pairs {2i, 2i+1}.
bool looks_like_encoding(const RelStructure& s);

/// Exhaustive search returning the lexicographically least isomorphism.
/// Encodings are searched over pair-preserving maps only (2^n candidates);
/// anything else over all permutations, guarded by max_general_domain.
std::optional<StructBijection> find_isomorphism(const RelStructure& a, const RelStructure& b,
                                                std::uint32_t max_general_domain = 8,
                                                std::uint32_t max_encoding_vars = 24);

/// Image of s under the permutation pi (element e becomes pi[e]).
RelStructure relabel(const RelStructure& s, const std::vector<Elem>& pi);

/// Elements of b are shifted by a.size(). Symbols missing on one side are
/// added with empty extents.
RelStructure disjoint_union(const RelStructure& a, const RelStructure& b);

/// Adds empty symbols so both structures share one vocabulary.
void align_vocabulary(RelStructure& a, RelStructure& b);

std::string write_structure_json(const RelStructure& s);
RelStructure read_structure_json(const std::string& text);

}  // namespace xorwl
