#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xorwl {

using Var = std::uint32_t;

/// Parity constraint: the sum of raw_vars is congruent to parity mod 2.
///
/// raw_vars keeps the occurrence list exactly as built (repetitions are
/// meaningful for the relational encoding and for substitution), while
/// support holds the sorted variables of odd multiplicity. Semantics only
/// ever look at support.
struct XorClause {
  std::vector<Var> raw_vars;
  std::vector<Var> support;
  std::uint8_t parity = 0;

  XorClause() = default;
  XorClause(std::vector<Var> raw, std::uint8_t parity);

  std::size_t width() const { return support.size(); }
  bool operator==(const XorClause&) const = default;
};

struct XorFormula {
  std::uint32_t num_vars = 0;
  std::vector<std::string> names;
  std::vector<XorClause> clauses;

  XorFormula() = default;
  explicit XorFormula(std::uint32_t n);
  XorFormula(std::vector<std::string> var_names);

  Var add_var(std::string name);
  void add_clause(std::vector<Var> raw, std::uint8_t parity);
  const std::string& name(Var v) const { return names.at(v); }

  /// Throws StructuralError on an out-of-range id or a name-table mismatch.
  void validate() const;

  bool operator==(const XorFormula&) const = default;
};

/// Partial map from variable ids to bits.
using Assignment = std::map<Var, std::uint8_t>;

enum class ClauseValue { Satisfied, Falsified, Undetermined };

ClauseValue evaluate_clause(const XorClause& clause, const Assignment& a);

/// Same as evaluate_clause, but rejects assignment or clause ids >= num_vars.
ClauseValue evaluate_clause(const XorFormula& f, std::size_t clause_index,
                            const Assignment& a);

/// True iff every clause is satisfied by the total bit vector.
bool satisfies(const XorFormula& f, const std::vector<std::uint8_t>& bits);

/// True iff some clause is falsified by the (partial) assignment.
bool falsifies(const XorFormula& f, const Assignment& a);

/// Gaussian elimination over GF(2). Free variables are set to 0, so the model
/// returned is deterministic. std::nullopt means no total extension of
/// `forced` satisfies every clause.
std::optional<Assignment> solve_gf2(const XorFormula& f, const Assignment& forced = {});

/// Replaces every raw_vars list by the sorted support.
XorFormula normalize(const XorFormula& f);

std::vector<std::uint8_t> to_bits(const Assignment& a, std::uint32_t num_vars);
Assignment from_bits(const std::vector<std::uint8_t>& bits);

/// Text format: `xorf <n> <m>`, then one clause per line `ids... | parity`.
/// Lines starting with `#` are comments; `# name <id> <text>` restores
/// variable names.
std::string write_xorf(const XorFormula& f);
XorFormula read_xorf(std::string_view text);
XorFormula load_xorf(const std::string& path);
void save_xorf(const XorFormula& f, const std::string& path);

std::string default_var_name(Var v);

}  // namespace xorwl
