#include "xorwl/xor.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "xorwl/error.hpp"
#include "xorwl/io.hpp"

namespace xorwl {

namespace {

std::vector<Var> odd_support(const std::vector<Var>& raw) {
  std::vector<Var> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Var> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(sorted[i]);
    i = j;
  }
  return out;
}

// Dense GF(2) row: variable bits followed by the right-hand side bit.
struct Row {
  std::vector<std::uint64_t> w;
  bool get(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1U; }
  void flip(std::size_t i) { w[i / 64] ^= std::uint64_t{1} << (i % 64); }
  void add(const Row& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
  }
};

}  // namespace

XorClause::XorClause(std::vector<Var> raw, std::uint8_t p)
    : raw_vars(std::move(raw)), parity(static_cast<std::uint8_t>(p & 1U)) {
  support = odd_support(raw_vars);
}

std::string default_var_name(Var v) { return "x" + std::to_string(v); }

XorFormula::XorFormula(std::uint32_t n) : num_vars(n) {
  names.reserve(n);
  for (Var v = 0; v < n; ++v) names.push_back(default_var_name(v));
}

XorFormula::XorFormula(std::vector<std::string> var_names)
    : num_vars(static_cast<std::uint32_t>(var_names.size())), names(std::move(var_names)) {}

Var XorFormula::add_var(std::string name) {
  names.push_back(std::move(name));
  return num_vars++;
}

void XorFormula::add_clause(std::vector<Var> raw, std::uint8_t parity) {
  for (Var v : raw)
    if (v >= num_vars)
      throw StructuralError("clause variable " + std::to_string(v) + " out of range");
  clauses.emplace_back(std::move(raw), parity);
}

void XorFormula::validate() const {
  if (names.size() != num_vars) throw StructuralError("name table size mismatch");
  for (const auto& c : clauses) {
    for (Var v : c.raw_vars)
      if (v >= num_vars)
        throw StructuralError("clause variable " + std::to_string(v) + " out of range");
    if (c.support != odd_support(c.raw_vars))
      throw StructuralError("clause support does not match raw occurrences");
  }
}

ClauseValue evaluate_clause(const XorClause& clause, const Assignment& a) {
  std::uint8_t sum = 0;
  for (Var v : clause.support) {
    auto it = a.find(v);
    if (it == a.end()) return ClauseValue::Undetermined;
    sum ^= it->second & 1U;
  }
  return sum == clause.parity ? ClauseValue::Satisfied : ClauseValue::Falsified;
}

ClauseValue evaluate_clause(const XorFormula& f, std::size_t clause_index,
                            const Assignment& a) {
  if (clause_index >= f.clauses.size()) throw StructuralError("clause index out of range");
  for (const auto& [v, b] : a) {
    (void)b;
    if (v >= f.num_vars)
      throw StructuralError("assignment variable " + std::to_string(v) + " out of range");
  }
  for (Var v : f.clauses[clause_index].raw_vars)
    if (v >= f.num_vars) throw StructuralError("clause variable out of range");
  return evaluate_clause(f.clauses[clause_index], a);
}

bool satisfies(const XorFormula& f, const std::vector<std::uint8_t>& bits) {
  for (const auto& c : f.clauses) {
    std::uint8_t sum = 0;
    for (Var v : c.support) sum ^= bits.at(v) & 1U;
    if (sum != c.parity) return false;
  }
  return true;
}

bool falsifies(const XorFormula& f, const Assignment& a) {
  for (const auto& c : f.clauses)
    if (evaluate_clause(c, a) == ClauseValue::Falsified) return true;
  return false;
}

std::optional<Assignment> solve_gf2(const XorFormula& f, const Assignment& forced) {
  const std::size_t n = f.num_vars;
  for (const auto& [v, b] : forced) {
    (void)b;
    if (v >= n) throw StructuralError("forced variable " + std::to_string(v) + " out of range");
  }
  const std::size_t words = (n + 1 + 63) / 64;
  std::vector<Row> rows;
  rows.reserve(f.clauses.size() + forced.size());
  auto push = [&](const std::vector<Var>& vars, std::uint8_t rhs) {
    Row r{std::vector<std::uint64_t>(words, 0)};
    for (Var v : vars) {
      if (v >= n) throw StructuralError("clause variable out of range");
      r.flip(v);
    }
    if (rhs & 1U) r.flip(n);
    rows.push_back(std::move(r));
  };
  for (const auto& c : f.clauses) push(c.support, c.parity);
  for (const auto& [v, b] : forced) push({v}, b);

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p].get(col)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[rank], rows[p]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && rows[i].get(col)) rows[i].add(rows[rank]);
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < rows.size(); ++i)
    if (rows[i].get(n)) return std::nullopt;

  Assignment model;
  for (Var v = 0; v < n; ++v) model[v] = 0;
  // Reduced row echelon form with free variables at 0: pivot = rhs.
  for (std::size_t i = 0; i < rank; ++i)
    model[static_cast<Var>(pivot_col[i])] = rows[i].get(n) ? 1 : 0;
  return model;
}

XorFormula normalize(const XorFormula& f) {
  XorFormula g = f;
  for (auto& c : g.clauses) c.raw_vars = c.support;
  return g;
}

std::vector<std::uint8_t> to_bits(const Assignment& a, std::uint32_t num_vars) {
  std::vector<std::uint8_t> bits(num_vars, 0);
  for (const auto& [v, b] : a) bits.at(v) = b & 1U;
  return bits;
}

Assignment from_bits(const std::vector<std::uint8_t>& bits) {
  Assignment a;
  for (Var v = 0; v < bits.size(); ++v) a[v] = bits[v] & 1U;
  return a;
}

std::string write_xorf(const XorFormula& f) {
  std::ostringstream out;
  out << "xorf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (Var v = 0; v < f.num_vars; ++v)
    if (v < f.names.size() && f.names[v] != default_var_name(v))
      out << "# name " << v << ' ' << f.names[v] << '\n';
  for (const auto& c : f.clauses) {
    for (Var v : c.raw_vars) out << v << ' ';
    out << "| " << static_cast<int>(c.parity) << '\n';
  }
  return out.str();
}

namespace {

std::uint64_t parse_uint(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw FormatError("line " + std::to_string(line) + ": bad integer '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

XorFormula read_xorf(std::string_view text) {
  XorFormula f;
  bool have_header = false;
  std::uint64_t expected = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0].front() == '#') {
      if (have_header && toks.size() >= 4 && toks[0] == "#" && toks[1] == "name") {
        Var v = static_cast<Var>(parse_uint(toks[2], line_no));
        if (v >= f.num_vars) throw FormatError("line " + std::to_string(line_no) + ": name id out of range");
        std::size_t at = line.find(toks[3]);
        f.names[v] = std::string(line.substr(at, line.find_last_not_of(" \t\r") + 1 - at));
      }
      continue;
    }
    if (!have_header) {
      if (toks.size() != 3 || toks[0] != "xorf")
        throw FormatError("line " + std::to_string(line_no) + ": expected 'xorf <n> <m>'");
      f = XorFormula(static_cast<std::uint32_t>(parse_uint(toks[1], line_no)));
      expected = parse_uint(toks[2], line_no);
      have_header = true;
      continue;
    }
    if (toks.size() < 2 || toks[toks.size() - 2] != "|")
      throw FormatError("line " + std::to_string(line_no) + ": expected 'ids... | parity'");
    std::uint64_t parity = parse_uint(toks.back(), line_no);
    if (parity > 1) throw FormatError("line " + std::to_string(line_no) + ": parity must be 0 or 1");
    std::vector<Var> raw;
    for (std::size_t i = 0; i + 2 < toks.size(); ++i) {
      std::uint64_t v = parse_uint(toks[i], line_no);
      if (v >= f.num_vars)
        throw FormatError("line " + std::to_string(line_no) + ": variable id out of range");
      raw.push_back(static_cast<Var>(v));
    }
    f.clauses.emplace_back(std::move(raw), static_cast<std::uint8_t>(parity));
  }
  if (!have_header) throw FormatError("missing xorf header");
  if (f.clauses.size() != expected)
    throw FormatError("header announces " + std::to_string(expected) + " clauses, found " +
                      std::to_string(f.clauses.size()));
  return f;
}

XorFormula load_xorf(const std::string& path) { return read_xorf(read_text_file(path)); }

void save_xorf(const XorFormula& f, const std::string& path) {
  write_text_file(path, write_xorf(f));
}

}  // namespace xorwl
