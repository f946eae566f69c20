#include "xorwl/structure.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "xorwl/error.hpp"

namespace xorwl {

namespace {

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Elem> image(const std::vector<Elem>& xs, const StructBijection& beta) {
  std::vector<Elem> out;
  out.reserve(xs.size());
  for (Elem e : xs) out.push_back(beta[e]);
  return out;
}

}  // namespace

void RelStructure::canonicalize() {
  for (auto& [name, ext] : unary) sort_unique(ext);
  for (auto& [name, rel] : relations) sort_unique(rel.tuples);
}

void RelStructure::validate() const {
  const auto n = size();
  for (const auto& [name, ext] : unary)
    for (Elem e : ext)
      if (e >= n) throw StructuralError("unary " + name + " has element out of range");
  for (const auto& [name, rel] : relations)
    for (const auto& t : rel.tuples) {
      if (t.size() != rel.arity) throw StructuralError("relation " + name + " arity mismatch");
      for (Elem e : t)
        if (e >= n) throw StructuralError("relation " + name + " has element out of range");
    }
}

std::pair<RelStructure, RelStructure> encode(const XorFormula& f) {
  f.validate();
  RelStructure a;
  for (Var v = 0; v < f.num_vars; ++v) {
    a.domain.push_back(f.names[v] + "^0");
    a.domain.push_back(f.names[v] + "^1");
    a.unary["X" + std::to_string(v)] = {encoded_elem(v, 0), encoded_elem(v, 1)};
  }
  RelStructure b = a;
  for (const auto& c : f.clauses) {
    if (c.raw_vars != c.support)
      throw PreconditionError("encode expects normalized clauses");
    const auto m = static_cast<std::uint32_t>(c.width());
    if (m == 0) throw StructuralError("cannot encode a clause with empty support");
    if (m > 24) throw CapacityError("clause width too large to encode");
    const std::string name = "R" + std::to_string(m);
    auto& ra = a.relations[name];
    auto& rb = b.relations[name];
    ra.arity = rb.arity = m;
    for (std::uint32_t bits = 0; bits < (1U << m); ++bits) {
      Tuple t(m);
      std::uint8_t sum = 0;
      for (std::uint32_t j = 0; j < m; ++j) {
        const std::uint8_t bj = (bits >> (m - 1 - j)) & 1U;
        sum ^= bj;
        t[j] = encoded_elem(c.support[j], bj);
      }
      if (sum == 0) ra.tuples.push_back(t);
      if (sum == c.parity) rb.tuples.push_back(t);
    }
  }
  a.canonicalize();
  b.canonicalize();
  return {std::move(a), std::move(b)};
}

StructBijection assignment_to_bijection(const Assignment& a, std::uint32_t num_vars) {
  StructBijection beta(2 * num_vars);
  for (Var v = 0; v < num_vars; ++v) {
    auto it = a.find(v);
    if (it == a.end()) throw PreconditionError("assignment is not total");
    const std::uint8_t bit = it->second & 1U;
    beta[encoded_elem(v, 0)] = encoded_elem(v, bit);
    beta[encoded_elem(v, 1)] = encoded_elem(v, bit ^ 1U);
  }
  if (!a.empty() && a.rbegin()->first >= num_vars)
    throw StructuralError("assignment variable out of range");
  return beta;
}

Assignment bijection_to_assignment(const StructBijection& beta, std::uint32_t num_vars) {
  if (beta.size() != 2 * static_cast<std::size_t>(num_vars))
    throw PreconditionError("bijection has the wrong size");
  Assignment a;
  for (Var v = 0; v < num_vars; ++v) {
    const Elem lo = beta[encoded_elem(v, 0)];
    const Elem hi = beta[encoded_elem(v, 1)];
    if (lo / 2 != v || hi / 2 != v || lo == hi)
      throw PreconditionError("bijection does not preserve X" + std::to_string(v));
    a[v] = static_cast<std::uint8_t>(lo & 1U);
  }
  return a;
}

bool is_isomorphism(const RelStructure& a, const RelStructure& b, const StructBijection& beta) {
  const auto n = a.size();
  if (b.size() != n || beta.size() != n) return false;
  std::vector<std::uint8_t> hit(n, 0);
  for (Elem e : beta) {
    if (e >= n || hit[e]) return false;
    hit[e] = 1;
  }
  auto check_unary = [&](const RelStructure& x, const RelStructure& y) {
    for (const auto& [name, ext] : x.unary) {
      auto it = y.unary.find(name);
      const std::size_t other = it == y.unary.end() ? 0 : it->second.size();
      if (ext.size() != other) return false;
    }
    return true;
  };
  auto check_rel = [&](const RelStructure& x, const RelStructure& y) {
    for (const auto& [name, rel] : x.relations) {
      auto it = y.relations.find(name);
      const std::size_t other = it == y.relations.end() ? 0 : it->second.tuples.size();
      if (rel.tuples.size() != other) return false;
    }
    return true;
  };
  // Equal sizes on both sides plus forward preservation under a bijection
  // gives backward preservation.
  if (!check_unary(a, b) || !check_unary(b, a) || !check_rel(a, b) || !check_rel(b, a))
    return false;
  for (const auto& [name, ext] : a.unary) {
    auto img = image(ext, beta);
    std::sort(img.begin(), img.end());
    if (img != b.unary.at(name)) return false;
  }
  for (const auto& [name, rel] : a.relations) {
    const auto& target = b.relations.at(name).tuples;
    for (const auto& t : rel.tuples)
      if (!std::binary_search(target.begin(), target.end(), image(t, beta))) return false;
  }
  return true;
}

bool looks_like_encoding(const RelStructure& s) {
  const auto n = s.size();
  if (n % 2 != 0 || s.unary.size() != n / 2) return false;
  for (Var v = 0; v < n / 2; ++v) {
    auto it = s.unary.find("X" + std::to_string(v));
    if (it == s.unary.end()) return false;
    if (it->second != std::vector<Elem>{encoded_elem(v, 0), encoded_elem(v, 1)}) return false;
  }
  return true;
}

std::optional<StructBijection> find_isomorphism(const RelStructure& a, const RelStructure& b,
                                                std::uint32_t max_general_domain,
                                                std::uint32_t max_encoding_vars) {
  if (a.size() != b.size()) return std::nullopt;
  const auto n = a.size();
  if (looks_like_encoding(a) && looks_like_encoding(b)) {
    const std::uint32_t vars = n / 2;
    if (vars > max_encoding_vars)
      throw CapacityError("isomorphism search over 2^" + std::to_string(vars) + " maps exceeds guard");
    // Counting up with variable 0 as the most significant bit enumerates
    // the candidate maps in lexicographic order.
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << vars); ++code) {
      Assignment alpha;
      for (Var v = 0; v < vars; ++v) alpha[v] = (code >> (vars - 1 - v)) & 1U;
      auto beta = assignment_to_bijection(alpha, vars);
      if (is_isomorphism(a, b, beta)) return beta;
    }
    return std::nullopt;
  }
  if (n > max_general_domain)
    throw CapacityError("permutation search over domain " + std::to_string(n) + " exceeds guard");
  StructBijection beta(n);
  std::iota(beta.begin(), beta.end(), 0U);
  do {
    if (is_isomorphism(a, b, beta)) return beta;
  } while (std::next_permutation(beta.begin(), beta.end()));
  return std::nullopt;
}

RelStructure relabel(const RelStructure& s, const std::vector<Elem>& pi) {
  if (pi.size() != s.size()) throw StructuralError("relabelling has the wrong size");
  RelStructure out;
  out.domain.resize(s.size());
  for (Elem e = 0; e < s.size(); ++e) out.domain[pi[e]] = s.domain[e];
  for (const auto& [name, ext] : s.unary) out.unary[name] = image(ext, pi);
  for (const auto& [name, rel] : s.relations) {
    auto& r = out.relations[name];
    r.arity = rel.arity;
    for (const auto& t : rel.tuples) r.tuples.push_back(image(t, pi));
  }
  out.canonicalize();
  return out;
}

void align_vocabulary(RelStructure& a, RelStructure& b) {
  for (const auto& [name, ext] : a.unary) b.unary.try_emplace(name);
  for (const auto& [name, ext] : b.unary) a.unary.try_emplace(name);
  for (const auto& [name, rel] : a.relations) {
    auto [it, added] = b.relations.try_emplace(name);
    if (added) it->second.arity = rel.arity;
    else if (it->second.arity != rel.arity) throw StructuralError("relation " + name + " has two arities");
  }
  for (const auto& [name, rel] : b.relations) {
    auto [it, added] = a.relations.try_emplace(name);
    if (added) it->second.arity = rel.arity;
  }
}

RelStructure disjoint_union(const RelStructure& a0, const RelStructure& b0) {
  RelStructure a = a0;
  RelStructure b = b0;
  align_vocabulary(a, b);
  const Elem off = a.size();
  RelStructure u = a;
  for (const auto& name : b.domain) u.domain.push_back(name);
  for (const auto& [name, ext] : b.unary)
    for (Elem e : ext) u.unary[name].push_back(e + off);
  for (const auto& [name, rel] : b.relations)
    for (auto t : rel.tuples) {
      for (auto& e : t) e += off;
      u.relations[name].tuples.push_back(std::move(t));
    }
  u.canonicalize();
  return u;
}

std::string write_structure_json(const RelStructure& s) {
  nlohmann::ordered_json j;
  j["domain"] = s.domain;
  j["unary"] = nlohmann::ordered_json::object();
  for (const auto& [name, ext] : s.unary) j["unary"][name] = ext;
  j["relations"] = nlohmann::ordered_json::object();
  for (const auto& [name, rel] : s.relations) j["relations"][name] = rel.tuples;
  return j.dump(1) + "\n";
}

namespace {

std::uint32_t arity_from_name(const std::string& name) {
  std::size_t i = name.size();
  while (i > 0 && name[i - 1] >= '0' && name[i - 1] <= '9') --i;
  if (i == name.size()) return 0;
  return static_cast<std::uint32_t>(std::stoul(name.substr(i)));
}

}  // namespace

RelStructure read_structure_json(const std::string& text) {
  RelStructure s;
  try {
    auto j = nlohmann::json::parse(text);
    s.domain = j.at("domain").get<std::vector<std::string>>();
    if (j.contains("unary"))
      for (auto& [name, ext] : j.at("unary").items()) s.unary[name] = ext.get<std::vector<Elem>>();
    if (j.contains("relations"))
      for (auto& [name, tuples] : j.at("relations").items()) {
        Relation r;
        r.tuples = tuples.get<std::vector<Tuple>>();
        r.arity = r.tuples.empty() ? arity_from_name(name) : static_cast<std::uint32_t>(r.tuples.front().size());
        s.relations[name] = std::move(r);
      }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("structure json: ") + e.what());
  }
  try {
    s.validate();
  } catch (const StructuralError& e) {
    throw FormatError(e.what());
  }
  s.canonicalize();
  return s;
}

}  // namespace xorwl
