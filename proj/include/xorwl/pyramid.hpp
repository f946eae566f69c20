#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xorwl/strategy.hpp"
#include "xorwl/xor.hpp"

namespace xorwl {

using Vertex = std::uint32_t;

/// Layered DAG whose edges point from layer l+1 towards layer l; the sink
/// sits alone on layer 0 and sources on the deepest layer. Vertex ids are
/// the variable ids of dag_to_xor.
struct LayeredDag {
  std::vector<std::string> names;
  std::vector<std::uint32_t> layer;
  std::vector<std::vector<std::uint32_t>> coords;  // empty for hand-built DAGs
  std::vector<std::vector<Vertex>> in;             // sorted in-neighbours
  std::uint32_t d = 0;
  std::uint32_t height = 0;

  std::uint32_t size() const { return static_cast<std::uint32_t>(names.size()); }
  std::vector<Vertex> sources() const;
  std::vector<Vertex> sinks() const;
  std::uint32_t max_in_degree() const;
  void validate() const;
};

/// Pyramid of dimension d+1 and height h: layer l holds the points x with
/// x_i <= floor(l/d)+1 for i < l mod d and x_i <= floor(l/d) otherwise;
/// (x, l) has in-neighbours (x, l+1) and (x + e_{l mod d}, l+1).
LayeredDag build_pyramid(std::uint32_t d, std::uint32_t h, std::uint64_t max_vertices = 2'000'000);

/// Vertex id of the point x on layer l, or throws StructuralError.
Vertex pyramid_vertex(const LayeredDag& p, const std::vector<std::uint32_t>& x, std::uint32_t l);

/// (s,0) for every source, (v, in(v)..., 0) for every other vertex, then
/// (z,1) for the sink.
XorFormula dag_to_xor(const LayeredDag& g);

/// Lines `v_child <- v_parent`, one per edge.
std::string pyramid_dump(const LayeredDag& g);

using Labelling = std::map<Vertex, std::uint8_t>;

/// No non-source clause nor the sink clause is falsified by m.
bool consistent(const LayeredDag& g, const Labelling& m);

/// Total consistent labelling that extends m (which must label exactly the
/// layers 0..top) and gives 0 to every vertex of s. s may only contain
/// vertices on layers >= top + d. Throws InfeasibleError when no such
/// labelling exists.
std::vector<std::uint8_t> extend_labelling(const LayeredDag& g, const Labelling& m,
                                           std::uint32_t top, const std::vector<Vertex>& s);

/// Follows a path of 1-labelled vertices from the sink towards the sources,
/// keeping only the current vertex and its in-neighbours pebbled.
class DagP1 : public P1Strategy {
 public:
  explicit DagP1(LayeredDag g) : g_(std::move(g)) {}
  void begin(const XorFormula& f, std::uint32_t k) override;
  Move next_move(const Assignment& position) override;
  void observe(const Move& move, std::uint8_t answer) override;

 private:
  LayeredDag g_;
  bool have_current_ = false;
  Vertex current_ = 0;
};

/// Layer-skipping survival strategy for pyramids of dimension d+1 >= 3.
/// Keeps a frontier layer L and a consistent labelling of layers 0..L with
/// no pebble strictly between L and L+d.
class PyramidP2 : public P2Strategy {
 public:
  explicit PyramidP2(LayeredDag p);
  void begin(const XorFormula& f, std::uint32_t k) override;
  std::uint8_t answer(const Assignment& position, Var query) override;
  std::vector<std::string> notes() const override { return notes_; }
  std::uint32_t frontier() const { return frontier_; }

 private:
  LayeredDag p_;
  std::uint32_t frontier_ = 0;
  Labelling m_;
  std::vector<std::string> notes_;
};

}  // namespace xorwl
