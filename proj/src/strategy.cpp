#include "xorwl/strategy.hpp"

#include <algorithm>

#include "json.hpp"
#include "xorwl/error.hpp"

namespace xorwl {

Transcript play(const XorFormula& f, std::uint32_t k, P1Strategy& s1, P2Strategy& s2,
                std::uint32_t max_rounds) {
  Transcript t;
  s1.begin(f, k);
  s2.begin(f, k);
  Assignment pos;
  if (falsifies(f, pos)) {
    t.p1_won = true;
    t.notes = s2.notes();
    return t;
  }
  for (std::uint32_t r = 1; r <= max_rounds; ++r) {
    Move m = s1.next_move(pos);
    std::sort(m.deleted.begin(), m.deleted.end());
    if (std::adjacent_find(m.deleted.begin(), m.deleted.end()) != m.deleted.end())
      throw ProtocolError("round " + std::to_string(r) + ": a pebble was deleted twice");
    for (Var v : m.deleted)
      if (!pos.count(v))
        throw ProtocolError("round " + std::to_string(r) + ": deleted variable " + std::to_string(v) +
                            " carries no pebble");
    if (pos.size() >= k && m.deleted.empty())
      throw ProtocolError("round " + std::to_string(r) + ": all " + std::to_string(k) +
                          " pebbles are placed, so at least one must be deleted");
    for (Var v : m.deleted) pos.erase(v);
    if (m.query >= f.num_vars)
      throw ProtocolError("round " + std::to_string(r) + ": query of unknown variable " +
                          std::to_string(m.query));
    if (pos.count(m.query))
      throw ProtocolError("round " + std::to_string(r) + ": variable " + std::to_string(m.query) +
                          " is already assigned");
    if (pos.size() + 1 > k)
      throw ProtocolError("round " + std::to_string(r) + ": query would exceed " + std::to_string(k) +
                          " pebbles");
    const std::uint8_t b = s2.answer(pos, m.query);
    if (b > 1) throw ProtocolError("round " + std::to_string(r) + ": answer is not a bit");
    pos[m.query] = b;
    t.high_water = std::max(t.high_water, pos.size());
    t.rounds.push_back(Round{r, m.deleted, m.query, b});
    s1.observe(m, b);
    if (falsifies(f, pos)) {
      t.p1_won = true;
      break;
    }
  }
  t.notes = s2.notes();
  return t;
}

std::string transcript_json(const Transcript& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : t.rounds) {
    nlohmann::ordered_json o;
    o["round"] = r.round;
    o["deleted"] = r.deleted;
    o["query"] = r.query;
    o["answer"] = r.answer;
    arr.push_back(std::move(o));
  }
  return arr.dump() + "\n";
}

Move OptimalP1::next_move(const Assignment& position) {
  const WinLevels& w = *w_;
  const std::uint16_t r = w.level_of(position);
  if (r == kNoWinLevel)
    throw NoWinningMove("Player 1 has no winning continuation from this position");
  if (r == 0) throw NoWinningMove("position is already falsified");
  std::vector<Var> dom;
  for (const auto& [v, b] : position) {
    (void)b;
    dom.push_back(v);
  }
  const std::uint32_t len = static_cast<std::uint32_t>(dom.size());
  std::vector<std::vector<Var>> deletions;
  for (std::uint32_t mask = 0; mask < (1U << len); ++mask) {
    if (mask == 0 && len >= w.k) continue;
    std::vector<Var> d;
    for (std::uint32_t j = 0; j < len; ++j)
      if (mask & (1U << j)) d.push_back(dom[j]);
    deletions.push_back(std::move(d));
  }
  std::sort(deletions.begin(), deletions.end());
  for (const auto& d : deletions) {
    Assignment rest = position;
    for (Var v : d) rest.erase(v);
    for (Var x = 0; x < w.formula.num_vars; ++x) {
      if (rest.count(x)) continue;
      Assignment c0 = rest;
      c0[x] = 0;
      if (w.level_of(c0) + 1 > r) continue;
      Assignment c1 = rest;
      c1[x] = 1;
      if (w.level_of(c1) + 1 > r) continue;
      return Move{d, x};
    }
  }
  throw NoWinningMove("level table is inconsistent: no move realises the recorded level");
}

std::uint8_t OptimalP2::answer(const Assignment& position, Var query) {
  Assignment c0 = position;
  c0[query] = 0;
  Assignment c1 = position;
  c1[query] = 1;
  // kNoWinLevel is the largest value, so plain comparison prefers survival.
  return w_->level_of(c1) > w_->level_of(c0) ? 1 : 0;
}

StrategyPair extract_strategies(std::shared_ptr<const WinLevels> levels) {
  return {std::make_shared<OptimalP1>(levels), std::make_shared<OptimalP2>(levels)};
}

}  // namespace xorwl
