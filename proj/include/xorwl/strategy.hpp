#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "xorwl/pebble.hpp"
#include "xorwl/xor.hpp"

namespace xorwl {

/// One Player 1 turn: drop the pebbles on `deleted`, then ask for `query`.
struct Move {
  std::vector<Var> deleted;
  Var query = 0;
};

class P1Strategy {
 public:
  virtual ~P1Strategy() = default;
  /// Called once before the first move; may reject formulas it cannot play.
  virtual void begin(const XorFormula& f, std::uint32_t k) {
    (void)f;
    (void)k;
  }
  virtual Move next_move(const Assignment& position) = 0;
  virtual void observe(const Move& move, std::uint8_t answer) {
    (void)move;
    (void)answer;
  }
  /// Largest number of pebbles the strategy ever had on the board.
  virtual std::size_t high_water() const { return 0; }
};

class P2Strategy {
 public:
  virtual ~P2Strategy() = default;
  virtual void begin(const XorFormula& f, std::uint32_t k) {
    (void)f;
    (void)k;
  }
  /// `position` is the board after deletion, without the queried variable.
  virtual std::uint8_t answer(const Assignment& position, Var query) = 0;
  /// Free-form remarks copied into the transcript.
  virtual std::vector<std::string> notes() const { return {}; }
};

struct Round {
  std::uint32_t round = 0;
  std::vector<Var> deleted;
  Var query = 0;
  std::uint8_t answer = 0;
};

struct Transcript {
  std::vector<Round> rounds;
  bool p1_won = false;
  std::size_t high_water = 0;  // most pebbles on the board at once
  std::vector<std::string> notes;

  std::size_t length() const { return rounds.size(); }
};

/// Plays until a clause is falsified or max_rounds have been played. Illegal
/// moves raise ProtocolError naming the broken rule.
Transcript play(const XorFormula& f, std::uint32_t k, P1Strategy& s1, P2Strategy& s2,
                std::uint32_t max_rounds);

/// [{round, deleted, query, answer}, ...]
std::string transcript_json(const Transcript& t);

/// Plays from the solved levels: from a position at level r it picks the
/// first (deleted set, query) whose two answers both reach level <= r-1.
/// Deleted sets are tried in lexicographic order, then queries ascending.
class OptimalP1 : public P1Strategy {
 public:
  explicit OptimalP1(std::shared_ptr<const WinLevels> levels) : w_(std::move(levels)) {}
  Move next_move(const Assignment& position) override;

 private:
  std::shared_ptr<const WinLevels> w_;
};

/// Answers the bit whose resulting level is highest (never-losing first),
/// 0 on ties.
class OptimalP2 : public P2Strategy {
 public:
  explicit OptimalP2(std::shared_ptr<const WinLevels> levels) : w_(std::move(levels)) {}
  std::uint8_t answer(const Assignment& position, Var query) override;

 private:
  std::shared_ptr<const WinLevels> w_;
};

/// Answers according to a fixed total assignment.
class ModelP2 : public P2Strategy {
 public:
  explicit ModelP2(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}
  std::uint8_t answer(const Assignment&, Var query) override { return bits_.at(query); }

 private:
  std::vector<std::uint8_t> bits_;
};

struct StrategyPair {
  std::shared_ptr<OptimalP1> p1;
  std::shared_ptr<OptimalP2> p2;
};

StrategyPair extract_strategies(std::shared_ptr<const WinLevels> levels);

}  // namespace xorwl
