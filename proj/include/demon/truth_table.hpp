#pragma once

#include <cstdint>
#include <vector>

#include "demon/expr.hpp"

namespace demon {

/// Complete truth table over `vars` Boolean variables; row r assigns bit i of
/// r to variable i.
class TruthTable {
 public:
  static constexpr std::size_t kMaxVars = 24;

  explicit TruthTable(std::size_t vars = 0, bool value = false);
  static TruthTable variable(std::size_t vars, std::size_t i);

  std::size_t vars() const { return vars_; }
  std::size_t rows() const { return std::size_t{1} << vars_; }
  bool get(std::size_t row) const { return (w_[row >> 6] >> (row & 63)) & 1U; }
  void set(std::size_t row, bool v);

  bool is_zero() const;
  bool is_ones() const;
  bool depends_on(std::size_t i) const;
  TruthTable cofactor(std::size_t i, bool v) const;

  TruthTable operator~() const;
  TruthTable operator&(const TruthTable& o) const;
  TruthTable operator|(const TruthTable& o) const;
  bool operator==(const TruthTable& o) const { return vars_ == o.vars_ && w_ == o.w_; }

  const std::vector<std::uint64_t>& words() const { return w_; }

 private:
  void mask_tail();
  std::size_t vars_;
  std::vector<std::uint64_t> w_;
};

/// Truth table of `e` with variable i bound to order[i]; atoms missing from
/// `order` are treated as false.
TruthTable truth_table(const Expr& e, const std::vector<Atom>& order);

/// Product term: variable i is in the cube when bit i of `care` is set, with
/// polarity given by bit i of `value`.
struct Cube {
  std::uint32_t care = 0;
  std::uint32_t value = 0;
  bool operator==(const Cube&) const = default;
};

/// Irredundant sum-of-products cover (Minato-Morreale).
std::vector<Cube> isop(const TruthTable& f);
Expr sop_to_expr(const std::vector<Cube>& cubes, const std::vector<Atom>& order);

}  // namespace demon
