#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mirrorforge/field.hpp"

namespace mirrorforge {

// Variable families: x (base), y (fiber), xt (dual base), yt (dual fiber); index 1-based.
struct Variable {
  enum class Family { X, Y, XT, YT };
  static constexpr int kMaxIndex = 8;
  static constexpr int kSlotCount = 4 * kMaxIndex;

  Family family;
  int index;

  int slot() const { return static_cast<int>(family) * kMaxIndex + (index - 1); }
  std::string name() const;
  static std::optional<Variable> parse(std::string_view name);
  bool operator==(const Variable&) const = default;
};

// Parsed arithmetic expression over the variables above, constants, + - * / ^,
// sin cos tan exp log sqrt atan and pi.
class Expression {
 public:
  static Expression parse(std::string_view text);

  const std::string& text() const noexcept { return text_; }
  std::vector<Variable> variables() const;

  // slots has Variable::kSlotCount entries; an unbound slot used by the expression
  // must hold NaN and produces an InvalidArgument.
  double evaluate(std::span<const double> slots) const;
  double evaluate(const std::map<std::string, double>& bindings) const;

  bool operator==(const Expression& other) const { return text_ == other.text_; }

 private:
  enum class Op { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Atan };
  struct Node {
    Op op;
    int lhs = -1;
    int rhs = -1;
    double value = 0.0;
    int slot = -1;
  };
  friend class ExpressionParser;

  double eval_node(int id, std::span<const double> slots) const;

  std::string text_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

Expression parse_expression(std::string_view text);

// Samples expr at grid nodes. axis_variables names the variable bound to each grid axis;
// the default binds x1..xm.
ScalarField sample(const Expression& expr, const Grid& grid, const std::vector<std::string>& axis_variables = {});

}  // namespace mirrorforge
