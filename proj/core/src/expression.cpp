#include "mirrorforge/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "mirrorforge/error.hpp"

namespace mirrorforge {

std::string Variable::name() const {
  static const char* prefix[] = {"x", "y", "xt", "yt"};
  return prefix[static_cast<int>(family)] + std::to_string(index);
}

std::optional<Variable> Variable::parse(std::string_view name) {
  Family family;
  std::size_t digits = 0;
  if (name.starts_with("xt")) {
    family = Family::XT;
    digits = 2;
  } else if (name.starts_with("yt")) {
    family = Family::YT;
    digits = 2;
  } else if (name.starts_with("x")) {
    family = Family::X;
    digits = 1;
  } else if (name.starts_with("y")) {
    family = Family::Y;
    digits = 1;
  } else {
    return std::nullopt;
  }
  auto rest = name.substr(digits);
  if (rest.size() != 1 || !std::isdigit(static_cast<unsigned char>(rest[0]))) return std::nullopt;
  int index = rest[0] - '0';
  if (index < 1 || index > kMaxIndex) return std::nullopt;
  return Variable{family, index};
}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  Expression run() {
    Expression e;
    e.text_ = std::string(text_);
    out_ = &e;
    skip();
    if (pos_ >= text_.size()) throw SyntaxError("empty expression", pos_);
    e.root_ = parse_sum();
    skip();
    if (pos_ < text_.size()) throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  using Op = Expression::Op;

  int add(Op op, int lhs = -1, int rhs = -1, double value = 0.0, int slot = -1) {
    out_->nodes_.push_back({op, lhs, rhs, value, slot});
    return static_cast<int>(out_->nodes_.size()) - 1;
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+')) lhs = add(Op::Add, lhs, parse_product());
      else if (accept('-')) lhs = add(Op::Sub, lhs, parse_product());
      else return lhs;
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = add(Op::Mul, lhs, parse_unary());
      else if (accept('/')) lhs = add(Op::Div, lhs, parse_unary());
      else return lhs;
    }
  }

  int parse_unary() {
    if (accept('-')) return add(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    if (accept('^')) return add(Op::Pow, base, parse_unary());
    return base;
  }

  int parse_primary() {
    skip();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    if (accept('(')) {
      int inner = parse_sum();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  int parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw SyntaxError("malformed number '" + token + "'", start);
    }
    if (used != token.size()) throw SyntaxError("malformed number '" + token + "'", start);
    return add(Op::Number, -1, -1, v);
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    static const std::pair<std::string_view, Op> functions[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos}, {"tan", Op::Tan},   {"exp", Op::Exp},
        {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"atan", Op::Atan}};
    for (const auto& [fname, op] : functions) {
      if (name == fname) {
        if (!accept('(')) throw SyntaxError("expected '(' after " + std::string(name), pos_);
        int arg = parse_sum();
        if (!accept(')')) throw SyntaxError("expected ')'", pos_);
        return add(op, arg);
      }
    }
    if (name == "pi") return add(Op::Number, -1, -1, std::numbers::pi);
    if (auto var = Variable::parse(name)) return add(Op::Var, -1, -1, 0.0, var->slot());
    throw SyntaxError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Expression* out_ = nullptr;
};

Expression Expression::parse(std::string_view text) { return ExpressionParser(text).run(); }

Expression parse_expression(std::string_view text) { return Expression::parse(text); }

std::vector<Variable> Expression::variables() const {
  std::vector<Variable> vars;
  for (const auto& n : nodes_) {
    if (n.op != Op::Var) continue;
    Variable v{static_cast<Variable::Family>(n.slot / Variable::kMaxIndex), n.slot % Variable::kMaxIndex + 1};
    bool seen = false;
    for (const auto& w : vars) seen = seen || w == v;
    if (!seen) vars.push_back(v);
  }
  return vars;
}

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

}  // namespace

double Expression::eval_node(int id, std::span<const double> slots) const {
  const Node& n = nodes_[id];
  switch (n.op) {
    case Op::Number:
      return n.value;
    case Op::Var: {
      const double v = slots[n.slot];
      if (std::isnan(v)) {
        Variable var{static_cast<Variable::Family>(n.slot / Variable::kMaxIndex), n.slot % Variable::kMaxIndex + 1};
        throw InvalidArgument("variable " + var.name() + " is not bound in this context");
      }
      return v;
    }
    case Op::Add:
      return eval_node(n.lhs, slots) + eval_node(n.rhs, slots);
    case Op::Sub:
      return eval_node(n.lhs, slots) - eval_node(n.rhs, slots);
    case Op::Mul:
      return eval_node(n.lhs, slots) * eval_node(n.rhs, slots);
    case Op::Div: {
      const double d = eval_node(n.rhs, slots);
      if (d == 0.0) throw DomainError("division by zero");
      return eval_node(n.lhs, slots) / d;
    }
    case Op::Pow:
      return checked(std::pow(eval_node(n.lhs, slots), eval_node(n.rhs, slots)), "power");
    case Op::Neg:
      return -eval_node(n.lhs, slots);
    case Op::Sin:
      return std::sin(eval_node(n.lhs, slots));
    case Op::Cos:
      return std::cos(eval_node(n.lhs, slots));
    case Op::Tan:
      return checked(std::tan(eval_node(n.lhs, slots)), "tan");
    case Op::Exp:
      return checked(std::exp(eval_node(n.lhs, slots)), "exp");
    case Op::Log: {
      const double a = eval_node(n.lhs, slots);
      if (!(a > 0.0)) throw DomainError("log of a non-positive value");
      return std::log(a);
    }
    case Op::Sqrt: {
      const double a = eval_node(n.lhs, slots);
      if (a < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(a);
    }
    case Op::Atan:
      return std::atan(eval_node(n.lhs, slots));
  }
  return 0.0;
}

double Expression::evaluate(std::span<const double> slots) const {
  if (slots.size() < static_cast<std::size_t>(Variable::kSlotCount))
    throw InvalidArgument("expression evaluation needs a full slot table");
  return eval_node(root_, slots);
}

double Expression::evaluate(const std::map<std::string, double>& bindings) const {
  std::array<double, Variable::kSlotCount> slots;
  slots.fill(std::nan(""));
  for (const auto& [name, value] : bindings) {
    auto var = Variable::parse(name);
    if (!var) throw InvalidArgument("not a variable name: " + name);
    slots[var->slot()] = value;
  }
  return evaluate(slots);
}

ScalarField sample(const Expression& expr, const Grid& grid, const std::vector<std::string>& axis_variables) {
  const int m = grid.dimension();
  std::vector<int> axis_slot(m);
  for (int a = 0; a < m; ++a) {
    std::string name = axis_variables.empty() ? "x" + std::to_string(a + 1) : axis_variables.at(a);
    auto var = Variable::parse(name);
    if (!var) throw InvalidArgument("not a variable name: " + name);
    axis_slot[a] = var->slot();
  }
  ScalarField out(grid, expr.text());
  std::array<double, Variable::kSlotCount> slots;
  slots.fill(std::nan(""));
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    for (int a = 0; a < m; ++a) slots[axis_slot[a]] = grid.coordinate(n, a);
    out[n] = expr.evaluate(slots);
  }
  return out;
}

}  // namespace mirrorforge
