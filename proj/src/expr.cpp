#include "circlex/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace circlex {

namespace {

ExprPtr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

Complex int_pow(Complex base, int exponent) {
  if (exponent == 0) return {1.0, 0.0};
  unsigned long long k = exponent < 0
                             ? static_cast<unsigned long long>(-static_cast<long long>(exponent))
                             : static_cast<unsigned long long>(exponent);
  Complex acc{1.0, 0.0};
  Complex b = base;
  while (k != 0) {
    if (k & 1ull) acc *= b;
    b *= b;
    k >>= 1;
  }
  if (exponent < 0) {
    if (std::abs(acc) < kMachineZero)
      throw EvalError("negative power of a zero-magnitude value");
    acc = Complex{1.0, 0.0} / acc;
  }
  return acc;
}

}  // namespace

ExprPtr make_var() { return node({NodeKind::Var, {}, 0, {}, nullptr, nullptr}); }
ExprPtr make_const(Complex c) { return node({NodeKind::Const, c, 0, {}, nullptr, nullptr}); }
ExprPtr make_conj(ExprPtr e) { return node({NodeKind::Conj, {}, 0, {}, std::move(e), nullptr}); }
ExprPtr make_abs(ExprPtr e) { return node({NodeKind::Abs, {}, 0, {}, std::move(e), nullptr}); }
ExprPtr make_add(ExprPtr l, ExprPtr r) {
  return node({NodeKind::Add, {}, 0, {}, std::move(l), std::move(r)});
}
ExprPtr make_sub(ExprPtr l, ExprPtr r) {
  return node({NodeKind::Sub, {}, 0, {}, std::move(l), std::move(r)});
}
ExprPtr make_mul(ExprPtr l, ExprPtr r) {
  return node({NodeKind::Mul, {}, 0, {}, std::move(l), std::move(r)});
}
ExprPtr make_div(ExprPtr l, ExprPtr r) {
  return node({NodeKind::Div, {}, 0, {}, std::move(l), std::move(r)});
}
ExprPtr make_pow(ExprPtr base, int exponent) {
  return node({NodeKind::IntPow, {}, exponent, {}, std::move(base), nullptr});
}
ExprPtr make_call(std::string name, ExprPtr arg) {
  return node({NodeKind::Call, {}, 0, std::move(name), std::move(arg), nullptr});
}

bool is_polynomial(const ExprPtr& e) {
  if (!e) return false;
  switch (e->kind) {
    case NodeKind::Var:
    case NodeKind::Const:
      return true;
    case NodeKind::Conj:
      return is_polynomial(e->a);
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
      return is_polynomial(e->a) && is_polynomial(e->b);
    case NodeKind::IntPow:
      return e->exponent >= 0 && is_polynomial(e->a);
    case NodeKind::Div:
    case NodeKind::Abs:
    case NodeKind::Call:
      return false;
  }
  return false;
}

Complex eval_zw(const ExprPtr& e, Complex z, Complex w) {
  switch (e->kind) {
    case NodeKind::Var:
      return z;
    case NodeKind::Const:
      return e->value;
    case NodeKind::Conj:
      // Formal conjugation swaps the roles of the two variables:
      // conj(e)(z, w) = conj(e(conj(w), conj(z))).
      return std::conj(eval_zw(e->a, std::conj(w), std::conj(z)));
    case NodeKind::Add:
      return eval_zw(e->a, z, w) + eval_zw(e->b, z, w);
    case NodeKind::Sub:
      return eval_zw(e->a, z, w) - eval_zw(e->b, z, w);
    case NodeKind::Mul:
      return eval_zw(e->a, z, w) * eval_zw(e->b, z, w);
    case NodeKind::Div: {
      const Complex den = eval_zw(e->b, z, w);
      if (std::abs(den) < kMachineZero) throw EvalError("division by zero-magnitude value");
      return eval_zw(e->a, z, w) / den;
    }
    case NodeKind::IntPow:
      return int_pow(eval_zw(e->a, z, w), e->exponent);
    case NodeKind::Abs:
    case NodeKind::Call:
      throw DomainError("expression is not a polynomial in z and conj(z)");
  }
  throw DomainError("malformed expression node");
}

// ---------------------------------------------------------------------------
// FunctionModel

void Registry::define(std::string name, FunctionModel g) {
  items_.emplace_back(std::move(name), std::move(g));
}

const FunctionModel* Registry::find(std::string_view name) const {
  for (const auto& [n, g] : items_)
    if (n == name) return &g;
  return nullptr;
}

namespace {

bool is_var_node(const ExprPtr& e) { return e && e->kind == NodeKind::Var; }

bool is_line_argument(const ExprPtr& e) {
  return e && e->kind == NodeKind::Div && is_var_node(e->a) && e->b &&
         e->b->kind == NodeKind::Conj && is_var_node(e->b->a);
}

bool is_ray_argument(const ExprPtr& e) {
  return e && e->kind == NodeKind::Div && is_var_node(e->a) && e->b &&
         e->b->kind == NodeKind::Abs && is_var_node(e->b->a);
}

}  // namespace

FunctionModel FunctionModel::from_ast(ExprPtr root, std::shared_ptr<const Registry> registry,
                                      std::string parameter) {
  FunctionModel f;
  f.root_ = std::move(root);
  f.registry_ = std::move(registry);
  f.parameter_ = std::move(parameter);
  const ExprPtr& r = f.root_;
  if (r->kind == NodeKind::Div && is_polynomial(r->a) && is_polynomial(r->b)) {
    f.kind_ = ModelKind::rational;
    f.num_ = r->a;
    f.den_ = r->b;
  } else if (r->kind == NodeKind::Call && is_line_argument(r->a)) {
    f.kind_ = ModelKind::line_constant;
    f.g_name_ = r->call_name;
  } else if (r->kind == NodeKind::Call && is_ray_argument(r->a)) {
    f.kind_ = ModelKind::ray_constant;
    f.g_name_ = r->call_name;
  }
  return f;
}

FunctionModel FunctionModel::rational(ExprPtr numerator, ExprPtr denominator) {
  if (!is_polynomial(numerator) || !is_polynomial(denominator))
    throw DomainError("rational model requires polynomial numerator and denominator");
  FunctionModel f;
  f.num_ = numerator;
  f.den_ = denominator;
  f.root_ = make_div(std::move(numerator), std::move(denominator));
  f.kind_ = ModelKind::rational;
  return f;
}

FunctionModel FunctionModel::native(std::string display_name,
                                    std::function<Complex(Complex)> fn) {
  FunctionModel f;
  f.native_name_ = std::move(display_name);
  f.native_ = std::move(fn);
  return f;
}

namespace {

FunctionModel composite_constant(std::string g_name, FunctionModel g, ModelKind kind) {
  auto reg = std::make_shared<Registry>();
  reg->define(g_name, std::move(g));
  ExprPtr arg = kind == ModelKind::line_constant
                    ? make_div(make_var(), make_conj(make_var()))
                    : make_div(make_var(), make_abs(make_var()));
  FunctionModel f = FunctionModel::from_ast(make_call(std::move(g_name), std::move(arg)),
                                            std::move(reg));
  return f;
}

}  // namespace

FunctionModel FunctionModel::line_constant(std::string g_name, FunctionModel g) {
  return composite_constant(std::move(g_name), std::move(g), ModelKind::line_constant);
}

FunctionModel FunctionModel::ray_constant(std::string g_name, FunctionModel g) {
  return composite_constant(std::move(g_name), std::move(g), ModelKind::ray_constant);
}

const ExprPtr& FunctionModel::numerator() const {
  if (kind_ != ModelKind::rational) throw DomainError("model has no rational form");
  return num_;
}

const ExprPtr& FunctionModel::denominator() const {
  if (kind_ != ModelKind::rational) throw DomainError("model has no rational form");
  return den_;
}

const FunctionModel& FunctionModel::constant_g() const {
  if (kind_ != ModelKind::line_constant && kind_ != ModelKind::ray_constant)
    throw DomainError("model has no composed boundary function");
  const FunctionModel* g = registry_ ? registry_->find(g_name_) : nullptr;
  if (!g) throw DomainError("composed function '" + g_name_ + "' is not registered");
  return *g;
}

namespace {

Complex eval_node(const ExprPtr& e, Complex z, const Registry* reg) {
  switch (e->kind) {
    case NodeKind::Var:
      return z;
    case NodeKind::Const:
      return e->value;
    case NodeKind::Conj:
      return std::conj(eval_node(e->a, z, reg));
    case NodeKind::Abs:
      return {std::abs(eval_node(e->a, z, reg)), 0.0};
    case NodeKind::Add:
      return eval_node(e->a, z, reg) + eval_node(e->b, z, reg);
    case NodeKind::Sub:
      return eval_node(e->a, z, reg) - eval_node(e->b, z, reg);
    case NodeKind::Mul:
      return eval_node(e->a, z, reg) * eval_node(e->b, z, reg);
    case NodeKind::Div: {
      const Complex den = eval_node(e->b, z, reg);
      if (std::abs(den) < kMachineZero) throw EvalError("division by zero-magnitude value");
      return eval_node(e->a, z, reg) / den;
    }
    case NodeKind::IntPow:
      return int_pow(eval_node(e->a, z, reg), e->exponent);
    case NodeKind::Call: {
      const FunctionModel* g = reg ? reg->find(e->call_name) : nullptr;
      if (!g) throw EvalError("call to unregistered function '" + e->call_name + "'");
      return g->eval(eval_node(e->a, z, reg));
    }
  }
  throw EvalError("malformed expression node");
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct ValErr {
  Complex v;
  double e;
};

ValErr eval_err_node(const ExprPtr& n, Complex z, double z_err, const Registry* reg) {
  switch (n->kind) {
    case NodeKind::Var:
      return {z, z_err};
    case NodeKind::Const:
      return {n->value, 0.0};
    case NodeKind::Conj: {
      auto c = eval_err_node(n->a, z, z_err, reg);
      return {std::conj(c.v), c.e};
    }
    case NodeKind::Abs: {
      auto c = eval_err_node(n->a, z, z_err, reg);
      return {{std::abs(c.v), 0.0}, c.e + kEps * std::abs(c.v)};
    }
    case NodeKind::Add:
    case NodeKind::Sub: {
      auto l = eval_err_node(n->a, z, z_err, reg);
      auto r = eval_err_node(n->b, z, z_err, reg);
      Complex v = n->kind == NodeKind::Add ? l.v + r.v : l.v - r.v;
      return {v, l.e + r.e + kEps * std::abs(v)};
    }
    case NodeKind::Mul: {
      auto l = eval_err_node(n->a, z, z_err, reg);
      auto r = eval_err_node(n->b, z, z_err, reg);
      Complex v = l.v * r.v;
      return {v, std::abs(l.v) * r.e + std::abs(r.v) * l.e + 2.0 * kEps * std::abs(v)};
    }
    case NodeKind::Div: {
      auto l = eval_err_node(n->a, z, z_err, reg);
      auto r = eval_err_node(n->b, z, z_err, reg);
      const double rm = std::abs(r.v);
      if (rm < kMachineZero) throw EvalError("division by zero-magnitude value");
      Complex v = l.v / r.v;
      return {v, (l.e + std::abs(v) * r.e) / rm + 2.0 * kEps * std::abs(v)};
    }
    case NodeKind::IntPow: {
      auto c = eval_err_node(n->a, z, z_err, reg);
      Complex v = int_pow(c.v, n->exponent);
      const double k = std::abs(static_cast<double>(n->exponent));
      const double base = std::abs(c.v);
      double deriv = base > 0.0 ? k * std::abs(v) / base : 0.0;
      return {v, deriv * c.e + (k + 1.0) * kEps * std::abs(v)};
    }
    case NodeKind::Call: {
      const FunctionModel* g = reg ? reg->find(n->call_name) : nullptr;
      if (!g) throw EvalError("call to unregistered function '" + n->call_name + "'");
      auto arg = eval_err_node(n->a, z, z_err, reg);
      auto r = g->eval_with_error(arg.v, arg.e);
      return {r.value, r.error};
    }
  }
  throw EvalError("malformed expression node");
}

}  // namespace

Complex FunctionModel::eval(Complex z) const {
  if (native_) return native_(z);
  if (!root_) throw EvalError("evaluation of an empty function model");
  return eval_node(root_, z, registry_.get());
}

FunctionModel::ValueWithError FunctionModel::eval_with_error(Complex z, double z_error) const {
  if (native_) {
    // Natives are closed-form and smooth; estimate the local derivative by
    // a secant step to propagate the incoming error.
    const Complex v = native_(z);
    const double h = std::max(std::abs(z), 1.0) * 1e-7;
    const Complex v2 = native_(z + Complex{h, 0.0});
    const double deriv = std::abs(v2 - v) / h;
    return {v, deriv * z_error + 8.0 * kEps * (std::abs(v) + 1.0)};
  }
  if (!root_) throw EvalError("evaluation of an empty function model");
  auto r = eval_err_node(root_, z, z_error, registry_.get());
  return {r.v, r.e};
}

Complex evaluate(const FunctionModel& f, Complex z) {
  if (z == Complex{0.0, 0.0})
    throw EvalError("evaluation at z = 0: the domain excludes the origin");
  return f.eval(z);
}

double scale_invariance_check(const FunctionModel& f, ScaleKind kind, std::size_t samples,
                              std::uint64_t seed) {
  auto rng = make_rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Complex z = random_complex(rng, 0.2, 5.0);
    double t = 0.0;
    if (kind == ScaleKind::line) {
      do {
        t = uniform(rng, -3.0, 3.0);
      } while (std::abs(t) < 0.05);
    } else {
      t = uniform(rng, 0.05, 3.0);
    }
    worst = std::max(worst, std::abs(f.eval(t * z) - f.eval(z)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum class Type { Ident, Number, Plus, Minus, Star, Slash, Caret, LParen, RParen, Equals, End };
  Type type = Type::End;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto push = [&](Token::Type t, std::size_t pos, std::string text = {}) {
    out.push_back({t, std::move(text), 0.0, pos});
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
          throw ParseError("malformed number: digit expected after '.'", i);
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      Token t;
      t.type = Token::Type::Number;
      t.text = std::string(s.substr(start, i - start));
      t.number = std::strtod(t.text.c_str(), nullptr);
      t.pos = start;
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i;
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      push(Token::Type::Ident, start, std::string(s.substr(start, i - start)));
      continue;
    }
    switch (c) {
      case '+': push(Token::Type::Plus, i); break;
      case '-': push(Token::Type::Minus, i); break;
      case '*': push(Token::Type::Star, i); break;
      case '/': push(Token::Type::Slash, i); break;
      case '^': push(Token::Type::Caret, i); break;
      case '(': push(Token::Type::LParen, i); break;
      case ')': push(Token::Type::RParen, i); break;
      case '=': push(Token::Type::Equals, i); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    ++i;
  }
  push(Token::Type::End, s.size());
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Registry* ambient)
      : tokens_(lex(text)), registry_(std::make_shared<Registry>()) {
    if (ambient)
      for (const auto& [name, g] : ambient->items()) registry_->define(name, g);
  }

  FunctionModel parse_model() {
    while (at_keyword("let")) parse_let();
    ExprPtr root = parse_expr("z");
    expect(Token::Type::End, "unexpected trailing input");
    return FunctionModel::from_ast(std::move(root), registry_, "z");
  }

  FunctionModel parse_single(std::string_view parameter) {
    ExprPtr root = parse_expr(std::string(parameter));
    expect(Token::Type::End, "unexpected trailing input");
    return FunctionModel::from_ast(std::move(root), registry_, std::string(parameter));
  }

 private:
  const Token& peek() const { return tokens_[idx_]; }
  const Token& get() { return tokens_[idx_++]; }

  bool at_keyword(std::string_view kw) const {
    return peek().type == Token::Type::Ident && peek().text == kw;
  }

  const Token& expect(Token::Type t, const std::string& what) {
    if (peek().type != t) throw ParseError(what, peek().pos);
    return get();
  }

  void parse_let() {
    get();  // let
    const Token& name = expect(Token::Type::Ident, "function name expected after 'let'");
    if (is_reserved(name.text))
      throw ParseError("'" + name.text + "' is reserved and cannot name a function", name.pos);
    expect(Token::Type::LParen, "'(' expected in function definition");
    const Token& param = expect(Token::Type::Ident, "parameter name expected");
    if (param.text == "i" || param.text == "conj" || param.text == "abs" ||
        param.text == "let" || param.text == "in")
      throw ParseError("'" + param.text + "' is reserved and cannot be a parameter", param.pos);
    expect(Token::Type::RParen, "')' expected after parameter name");
    expect(Token::Type::Equals, "'=' expected in function definition");
    ExprPtr body = parse_expr(param.text);
    if (!at_keyword("in")) throw ParseError("'in' expected after function body", peek().pos);
    get();
    registry_->define(name.text, FunctionModel::from_ast(std::move(body), registry_, param.text));
  }

  static bool is_reserved(const std::string& s) {
    return s == "z" || s == "i" || s == "conj" || s == "abs" || s == "let" || s == "in";
  }

  ExprPtr parse_expr(const std::string& param) {
    ExprPtr lhs = parse_term(param);
    while (peek().type == Token::Type::Plus || peek().type == Token::Type::Minus) {
      const bool add = get().type == Token::Type::Plus;
      ExprPtr rhs = parse_term(param);
      lhs = add ? make_add(std::move(lhs), std::move(rhs))
                : make_sub(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr parse_term(const std::string& param) {
    ExprPtr lhs = parse_factor(param);
    while (peek().type == Token::Type::Star || peek().type == Token::Type::Slash) {
      const Token& op = get();
      ExprPtr rhs = parse_factor(param);
      if (op.type == Token::Type::Star) {
        lhs = make_mul(std::move(lhs), std::move(rhs));
      } else {
        if (rhs->kind == NodeKind::Const && rhs->value == Complex{0.0, 0.0})
          throw ParseError("division by syntactically zero denominator", op.pos);
        lhs = make_div(std::move(lhs), std::move(rhs));
      }
    }
    return lhs;
  }

  ExprPtr parse_factor(const std::string& param) {
    if (peek().type == Token::Type::Minus) {
      get();
      return make_sub(make_const({0.0, 0.0}), parse_factor(param));
    }
    if (peek().type == Token::Type::Plus) {
      get();
      return parse_factor(param);
    }
    return parse_power(param);
  }

  ExprPtr parse_power(const std::string& param) {
    ExprPtr base = parse_atom(param);
    if (peek().type != Token::Type::Caret) return base;
    get();
    bool negative = false;
    if (peek().type == Token::Type::Minus) {
      get();
      negative = true;
    }
    const Token& e = expect(Token::Type::Number, "integer exponent expected after '^'");
    if (e.text.find('.') != std::string::npos || e.text.find('e') != std::string::npos ||
        e.text.find('E') != std::string::npos || e.number > 1e9)
      throw ParseError("exponent must be an integer", e.pos);
    int k = static_cast<int>(e.number);
    return make_pow(std::move(base), negative ? -k : k);
  }

  ExprPtr parse_atom(const std::string& param) {
    const Token& t = peek();
    switch (t.type) {
      case Token::Type::Number:
        get();
        return make_const({t.number, 0.0});
      case Token::Type::LParen: {
        get();
        ExprPtr e = parse_expr(param);
        expect(Token::Type::RParen, "')' expected");
        return e;
      }
      case Token::Type::Ident: {
        get();
        if (t.text == param) return make_var();
        if (t.text == "i") return make_const({0.0, 1.0});
        if (t.text == "conj" || t.text == "abs") {
          expect(Token::Type::LParen, "'(' expected after '" + t.text + "'");
          ExprPtr arg = parse_expr(param);
          expect(Token::Type::RParen, "')' expected");
          return t.text == "conj" ? make_conj(std::move(arg)) : make_abs(std::move(arg));
        }
        if (t.text == "z")
          throw ParseError("'z' is only available in the top-level expression", t.pos);
        if (t.text == "let" || t.text == "in")
          throw ParseError("misplaced keyword '" + t.text + "'", t.pos);
        if (peek().type == Token::Type::LParen) {
          if (!registry_->find(t.text))
            throw ParseError("unknown function name '" + t.text + "'", t.pos);
          get();
          ExprPtr arg = parse_expr(param);
          expect(Token::Type::RParen, "')' expected");
          return make_call(t.text, std::move(arg));
        }
        throw ParseError("unknown identifier '" + t.text + "'", t.pos);
      }
      default:
        throw ParseError("expression expected", t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
  std::shared_ptr<Registry> registry_;
};

}  // namespace

FunctionModel parse(std::string_view text) { return Parser(text, nullptr).parse_model(); }

FunctionModel parse(std::string_view text, const Registry& ambient) {
  return Parser(text, &ambient).parse_model();
}

FunctionModel parse_single_variable(std::string_view text, std::string_view parameter) {
  return Parser(text, nullptr).parse_single(parameter);
}

// ---------------------------------------------------------------------------
// Printer

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Precedence: Add/Sub 1, Mul/Div 2, IntPow 3; atoms 4.
void print_node(std::string& out, const ExprPtr& e, int parent_prec, const std::string& param);

void print_const(std::string& out, Complex v, int parent_prec) {
  const double re = v.real();
  const double im = v.imag();
  if (im == 0.0) {
    if (re < 0.0 || std::signbit(re)) {
      out += "(-" + fmt17(-re) + ")";
    } else {
      out += fmt17(re);
    }
    return;
  }
  if (re == 0.0 && im == 1.0) {
    out += "i";
    return;
  }
  if (re == 0.0) {
    out += im < 0.0 ? "(-" + fmt17(-im) + "*i)" : "(" + fmt17(im) + "*i)";
    return;
  }
  std::string s = "(";
  s += re < 0.0 ? "-" + fmt17(-re) : fmt17(re);
  s += im < 0.0 ? "-" + fmt17(-im) : "+" + fmt17(im);
  s += "*i)";
  out += s;
  (void)parent_prec;
}

void print_binary(std::string& out, const ExprPtr& e, int prec, int parent_prec,
                  const char* op, const std::string& param) {
  const bool parens = prec < parent_prec;
  if (parens) out += "(";
  print_node(out, e->a, prec, param);
  out += op;
  print_node(out, e->b, prec + 1, param);
  if (parens) out += ")";
}

void print_node(std::string& out, const ExprPtr& e, int parent_prec, const std::string& param) {
  switch (e->kind) {
    case NodeKind::Var:
      out += param;
      return;
    case NodeKind::Const:
      print_const(out, e->value, parent_prec);
      return;
    case NodeKind::Conj:
      out += "conj(";
      print_node(out, e->a, 0, param);
      out += ")";
      return;
    case NodeKind::Abs:
      out += "abs(";
      print_node(out, e->a, 0, param);
      out += ")";
      return;
    case NodeKind::Sub:
      // Negation is stored as 0 - x and printed as -x.
      if (e->a->kind == NodeKind::Const && e->a->value == Complex{0.0, 0.0}) {
        const bool parens = parent_prec > 1;
        if (parens) out += "(";
        out += "-";
        print_node(out, e->b, 4, param);
        if (parens) out += ")";
        return;
      }
      print_binary(out, e, 1, parent_prec, "-", param);
      return;
    case NodeKind::Add:
      print_binary(out, e, 1, parent_prec, "+", param);
      return;
    case NodeKind::Mul:
      print_binary(out, e, 2, parent_prec, "*", param);
      return;
    case NodeKind::Div:
      print_binary(out, e, 2, parent_prec, "/", param);
      return;
    case NodeKind::IntPow: {
      print_node(out, e->a, 4, param);
      out += "^";
      out += std::to_string(e->exponent);
      return;
    }
    case NodeKind::Call:
      out += e->call_name;
      out += "(";
      print_node(out, e->a, 0, param);
      out += ")";
      return;
  }
}

}  // namespace

std::string to_string(const FunctionModel& f) {
  if (f.is_native()) return f.display_name();
  std::string out;
  if (f.registry()) {
    for (const auto& [name, g] : f.registry()->items()) {
      if (g.is_native() || !g.root()) continue;
      out += "let " + name + "(" + g.parameter() + ")=";
      print_node(out, g.root(), 0, g.parameter());
      out += " in ";
    }
  }
  print_node(out, f.root(), 0, f.parameter());
  return out;
}

}  // namespace circlex
