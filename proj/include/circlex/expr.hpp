#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "circlex/common.hpp"

namespace circlex {

enum class NodeKind { Var, Const, Conj, Abs, Add, Sub, Mul, Div, IntPow, Call };

/// Immutable expression tree over one complex variable, its conjugate and
/// its modulus.  Subtrees are shared and never mutated after construction,
/// so models built from them are safe to use from parallel workers.
struct ExprNode {
  using Ptr = std::shared_ptr<const ExprNode>;
  NodeKind kind;
  Complex value{};        // Const
  int exponent = 0;       // IntPow
  std::string call_name;  // Call
  Ptr a, b;               // operands; unary nodes use a only
};
using ExprPtr = ExprNode::Ptr;

ExprPtr make_var();
ExprPtr make_const(Complex c);
ExprPtr make_conj(ExprPtr e);
ExprPtr make_abs(ExprPtr e);
ExprPtr make_add(ExprPtr l, ExprPtr r);
ExprPtr make_sub(ExprPtr l, ExprPtr r);
ExprPtr make_mul(ExprPtr l, ExprPtr r);
ExprPtr make_div(ExprPtr l, ExprPtr r);
ExprPtr make_pow(ExprPtr base, int exponent);
ExprPtr make_call(std::string name, ExprPtr arg);

/// True when the tree is a polynomial in the variable and its conjugate:
/// no Abs, no Call, no negative powers.
bool is_polynomial(const ExprPtr& e);

/// Evaluates a polynomial tree with the variable set to z and its formal
/// conjugate set to w, the two being treated as independent.  Throws
/// DomainError on Abs or Call nodes.
Complex eval_zw(const ExprPtr& e, Complex z, Complex w);

enum class ModelKind { general, rational, line_constant, ray_constant };

class Registry;

/// A parsed or programmatically built function of one complex variable.
/// `rational` models carry an explicit numerator/denominator pair which is
/// polynomial in z and conj(z); `line_constant` and `ray_constant` models
/// are declared composites g(z/conj(z)) and g(z/abs(z)) for a registered
/// single-variable g.  Kinds come from these declared templates and are
/// never inferred by sampling.
class FunctionModel {
 public:
  FunctionModel() = default;

  /// Wraps an expression tree; detects the declared-template kinds.
  static FunctionModel from_ast(ExprPtr root,
                                std::shared_ptr<const Registry> registry = nullptr,
                                std::string parameter = "z");
  /// Explicit rational model P/Q with P, Q polynomial in z and conj(z).
  static FunctionModel rational(ExprPtr numerator, ExprPtr denominator);
  /// Single-variable function backed by a closed-form native evaluator.
  static FunctionModel native(std::string display_name,
                              std::function<Complex(Complex)> fn);
  /// f(z) = g(z/conj(z)), constant on lines through the origin.
  static FunctionModel line_constant(std::string g_name, FunctionModel g);
  /// f(z) = g(z/abs(z)), constant on rays from the origin.
  static FunctionModel ray_constant(std::string g_name, FunctionModel g);

  ModelKind kind() const { return kind_; }
  bool valid() const { return root_ != nullptr || native_ != nullptr; }
  bool is_native() const { return native_ != nullptr; }
  const ExprPtr& root() const { return root_; }
  const ExprPtr& numerator() const;    // rational models only
  const ExprPtr& denominator() const;  // rational models only
  const std::string& constant_g_name() const { return g_name_; }
  const FunctionModel& constant_g() const;
  const std::shared_ptr<const Registry>& registry() const { return registry_; }
  const std::string& parameter() const { return parameter_; }
  const std::string& display_name() const { return native_name_; }

  /// Raw evaluation without the origin guard; see evaluate().
  Complex eval(Complex z) const;

  /// Evaluation with first-order rounding-error propagation.  `z_error` is
  /// an absolute bound on the error already present in z.
  struct ValueWithError {
    Complex value;
    double error;
  };
  ValueWithError eval_with_error(Complex z, double z_error) const;

 private:
  ExprPtr root_;
  ExprPtr num_, den_;
  ModelKind kind_ = ModelKind::general;
  std::string g_name_;
  std::string parameter_ = "z";
  std::string native_name_;
  std::function<Complex(Complex)> native_;
  std::shared_ptr<const Registry> registry_;
};

/// Ordered table of named single-variable functions usable as Call targets.
/// Definition order is preserved so later entries may call earlier ones.
class Registry {
 public:
  Registry() = default;
  void define(std::string name, FunctionModel g);
  const FunctionModel* find(std::string_view name) const;
  const std::vector<std::pair<std::string, FunctionModel>>& items() const {
    return items_;
  }

 private:
  std::vector<std::pair<std::string, FunctionModel>> items_;
};

/// Parses an expression in the published grammar.  Throws ParseError with
/// the offending position on malformed input, unknown function names and
/// literal zero denominators.
FunctionModel parse(std::string_view text);

/// As parse(), with pre-registered functions (for native builtins).
FunctionModel parse(std::string_view text, const Registry& ambient);

/// Parses a single-variable function body, e.g. "w^2" with parameter "w".
FunctionModel parse_single_variable(std::string_view text,
                                    std::string_view parameter = "w");

/// Prints a model in the grammar; parsing the result yields an
/// evaluation-equivalent model.  Native components print as bare names and
/// re-parse only when the registry is supplied.
std::string to_string(const FunctionModel& f);

/// Evaluates f at z != 0.  Throws EvalError at the origin and on division
/// by a value below the machine-zero threshold.
Complex evaluate(const FunctionModel& f, Complex z);

enum class ScaleKind { line, ray };

/// Max over random (z, t) of |f(tz) - f(z)| with t real non-zero (line)
/// or positive (ray).
double scale_invariance_check(const FunctionModel& f, ScaleKind kind,
                              std::size_t samples, std::uint64_t seed);

}  // namespace circlex
