#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "circlex/expr.hpp"

using namespace circlex;

namespace {

bool close(Complex a, Complex b, double tol = 1e-14) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST_CASE("parse detects the rational template") {
  const FunctionModel f = parse("z^2/conj(z)");
  CHECK(f.kind() == ModelKind::rational);
  // P = z^2, Q = conj(z)
  CHECK(close(eval_zw(f.numerator(), {2.0, 1.0}, {0.0, 0.0}), Complex{3.0, 4.0}));
  CHECK(close(eval_zw(f.denominator(), {2.0, 1.0}, {5.0, -3.0}), Complex{5.0, -3.0}));
}

TEST_CASE("bare identity stays general") {
  const FunctionModel f = parse("z");
  CHECK(f.kind() == ModelKind::general);
  CHECK(close(evaluate(f, {3.0, -2.0}), Complex{3.0, -2.0}));
}

TEST_CASE("let binding declares a line-constant model") {
  const FunctionModel f = parse("let g(w)=w^2 in g(z/conj(z))");
  CHECK(f.kind() == ModelKind::line_constant);
  CHECK(f.constant_g_name() == "g");
  const Complex z{1.0, 2.0};
  const Complex expected = (z / std::conj(z)) * (z / std::conj(z));
  CHECK(close(evaluate(f, z), expected));
}

TEST_CASE("ray template") {
  const FunctionModel f = parse("let g(w)=w in g(z/abs(z))");
  CHECK(f.kind() == ModelKind::ray_constant);
  CHECK(close(evaluate(f, {0.0, 2.0}), Complex{0.0, 1.0}));
}

TEST_CASE("evaluation matches hand arithmetic") {
  const FunctionModel f = parse("z^2/conj(z)");
  // (1+i)^2/(1-i) = 2i (1+i)/2 = -1+i
  CHECK(close(evaluate(f, {1.0, 1.0}), Complex{-1.0, 1.0}));
}

TEST_CASE("evaluation errors") {
  const FunctionModel f = parse("z");
  CHECK_THROWS_AS(evaluate(f, {0.0, 0.0}), EvalError);
  const FunctionModel g = parse("1/(z-1)");
  CHECK_THROWS_AS(evaluate(g, {1.0, 0.0}), EvalError);  // zero-magnitude denominator
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse("z+"), ParseError);
  CHECK_THROWS_AS(parse("h(z)"), ParseError);        // unknown function name
  CHECK_THROWS_AS(parse("z/0"), ParseError);         // literal zero denominator
  CHECK_THROWS_AS(parse("z^1.5"), ParseError);       // non-integer exponent
  CHECK_THROWS_AS(parse("let g(w)=z in g(z)"), ParseError);  // z hidden in bodies
  try {
    parse("z + % z");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("negative and zero exponents") {
  const FunctionModel f = parse("z^-2");
  CHECK(close(evaluate(f, {2.0, 0.0}), Complex{0.25, 0.0}));
  const FunctionModel g = parse("z^0");
  CHECK(close(evaluate(g, {5.0, 1.0}), Complex{1.0, 0.0}));
}

TEST_CASE("scale invariance of the declared templates") {
  const FunctionModel line = parse("let g(w)=w^2+0.5*w in g(z/conj(z))");
  CHECK(scale_invariance_check(line, ScaleKind::line, 200, 11) < 1e-12);
  const FunctionModel ray = parse("let g(w)=w^3 in g(z/abs(z))");
  CHECK(scale_invariance_check(ray, ScaleKind::ray, 200, 12) < 1e-12);
  // The identity is not ray-constant: the residual is of order |z (t-1)|.
  const FunctionModel ident = parse("z");
  CHECK(scale_invariance_check(ident, ScaleKind::ray, 200, 13) > 0.1);
}

TEST_CASE("line template is not ray-invariant under sign flips only") {
  // g(z/conj(z)) must also pass the ray check (rays are a subset of lines).
  const FunctionModel line = parse("let g(w)=w in g(z/conj(z))");
  CHECK(scale_invariance_check(line, ScaleKind::ray, 100, 14) < 1e-12);
}

TEST_CASE("rational evaluation agrees with the explicit P/Q route") {
  const FunctionModel f = parse("(z^2*conj(z)-z+1)/(conj(z)^2+3)");
  REQUIRE(f.kind() == ModelKind::rational);
  auto rng = make_rng(21);
  for (int i = 0; i < 100; ++i) {
    const Complex z = random_complex(rng, 0.2, 4.0);
    const Complex q = eval_zw(f.denominator(), z, std::conj(z));
    if (std::abs(q) <= 1e-10) continue;
    const Complex direct = eval_zw(f.numerator(), z, std::conj(z)) / q;
    CHECK(close(evaluate(f, z), direct));
  }
}

TEST_CASE("formal conjugation in eval_zw") {
  // conj(c z) as a formal polynomial is conj(c) w.
  const ExprPtr e = make_conj(make_mul(make_const({2.0, 3.0}), make_var()));
  const Complex z{0.5, -0.25};
  const Complex w{4.0, 1.0};
  CHECK(close(eval_zw(e, z, w), std::conj(Complex{2.0, 3.0}) * w));
  // Double conjugation returns the plain variable.
  const ExprPtr e2 = make_conj(make_conj(make_var()));
  CHECK(close(eval_zw(e2, z, w), z));
}

TEST_CASE("print/parse round trip on a fixed corpus") {
  const char* corpus[] = {
      "z^2/conj(z)",
      "z",
      "conj(z)",
      "let g(w)=w^2 in g(z/conj(z))",
      "let g(w)=w in g(z/abs(z))",
      "let g(w)=w^3+0.2*w in g(z/conj(z))",
      "(z-(2+1*i))*(conj(z)-(2-1*i))-1",
      "abs(z)^2-z*conj(z)",
      "1/(z-0.5)",
      "-z^2+0.25",
      "let f(u)=u^2 in let g(w)=f(w)+w in g(z/conj(z))",
  };
  auto rng = make_rng(33);
  for (const char* text : corpus) {
    const FunctionModel f = parse(text);
    const FunctionModel g = parse(to_string(f));
    for (int i = 0; i < 100; ++i) {
      const Complex z = random_complex(rng, 0.2, 4.0);
      Complex a, b;
      bool ea = false, eb = false;
      try {
        a = evaluate(f, z);
      } catch (const EvalError&) {
        ea = true;
      }
      try {
        b = evaluate(g, z);
      } catch (const EvalError&) {
        eb = true;
      }
      CHECK(ea == eb);
      if (!ea && !eb) CHECK(close(a, b));
    }
  }
}

TEST_CASE("parse accepts scientific-notation literals") {
  const FunctionModel f = parse("1e-2*z+2.5E3");
  CHECK(close(evaluate(f, {1.0, 0.0}), Complex{2500.01, 0.0}));
}

TEST_CASE("native models evaluate and carry their name") {
  const FunctionModel f = FunctionModel::native("square", [](Complex u) { return u * u; });
  CHECK(close(f.eval({0.0, 1.0}), Complex{-1.0, 0.0}));
  CHECK(to_string(f) == "square");
}

TEST_CASE("ray_constant factory composes a native g") {
  const FunctionModel g = FunctionModel::native("g", [](Complex u) { return u * u * u; });
  const FunctionModel f = FunctionModel::ray_constant("g", g);
  CHECK(f.kind() == ModelKind::ray_constant);
  const Complex z{3.0, 4.0};  // z/|z| = (3+4i)/5
  const Complex u = z / std::abs(z);
  CHECK(close(evaluate(f, z), u * u * u));
}

TEST_CASE("error propagation bound dominates actual rounding noise") {
  const FunctionModel f = parse("(z-2)*(conj(z)-2)-1");
  auto rng = make_rng(5);
  for (int i = 0; i < 50; ++i) {
    const Complex z = Complex{2.0, 0.0} + unit_complex(rng);  // on the zero circle
    const auto ve = f.eval_with_error(z, 1e-15);
    CHECK(std::abs(ve.value) <= 64.0 * std::max(ve.error, 1e-18));
    CHECK(ve.error < 1e-12);
  }
}
