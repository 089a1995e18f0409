#include "circlex/characterize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace circlex {

MobiusParams MobiusParams::from(double d, double alpha) {
  MobiusParams p;
  p.d = d;
  p.t = t_from_d(d);
  p.alpha = alpha;
  return p;
}

double t_from_d(double d) {
  if (!(d >= 0.0) || !(d < 1.0)) throw DomainError("t_from_d requires 0 <= d < 1");
  return d / (1.0 + std::sqrt(1.0 - d * d));
}

double mobius_composition_identity(double a, std::size_t samples) {
  if (!(a > 0.0) || !(a < 1.0))
    throw DomainError("the composition identity requires 0 < a < 1");
  const double t = t_from_d(a);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Complex xi =
        std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(samples));
    const Complex m = (xi - t) / (1.0 - t * xi);
    const Complex lhs = (a + m) / (1.0 + a * m);
    const Complex rhs = (xi + t) / (1.0 + t * xi);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double line_boundary_transport(const FunctionModel& g, Complex a, double rho,
                               std::size_t samples) {
  if (!(std::abs(a) < rho))
    throw DomainError("line boundary transport requires |a| < rho");
  const Complex c = a / rho;
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Complex zeta =
        std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(samples));
    const Complex z = a + zeta * rho;
    const Complex lhs = g.eval(z / std::conj(z));
    const Complex rhs = g.eval(zeta * (zeta + c) / (1.0 + std::conj(c) * zeta));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

RayTransport ray_boundary_transport(double alpha, double d, const FunctionModel& f,
                                    std::size_t samples) {
  if (f.kind() != ModelKind::ray_constant && f.kind() != ModelKind::line_constant)
    throw DomainError("ray boundary transport requires a ray- or line-constant model");
  if (!(std::abs(d) < 1.0)) throw DomainError("ray boundary transport requires |d| < 1");
  if (!is_power_of_two(samples) || samples < 1024)
    throw DomainError("branch tracking requires a power-of-two sample count >= 1024");

  const Complex rot = std::polar(1.0, alpha);
  CircleSamples cs;
  cs.circle = Circle{Complex{0.0, 0.0}, 1.0};
  cs.count = samples;
  cs.offset = 0.0;
  cs.values.resize(samples);
  double lifted_arg = 0.0;
  Complex prev_m{1.0, 0.0};  // value at zeta = 1, where the branch is sqrt(1) = 1
  for (std::size_t k = 0; k < samples; ++k) {
    const Complex zeta =
        std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(samples));
    const Complex m = zeta * (d + zeta) / (1.0 + d * zeta);
    const double jump = std::arg(m / prev_m);
    if (std::abs(jump) > 0.5 * kPi)
      throw DomainError("branch tracking lost between adjacent samples; the sampling "
                        "is too coarse to resolve the square root, increase N");
    lifted_arg += jump;
    prev_m = m;
    const Complex root = std::sqrt(std::abs(m)) * std::polar(1.0, 0.5 * lifted_arg);
    cs.values[k] = f.eval(rot * root);
  }

  RayTransport out;
  out.q_spectrum = spectrum(cs);
  out.q = std::move(cs.values);
  return out;
}

double evenness_defect(const FunctionModel& g, std::size_t n) {
  if (!is_power_of_two(n) || n < 8)
    throw DomainError("sample count must be a power of two >= 8");
  CircleSamples cs;
  cs.circle = Circle{Complex{0.0, 0.0}, 1.0};
  cs.count = n;
  cs.offset = 0.0;
  cs.values.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    cs.values[k] =
        g.eval(std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)));
  const BoundarySpectrum sp = spectrum(cs);
  if (sp.total_energy() <= 1e-30) return 0.0;
  double odd = 0.0;
  const long N = static_cast<long>(n);
  for (long j = -N / 2 + 1; j <= N / 2; ++j)
    if (j % 2 != 0) odd += std::norm(sp.coefficient(j));
  return std::sqrt(odd / sp.total_energy());
}

// ---------------------------------------------------------------------------
// Scans

namespace {

std::size_t default_workers() {
  if (const char* env = std::getenv("CIRCLEX_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

}  // namespace

DefectMap defect_scan(const FunctionModel& f, double radius, const GridSpec& grid,
                      std::size_t n, double tolerance, std::size_t workers) {
  if (!(radius > 0.0)) throw DomainError("scan radius must be positive");
  if (!(grid.step > 0.0)) throw DomainError("grid step must be positive");
  if (!(grid.re1 >= grid.re0) || !(grid.im1 >= grid.im0))
    throw DomainError("grid ranges must be non-empty");

  DefectMap map;
  map.radius = radius;
  map.grid = grid;
  map.cols = static_cast<std::size_t>((grid.re1 - grid.re0) / grid.step + 1.0 + 1e-9);
  map.rows = static_cast<std::size_t>((grid.im1 - grid.im0) / grid.step + 1.0 + 1e-9);
  map.cells.resize(map.cols * map.rows);

  const std::size_t total = map.cells.size();
  const std::size_t nworkers = std::min<std::size_t>(
      workers == 0 ? default_workers() : workers, std::max<std::size_t>(total, 1));

  std::atomic<std::size_t> next{0};
  const auto run = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const std::size_t ix = idx % map.cols;
      const std::size_t iy = idx / map.cols;
      const Complex center{grid.re0 + static_cast<double>(ix) * grid.step,
                           grid.im0 + static_cast<double>(iy) * grid.step};
      DefectCell& cell = map.cells[idx];
      cell.center = center;
      try {
        const DefectReport rep = extension_defect(f, Circle{center, radius}, n, tolerance);
        cell.defect = rep.defect;
        cell.verdict = rep.verdict;
      } catch (const std::exception& e) {
        cell.defect = std::numeric_limits<double>::quiet_NaN();
        cell.verdict = Verdict::inconclusive;
        cell.error = e.what();
      }
    }
  };

  if (nworkers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (std::size_t i = 0; i < nworkers; ++i) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  for (const auto& cell : map.cells)
    if (cell.verdict == Verdict::extends) map.minima.push_back(cell.center);
  return map;
}

// ---------------------------------------------------------------------------
// Example families

namespace {

// (z - a)(conj(z) - conj(a)) - rho^2 as an expression tree.
ExprPtr circle_bracket(Complex a, double rho) {
  return make_sub(make_mul(make_sub(make_var(), make_const(a)),
                           make_sub(make_conj(make_var()), make_const(std::conj(a)))),
                  make_const({rho * rho, 0.0}));
}

}  // namespace

FunctionModel make_vanishing_example(Complex a, double rho) {
  if (!(std::abs(a) > rho) || !(rho > 0.0))
    throw DomainError("the vanishing example requires |a| > rho > 0");
  ExprPtr num = make_mul(make_pow(make_var(), 2), circle_bracket(a, rho));
  return FunctionModel::rational(std::move(num), make_conj(make_var()));
}

FunctionModel make_vanishing_product(const std::vector<std::pair<Complex, double>>& factors) {
  if (factors.empty()) throw DomainError("the product form needs at least one factor");
  for (const auto& [a, rho] : factors)
    if (!(std::abs(a) > rho) || !(rho > 0.0))
      throw DomainError("every factor requires |a| > rho > 0");
  const int n = static_cast<int>(factors.size());
  ExprPtr num = make_pow(make_var(), 2 * n);
  for (const auto& [a, rho] : factors) num = make_mul(std::move(num), circle_bracket(a, rho));
  return FunctionModel::rational(std::move(num), make_pow(make_conj(make_var()), n));
}

Complex circle_diffeo_inverse(double a, Complex u) {
  const double x = a * u.real();  // Re(a conj(u)) for real a
  const double s = x + std::sqrt(x * x + 1.0 - a * a);
  return s * u - a;
}

FunctionModel make_two_circle_example(double a) {
  if (!(a > 0.0) || !(a < 1.0))
    throw DomainError("the two-circle example requires 0 < a < 1");
  auto inv = [a](Complex u) { return circle_diffeo_inverse(a, u); };
  return FunctionModel::ray_constant("phi_inv", FunctionModel::native("phi_inv", inv));
}

FunctionModel make_noneven_ray_example(const FunctionModel& g) {
  const double e = evenness_defect(g, 1024);
  if (e < 1e-10)
    throw DomainError("g is numerically even (evenness defect " + std::to_string(e) +
                      "); an even boundary function lifts to a line-constant f that "
                      "extends from every circle surrounding the origin, so this "
                      "construction requires a non-even g");
  return FunctionModel::ray_constant("g", g);
}

WitnessReport evenness_witness(const FunctionModel& f, Circle c1, Circle c2,
                               double tolerance) {
  if (f.kind() != ModelKind::ray_constant && f.kind() != ModelKind::line_constant)
    throw DomainError("the evenness witness requires a ray- or line-constant model");
  for (const Circle& c : {c1, c2}) {
    if (std::abs(c.radius - 1.0) > 1e-9)
      throw DomainError("the evenness witness requires radius-one circles");
    if (!(std::abs(c.center) < 1.0))
      throw DomainError("the evenness witness requires centers in the open unit disc");
  }
  if (std::abs(c2.center - c1.center) < 1e-9 || std::abs(c2.center + c1.center) < 1e-9)
    throw DomainError("the second center must differ from both the first center and "
                      "its antipode");

  WitnessReport rep;
  rep.first = extension_defect(f, c1);
  rep.second = extension_defect(f, c2);
  rep.evenness = evenness_defect(f, 1024);
  const bool both = rep.first.verdict == Verdict::extends &&
                    rep.second.verdict == Verdict::extends;
  rep.consistent = !both || rep.evenness < tolerance;
  return rep;
}

SubstitutionChain ray_substitution_chain(const MobiusParams& p1, const MobiusParams& p2,
                                         std::size_t samples) {
  if (samples < 16) throw DomainError("the substitution chain needs at least 16 samples");
  const Complex a1 = p1.blaschke_square();
  const Complex a2 = p2.blaschke_square();

  std::vector<Complex> u(samples), v(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const Complex zeta =
        std::polar(1.0, 2.0 * kPi * (static_cast<double>(k) + 0.37) /
                            static_cast<double>(samples));
    const Complex x = zeta * zeta;
    u[k] = (x + a1) / (1.0 + std::conj(a1) * x);
    v[k] = (x + a2) / (1.0 + std::conj(a2) * x);
  }

  // v = mu (u + C)/(1 + conj(C) u) is linear in (D, mu, K) = (conj(C), mu, mu C):
  //   v + D (u v) - mu u - K = 0.
  // Solve from three well-separated samples, then verify on all of them.
  const std::size_t i0 = 0, i1 = samples / 3, i2 = (2 * samples) / 3;
  Complex m[3][4] = {
      {u[i0] * v[i0], -u[i0], Complex{-1.0, 0.0}, -v[i0]},
      {u[i1] * v[i1], -u[i1], Complex{-1.0, 0.0}, -v[i1]},
      {u[i2] * v[i2], -u[i2], Complex{-1.0, 0.0}, -v[i2]},
  };
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    for (int c = 0; c < 4; ++c) std::swap(m[col][c], m[pivot][c]);
    if (std::abs(m[col][col]) < 1e-14)
      throw DomainError("degenerate sample configuration in the substitution chain fit");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const Complex factor = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  const Complex mu = m[1][3] / m[1][1];
  const Complex K = m[2][3] / m[2][2];

  SubstitutionChain out;
  out.unimodular_factor = mu;
  out.determined_c = K / mu;
  out.candidate_conjugate = (a2 - a1) / (1.0 - std::conj(a1) * a2);
  out.candidate_plain = (a2 - a1) / (1.0 - a1 * a2);
  for (std::size_t k = 0; k < samples; ++k) {
    const Complex pred =
        mu * (u[k] + out.determined_c) / (1.0 + std::conj(out.determined_c) * u[k]);
    out.max_residual = std::max(out.max_residual, std::abs(v[k] - pred));
  }
  return out;
}

}  // namespace circlex
