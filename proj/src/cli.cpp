#include "circlex/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "circlex/characterize.hpp"
#include "circlex/circles.hpp"
#include "circlex/expr.hpp"
#include "circlex/geometry.hpp"
#include "circlex/suites.hpp"

namespace circlex::cli {

namespace {

constexpr const char* kSchema = "circlex/1";

// All numeric output uses 17 significant digits so values round-trip.
std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Minimal JSON emitter with caller-controlled key order, so identical
// configurations produce byte-identical output.
class JsonWriter {
 public:
  void begin_object() { open("{"); }
  void end_object() { close("}"); }
  void begin_array(const std::string& key) {
    indent();
    out_ += '"' + key + "\": [";
    newline_depth(+1);
  }
  void end_array() { close("]"); }
  void begin_object_in_array() { open("{"); }

  void field(const std::string& key, const std::string& value) {
    indent();
    out_ += '"' + key + "\": \"" + escaped(value) + '"';
    pending_ = true;
  }
  void field(const std::string& key, double value) {
    indent();
    out_ += '"' + key + "\": " + num(value);
    pending_ = true;
  }
  void field(const std::string& key, std::size_t value) {
    indent();
    out_ += '"' + key + "\": " + std::to_string(value);
    pending_ = true;
  }
  void field(const std::string& key, bool value) {
    indent();
    out_ += '"' + key + "\": " + (value ? "true" : "false");
    pending_ = true;
  }

  std::string take() {
    out_ += '\n';
    return std::move(out_);
  }

 private:
  static std::string escaped(const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      if (c == '\n') {
        r += "\\n";
        continue;
      }
      r += c;
    }
    return r;
  }
  void open(const char* bracket) {
    indent();
    out_ += bracket;
    ++depth_;
    pending_ = false;
  }
  void close(const char* bracket) {
    --depth_;
    out_ += '\n';
    for (int i = 0; i < depth_; ++i) out_ += "  ";
    out_ += bracket;
    pending_ = true;
  }
  void newline_depth(int d) {
    depth_ += d;
    pending_ = false;
  }
  void indent() {
    if (pending_) out_ += ',';
    if (!out_.empty()) out_ += '\n';
    for (int i = 0; i < depth_; ++i) out_ += "  ";
    pending_ = false;
  }

  std::string out_;
  int depth_ = 0;
  bool pending_ = false;
};

void write_output(const std::string& path, const std::string& data) {
  if (path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file '" + path + "'");
  f << data;
}

// --------------------------------------------------------------------------
// Function resolution: plain expressions, @builtins, names from --fn-file.

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw DomainError("empty number in list '" + s + "'");
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
  }
  return out;
}

FunctionModel builtin_model(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')')
    throw DomainError("malformed builtin '" + text + "': expected @name(args)");
  const std::string name = text.substr(1, open - 1);
  const std::string args = text.substr(open + 1, text.size() - open - 2);

  if (name == "example9_2") return make_noneven_ray_example(parse_single_variable(args));
  if (name == "example9_1") {
    const auto v = parse_number_list(args);
    if (v.size() != 1) throw DomainError("@example9_1 takes one parameter a");
    return make_two_circle_example(v[0]);
  }
  if (name == "example7") {
    const auto v = parse_number_list(args);
    if (v.size() == 2) return make_vanishing_example({v[0], 0.0}, v[1]);
    if (v.size() == 3) return make_vanishing_example({v[0], v[1]}, v[2]);
    throw DomainError("@example7 takes (a,rho) or (a_re,a_im,rho)");
  }
  if (name == "example7product") {
    const auto v = parse_number_list(args);
    if (v.empty() || v.size() % 3 != 0)
      throw DomainError("@example7product takes triples (a_re,a_im,rho)");
    std::vector<std::pair<Complex, double>> factors;
    for (std::size_t i = 0; i < v.size(); i += 3)
      factors.emplace_back(Complex{v[i], v[i + 1]}, v[i + 2]);
    return make_vanishing_product(factors);
  }
  throw DomainError("unknown builtin '" + name + "'");
}

class FunctionSource {
 public:
  void load_definitions(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open definition file '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw DomainError("definition file line " + std::to_string(lineno) +
                          ": expected 'name = expression'");
      std::string name = line.substr(0, eq);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      if (name.empty())
        throw DomainError("definition file line " + std::to_string(lineno) + ": empty name");
      definitions_.emplace_back(name, parse(line.substr(eq + 1)));
    }
  }

  FunctionModel resolve(const std::string& text) const {
    if (text.empty()) throw DomainError("empty function specification");
    if (text[0] == '@') return builtin_model(text);
    for (const auto& [name, model] : definitions_)
      if (name == text) return model;
    return parse(text);
  }

 private:
  std::vector<std::pair<std::string, FunctionModel>> definitions_;
};

Circle parse_circle(const std::string& s) {
  const auto v = parse_number_list(s);
  if (v.size() != 3) throw DomainError("circle must be re,im,radius");
  if (!(v[2] > 0.0)) throw DomainError("circle radius must be positive");
  return {Complex{v[0], v[1]}, v[2]};
}

GridSpec parse_grid(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) v.push_back(std::stod(item));
  if (v.size() != 5) throw DomainError("grid must be re0:re1:im0:im1:step");
  GridSpec g{v[0], v[1], v[2], v[3], v[4]};
  if (!(g.step > 0.0)) throw DomainError("grid step must be positive");
  return g;
}

std::vector<Circle> load_circles_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open circle file '" + path + "'");
  std::vector<Circle> out;
  std::string line;
  while (std::getline(f, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_circle(line));
  }
  if (out.empty()) throw DomainError("circle file '" + path + "' holds no circles");
  return out;
}

void check_power_of_two(std::size_t n) {
  if (!is_power_of_two(n) || n < 8)
    throw DomainError("--N must be a power of two >= 8");
}

// --------------------------------------------------------------------------
// Subcommand payloads, executed after configuration is fully validated.

void emit_defect_reports(const std::vector<DefectReport>& reports, const std::string& fn,
                         std::size_t n, double tol, const std::string& format,
                         const std::string& out_path) {
  if (format == "csv") {
    std::string out = "# " + std::string(kSchema) + "\n";
    out += "center_re,center_im,radius,N,defect,aliasing_floor,verdict\n";
    for (const auto& r : reports) {
      out += num(r.circle.center.real()) + "," + num(r.circle.center.imag()) + "," +
             num(r.circle.radius) + "," + std::to_string(r.n_used) + "," + num(r.defect) +
             "," + num(r.aliasing_floor) + "," + to_string(r.verdict) + "\n";
    }
    write_output(out_path, out);
    return;
  }
  JsonWriter w;
  w.begin_object();
  w.field("schema", std::string(kSchema));
  w.field("command", std::string("defect"));
  w.field("fn", fn);
  w.field("n", n);
  w.field("tolerance", tol);
  w.begin_array("reports");
  for (const auto& r : reports) {
    w.begin_object_in_array();
    w.field("center_re", r.circle.center.real());
    w.field("center_im", r.circle.center.imag());
    w.field("radius", r.circle.radius);
    w.field("N", r.n_used);
    w.field("defect", r.defect);
    w.field("aliasing_floor", r.aliasing_floor);
    w.field("verdict", std::string(to_string(r.verdict)));
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_output(out_path, w.take());
}

void emit_map(const DefectMap& map, const std::string& fn, const std::string& format,
              const std::string& out_path) {
  if (format == "json") {
    JsonWriter w;
    w.begin_object();
    w.field("schema", std::string(kSchema));
    w.field("command", std::string("scan"));
    w.field("fn", fn);
    w.field("radius", map.radius);
    w.field("cols", map.cols);
    w.field("rows", map.rows);
    w.begin_array("cells");
    for (const auto& c : map.cells) {
      w.begin_object_in_array();
      w.field("center_re", c.center.real());
      w.field("center_im", c.center.imag());
      w.field("defect", c.defect);
      w.field("verdict", std::string(c.error.empty() ? to_string(c.verdict) : "error"));
      if (!c.error.empty()) w.field("error", c.error);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    write_output(out_path, w.take());
    return;
  }
  std::string out = "# " + std::string(kSchema) + "\n";
  out += "center_re,center_im,defect,verdict\n";
  for (const auto& c : map.cells) {
    out += num(c.center.real()) + "," + num(c.center.imag()) + "," + num(c.defect) + "," +
           (c.error.empty() ? to_string(c.verdict) : "error");
    out += "\n";
  }
  write_output(out_path, out);
}

int emit_suite(const std::vector<PropertyResult>& results, const std::string& command,
               std::size_t trials, std::uint64_t seed, std::optional<double> tol,
               const std::string& out_path) {
  JsonWriter w;
  w.begin_object();
  w.field("schema", std::string(kSchema));
  w.field("command", command);
  w.field("trials", trials);
  w.field("seed", static_cast<std::size_t>(seed));
  if (tol) w.field("tol", *tol);
  w.begin_array("properties");
  for (const auto& r : results) {
    w.begin_object_in_array();
    w.field("name", r.name);
    w.field("pass", r.pass);
    w.field("trials", r.trials);
    w.field("metric", r.metric);
    w.field("threshold", r.threshold);
    if (!r.note.empty()) w.field("note", r.note);
    w.end_object();
  }
  w.end_array();
  w.field("all_pass", all_pass(results));
  w.end_object();
  write_output(out_path, w.take());

  for (const auto& r : results)
    std::cerr << (r.pass ? "[pass] " : "[FAIL] ") << command << ": " << r.name << "\n";
  return all_pass(results) ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"circlex: numerical tests of holomorphic extendibility from circles"};
  app.require_subcommand(1);

  std::string fn_text;
  std::string fn_file;
  std::string circle_text;
  std::string circles_file;
  std::string grid_text;
  std::string point_text;
  std::string out_path;
  std::string format;
  std::string method = "both";
  std::size_t n = 4096;
  double tolerance = 1e-8;
  double radius = 1.0;
  std::size_t trials = 1000;
  std::uint64_t seed = 7;
  double geo_tol = 1e-10;
  std::size_t workers = 0;

  auto* defect = app.add_subcommand("defect", "extension defect of f on one or more circles");
  defect->add_option("--fn", fn_text, "expression, @builtin or definition-file name")
      ->required();
  defect->add_option("--fn-file", fn_file, "definition file, one 'name = expression' per line");
  defect->add_option("--circle", circle_text, "circle as re,im,radius");
  defect->add_option("--circles", circles_file, "CSV file of circles re,im,radius");
  defect->add_option("--N", n, "samples per circle (power of two)");
  defect->add_option("--tol", tolerance, "defect tolerance for the verdict");
  defect->add_option("--out", out_path, "output path (default stdout)");
  defect->add_option("--format", format, "json (default) or csv");

  auto* scan = app.add_subcommand("scan", "defect over a grid of circle centers");
  scan->add_option("--fn", fn_text)->required();
  scan->add_option("--fn-file", fn_file);
  scan->add_option("--radius", radius, "circle radius")->required();
  scan->add_option("--grid", grid_text, "re0:re1:im0:im1:step")->required();
  scan->add_option("--N", n);
  scan->add_option("--tol", tolerance);
  scan->add_option("--out", out_path);
  scan->add_option("--format", format, "csv (default) or json");
  scan->add_option("--workers", workers, "worker threads (default: CIRCLEX_WORKERS or cores)");

  auto* geo = app.add_subcommand("geometry-suite", "randomized variety-geometry checks");
  geo->add_option("--trials", trials);
  geo->add_option("--seed", seed);
  geo->add_option("--tol", geo_tol, "relative tolerance of the algebraic identities");
  geo->add_option("--out", out_path);

  auto* chr = app.add_subcommand("characterize-suite",
                                 "example families and boundary-transport checks");
  chr->add_option("--N", n);
  chr->add_option("--seed", seed);
  chr->add_option("--out", out_path);

  auto* ext = app.add_subcommand("extend-eval", "interior extension values at a point");
  ext->add_option("--fn", fn_text)->required();
  ext->add_option("--fn-file", fn_file);
  ext->add_option("--circle", circle_text)->required();
  ext->add_option("--point", point_text, "evaluation point re,im")->required();
  ext->add_option("--method", method, "spectral, rational or both (default)");
  ext->add_option("--N", n);
  ext->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // CLI11 prints usage; exit code 0 for --help
  }

  // Configuration stage: anything thrown here is a usage error (exit 2).
  FunctionModel model;
  std::vector<Circle> circles;
  GridSpec grid{};
  Complex point{};
  try {
    FunctionSource source;
    if (!fn_file.empty()) source.load_definitions(fn_file);
    if (defect->parsed() || scan->parsed() || ext->parsed()) {
      check_power_of_two(n);
      model = source.resolve(fn_text);
    }
    if (defect->parsed()) {
      if (circle_text.empty() == circles_file.empty())
        throw DomainError("exactly one of --circle and --circles is required");
      if (!circle_text.empty()) circles.push_back(parse_circle(circle_text));
      if (!circles_file.empty()) circles = load_circles_csv(circles_file);
      if (format.empty()) format = "json";
      if (format != "json" && format != "csv") throw DomainError("--format must be json or csv");
    }
    if (scan->parsed()) {
      grid = parse_grid(grid_text);
      if (!(radius > 0.0)) throw DomainError("--radius must be positive");
      if (format.empty()) format = "csv";
      if (format != "json" && format != "csv") throw DomainError("--format must be json or csv");
    }
    if (ext->parsed()) {
      circles.push_back(parse_circle(circle_text));
      const auto v = parse_number_list(point_text);
      if (v.size() != 2) throw DomainError("--point must be re,im");
      point = {v[0], v[1]};
      if (method != "spectral" && method != "rational" && method != "both")
        throw DomainError("--method must be spectral, rational or both");
    }
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }

  // Execution stage: failures here are runtime errors (exit 1).
  try {
    if (defect->parsed()) {
      std::vector<DefectReport> reports;
      reports.reserve(circles.size());
      for (const Circle& c : circles) reports.push_back(extension_defect(model, c, n, tolerance));
      emit_defect_reports(reports, fn_text, n, tolerance, format, out_path);
      return 0;
    }
    if (scan->parsed()) {
      const DefectMap map = defect_scan(model, radius, grid, n, tolerance, workers);
      std::cerr << "scanned " << map.cells.size() << " cells, " << map.minima.size()
                << " extend\n";
      emit_map(map, fn_text, format, out_path);
      return 0;
    }
    if (geo->parsed())
      return emit_suite(run_geometry_suite(trials, seed, geo_tol), "geometry-suite", trials,
                        seed, geo_tol, out_path);
    if (chr->parsed()) {
      check_power_of_two(n);
      return emit_suite(run_characterize_suite(n, seed), "characterize-suite", n, seed,
                        std::nullopt, out_path);
    }
    if (ext->parsed()) {
      JsonWriter w;
      w.begin_object();
      w.field("schema", std::string(kSchema));
      w.field("command", std::string("extend-eval"));
      w.field("fn", fn_text);
      w.field("point_re", point.real());
      w.field("point_im", point.imag());
      std::optional<Complex> spectral, rational;
      if (method != "rational") {
        const auto sp = spectrum(sample_on_circle(model, circles[0], n));
        const auto val = spectral_extension_eval(sp, point);
        spectral = val.value;
        w.field("spectral_re", val.value.real());
        w.field("spectral_im", val.value.imag());
        w.field("truncation_tail", val.truncation_tail);
      }
      if (method != "spectral") {
        const Complex val = rational_extension_eval(model, circles[0], point);
        rational = val;
        w.field("rational_re", val.real());
        w.field("rational_im", val.imag());
      }
      if (spectral && rational) w.field("difference", std::abs(*spectral - *rational));
      w.end_object();
      write_output(out_path, w.take());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace circlex::cli
