#include "navier_bubble/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "navier_bubble/ball_green.hpp"
#include "navier_bubble/constants.hpp"
#include "navier_bubble/errors.hpp"
#include "navier_bubble/expansions.hpp"
#include "navier_bubble/radial_pde.hpp"
#include "navier_bubble/reduced.hpp"

#ifndef NAVIER_BUBBLE_VERSION
#define NAVIER_BUBBLE_VERSION "0.0.0"
#endif

namespace navier_bubble::cli {

using nlohmann::ordered_json;

namespace {

struct OptionSpec {
  const char* name;
  bool is_switch;
  bool required;
  const char* help;
};

struct SubcommandSpec {
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
};

const std::vector<SubcommandSpec>& subcommands() {
  static const std::vector<SubcommandSpec> specs = {
      {"constants",
       "Bubble constants c0, S_n, c1, c2, c3 with closed-form/quadrature cross-check",
       {{"method", false, false, "closed | quad (default closed)"}}},
      {"green",
       "Green's function G, regular part H and grad_x H on the unit ball",
       {{"x", false, true, "first point x1,...,xn"},
        {"y", false, true, "second point y1,...,yn"},
        {"samples", false, false, "random pairs for the symmetry check (default 8)"}}},
      {"expand",
       "Direct value against truncated expansion over a lambda sweep",
       {{"formula", false, true, "eq212 | prop24 | lemma25 | lemma26 | appx1..appx5"},
        {"x", false, false, "concentration point (default 0)"},
        {"lambda-sweep", false, false, "comma-separated rates (default 10,20,40,80)"},
        {"eps", false, false, "exponent defect (default 0)"}}},
      {"reduce",
       "Root of the reduced rate equation",
       {{"x", false, false, "concentration point (default 0)"},
        {"eps", false, true, "exponent defect"},
        {"drop-deltaK", true, false, "drop the Laplacian-of-K term"}}},
      {"landscape",
       "Reduced energy on an (x, lambda) grid along the first axis",
       {{"grid", false, true, "X0,X1,NX;L0,L1,NL (x linear, lambda geometric)"},
        {"eps", false, true, "exponent defect"},
        {"mode", false, false, "min | max (default min)"},
        {"problem", false, false, "P | Q (default P)"}}},
      {"criteria",
       "Existence/nonexistence sign criteria at a critical point of K",
       {{"x0", false, false, "point (default 0)"}, {"problem", false, false, "P | Q (default P)"}}},
      {"solve-radial",
       "Continuation of the radial branch in eps",
       {{"eps-start", false, false, "first eps (default 0.5)"},
        {"eps-end", false, false, "last eps (default 5e-3)"},
        {"steps", false, false, "geometric steps (default 40)"},
        {"mesh", false, false, "collocation half nodes (default 96)"},
        {"profile", false, false, "write the final (r, u, w) table to this file"}}},
  };
  return specs;
}

const SubcommandSpec& spec_of(const std::string& name) {
  for (const auto& s : subcommands())
    if (name == s.name) return s;
  throw UsageError("unknown subcommand '" + name + "'");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s, std::size_t& offset) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  offset += b;
  return s.substr(b, e - b);
}

double parse_number(const std::string& token, std::size_t position) {
  std::size_t off = position;
  const std::string t = trim(token, off);
  if (t.empty()) throw ParseError("expected a number", off);
  const char* first = t.data();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError("malformed number '" + t + "'", off + static_cast<std::size_t>(ptr - t.data()));
  if (!std::isfinite(v)) throw ParseError("number is not finite", off);
  return v;
}

std::vector<double> parse_list_at(const std::string& s, std::size_t base) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    const std::string token = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_number(token, base + start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

const std::string* find_option(const RunConfig& c, const std::string& name) {
  const auto it = c.options.find(name);
  return it == c.options.end() ? nullptr : &it->second;
}

double number_option(const RunConfig& c, const std::string& name, double fallback) {
  const std::string* v = find_option(c, name);
  if (!v) return fallback;
  try {
    return parse_number(*v, 0);
  } catch (const ParseError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

int int_option(const RunConfig& c, const std::string& name, int fallback) {
  const double v = number_option(c, name, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("--" + name + " must be an integer");
  return static_cast<int>(v);
}

std::string string_option(const RunConfig& c, const std::string& name, const std::string& fallback) {
  const std::string* v = find_option(c, name);
  return v ? *v : fallback;
}

Point point_option(const RunConfig& c, const std::string& name, const Dimension& dim) {
  try {
    return parse_point(string_option(c, name, "0"), dim);
  } catch (const ParseError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

double tolerance(const RunConfig& c, const std::string& name, double fallback) {
  const auto it = c.tolerances.find(name);
  return it == c.tolerances.end() ? fallback : it->second;
}

KField k_field(const RunConfig& c) {
  std::string s = c.k;
  if (s == "const") s = "const:1";
  if (s == "quad") s = "quad:1,0.25";
  if (s == "gauss") s = "gauss:0.5,0.5";
  try {
    return parse_k_descriptor(s);
  } catch (const ParseError& e) {
    throw UsageError(std::string("--k: ") + e.what());
  }
}

Problem problem_option(const RunConfig& c) {
  const std::string p = string_option(c, "problem", "P");
  if (p == "P") return Problem::subcritical;
  if (p == "Q") return Problem::supercritical;
  throw UsageError("--problem must be P or Q");
}

ordered_json to_json(const Point& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

std::string join_point(const Point& x) {
  std::string s;
  for (int i = 0; i < x.size(); ++i) s += (i ? ";" : "") + csv_number(x[i]);
  return s;
}

void add_warnings(Report& r, const std::vector<std::string>& w) {
  for (const auto& s : w)
    if (std::find(r.warnings.begin(), r.warnings.end(), s) == r.warnings.end()) r.warnings.push_back(s);
}

void require_json(const RunConfig& c) {
  if (c.effective_format() != OutputFormat::json)
    throw UsageError("csv output is not available for " + c.subcommand);
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void run_constants(const RunConfig& c, const Dimension& dim, Report& r) {
  require_json(c);
  const std::string method = string_option(c, "method", "closed");
  if (method != "closed" && method != "quad") throw UsageError("--method must be closed or quad");
  const UniversalConstants closed = closed_form_constants(dim);
  const UniversalConstants quad = quadrature_constants(dim, tolerance(c, "tol", 1e-12));
  const UniversalConstants& k = method == "quad" ? quad : closed;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  r.payload = {{"n", dim.n()},
               {"method", to_string(k.method)},
               {"c0", k.c0},
               {"Sn", k.Sn},
               {"c1", k.c1},
               {"c2", k.c2},
               {"c3", k.c3},
               {"error_estimate", k.error_estimate},
               {"cross_check",
                {{"Sn", rel(quad.Sn, closed.Sn)},
                 {"c1", rel(quad.c1, closed.c1)},
                 {"c2", rel(quad.c2, closed.c2)},
                 {"c3", rel(quad.c3, closed.c3)},
                 {"quadrature_error_estimate", quad.error_estimate}}},
               {"formula",
                {{"I", "I(s) = pi^{n/2} Gamma(s - n/2) / Gamma(s)"},
                 {"c0", "[(n-4)(n-2)n(n+2)]^{(n-4)/8}"},
                 {"Sn", "c0^{p+1} I(n)"},
                 {"c1", "c0^{p+1} I((n+4)/2)"},
                 {"c2", "c0^{p+1} (I(n-1) - I(n))"},
                 {"c3", "c0^{p+1} (log(c0) I(n) + (n-4)/2 I'(n))"},
                 {"cross_check", "|quad - closed| / |closed|"}}}};
}

void run_green(const RunConfig& c, const Dimension& dim, Report& r) {
  require_json(c);
  const Point x = point_option(c, "x", dim), y = point_option(c, "y", dim);
  const int samples = int_option(c, "samples", 8);
  if (samples < 0) throw UsageError("--samples must be non-negative");
  const BallGreen g(dim, tolerance(c, "tol", 1e-15));
  int modes = 0;
  const double H = g.regular_part(x, y, modes);
  const double G = g.green(x, y);
  const Point grad = g.grad_x_regular_part(x, y);

  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  auto draw = [&] {
    Point p(dim.n());
    for (int i = 0; i < dim.n(); ++i) p[i] = normal(rng);
    return Point(p.normalized() * 0.8 * std::pow(uniform(rng), 1.0 / dim.n()));
  };
  double defect = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point a = draw(), b = draw();
    const double hab = g.regular_part(a, b), hba = g.regular_part(b, a);
    defect = std::max(defect, std::abs(hab - hba) / std::max(std::abs(hab), std::abs(hba)));
  }

  r.payload = {{"n", dim.n()},
               {"x", to_json(x)},
               {"y", to_json(y)},
               {"G", G},
               {"H", H},
               {"gradH", to_json(grad)},
               {"modes", modes},
               {"normalization", g.normalization()},
               {"symmetry_check", {{"samples", samples}, {"seed", c.seed}, {"max_rel_defect", defect}}},
               {"formula",
                {{"H", "|x - y|^{4-n} - G(x, y)"},
                 {"G", "Delta^2 G(x, .) = normalization * delta_x, G = Delta G = 0 on the sphere"},
                 {"gradH", "gradient of H in its first argument"}}}};
}

void run_expand(const RunConfig& c, const Dimension& dim, Report& r) {
  const Formula f = parse_formula(string_option(c, "formula", ""));
  const Point x = point_option(c, "x", dim);
  std::vector<double> lambdas;
  try {
    lambdas = parse_list(string_option(c, "lambda-sweep", "10,20,40,80"));
  } catch (const ParseError& e) {
    throw UsageError(std::string("--lambda-sweep: ") + e.what());
  }
  const double eps = number_option(c, "eps", 0.0);
  const FunctionalContext ctx(dim, k_field(c), tolerance(c, "tol", 1e-11));
  const auto reports = expansion_sweep(ctx, f, x, lambdas, eps);

  r.payload = ordered_json::array();
  std::ostringstream csv;
  csv << "formula,n,k,x,lambda,eps,direct,expansion,residual,claimed_next_order,fitted_slope,envelope\n";
  for (const auto& e : reports) {
    add_warnings(r, e.warnings);
    ordered_json j = {{"formula_id", e.formula_id},
                      {"n", e.n},
                      {"k", e.k_descriptor},
                      {"x", to_json(e.x)},
                      {"lambda", e.lambda},
                      {"eps", e.eps},
                      {"direct", e.direct},
                      {"expansion", e.expansion},
                      {"residual", e.residual},
                      {"claimed_next_order", e.claimed_next_order}};
    j["fitted_slope"] = e.fitted_slope ? ordered_json(*e.fitted_slope) : ordered_json(nullptr);
    j["envelope"] = e.envelope ? ordered_json(*e.envelope) : ordered_json(nullptr);
    j["warnings"] = e.warnings;
    r.payload.push_back(j);
    csv << e.formula_id << ',' << e.n << ',' << e.k_descriptor << ',' << join_point(e.x) << ','
        << csv_number(e.lambda) << ',' << csv_number(e.eps) << ',' << csv_number(e.direct) << ','
        << csv_number(e.expansion) << ',' << csv_number(e.residual) << ',' << csv_number(e.claimed_next_order) << ','
        << (e.fitted_slope ? csv_number(*e.fitted_slope) : "") << ','
        << (e.envelope ? csv_number(*e.envelope) : "") << '\n';
  }
  r.csv = csv.str();
}

void run_reduce(const RunConfig& c, const Dimension& dim, Report& r) {
  require_json(c);
  const Point x = point_option(c, "x", dim);
  const double eps = number_option(c, "eps", 0.0);
  BalanceOptions opt;
  opt.drop_laplacian = find_option(c, "drop-deltaK") != nullptr;
  const FunctionalContext ctx(dim, k_field(c), tolerance(c, "tol", 1e-11));
  const RateSolution s = solve_E_lambda(ctx, x, eps, opt);
  r.payload = {{"x", to_json(s.x)},
               {"eps", s.eps},
               {"t_eps", s.t_eps},
               {"t0", s.t0},
               {"lambda_eps", s.lambda_eps},
               {"residual", s.residual},
               {"scale", s.scale},
               {"root_found", s.root_found},
               {"diagnostic", s.diagnostic},
               {"iterations", s.iterations},
               {"formula",
                {{"t0", "(2n c1 H(x,x) / ((n-4) S_n))^{1/(n-4)}"},
                 {"lambda_eps", "t_eps eps^{-1/(n-4)}"},
                 {"residual", "balance at t_eps, compare with scale"}}}};
  if (s.root_found) {
    add_warnings(r, admissibility_warnings(x, s.lambda_eps));
  } else {
    add_warnings(r, {s.diagnostic});
    r.exit_code = 1;
  }
}

LandscapeGrid parse_grid(const std::string& s) {
  const std::size_t semi = s.find(';');
  if (semi == std::string::npos) throw ParseError("grid needs X0,X1,NX;L0,L1,NL", s.size());
  const auto xs = parse_list_at(s.substr(0, semi), 0);
  const auto ls = parse_list_at(s.substr(semi + 1), semi + 1);
  if (xs.size() != 3) throw ParseError("x range needs three values", 0);
  if (ls.size() != 3) throw ParseError("lambda range needs three values", semi + 1);
  auto count = [](double v, std::size_t pos) {
    if (v < 1 || v != std::floor(v) || v > 100000) throw ParseError("point count must be a positive integer", pos);
    return static_cast<int>(v);
  };
  const int nx = count(xs[2], 0), nl = count(ls[2], semi + 1);
  if (!(ls[0] > 0.0 && ls[1] > 0.0)) throw ParseError("lambda range must be positive", semi + 1);
  LandscapeGrid g;
  for (int i = 0; i < nx; ++i) g.x_coords.push_back(nx == 1 ? xs[0] : xs[0] + (xs[1] - xs[0]) * i / (nx - 1));
  for (int i = 0; i < nl; ++i)
    g.lambdas.push_back(nl == 1 ? ls[0] : ls[0] * std::pow(ls[1] / ls[0], static_cast<double>(i) / (nl - 1)));
  return g;
}

ordered_json state_json(const ReducedState& s) {
  return {{"x", to_json(s.x)}, {"lambda", s.lambda}, {"eps", s.eps}, {"psi", s.psi}, {"dpsi_dlambda", s.dpsi_dlambda}};
}

void run_landscape(const RunConfig& c, const Dimension& dim, Report& r) {
  LandscapeGrid grid;
  try {
    grid = parse_grid(string_option(c, "grid", ""));
  } catch (const ParseError& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  const double eps = number_option(c, "eps", 0.0);
  const std::string m = string_option(c, "mode", "min");
  if (m != "min" && m != "max") throw UsageError("--mode must be min or max");
  const Extremum mode = m == "min" ? Extremum::min : Extremum::max;
  const FunctionalContext ctx(dim, k_field(c), tolerance(c, "tol", 1e-11));
  const LandscapeResult res = landscape_scan(ctx, grid, eps, mode, problem_option(c));
  add_warnings(r, res.warnings);

  ordered_json states = ordered_json::array();
  std::ostringstream csv;
  csv << "x,lambda,eps,psi,dpsi_dlambda\n";
  for (const auto& s : res.states) {
    states.push_back(state_json(s));
    csv << csv_number(s.x[0]) << ',' << csv_number(s.lambda) << ',' << csv_number(s.eps) << ','
        << csv_number(s.psi) << ',' << csv_number(s.dpsi_dlambda) << '\n';
  }
  r.payload = {{"mode", m}, {"argext", state_json(res.argext)}, {"interior", res.interior}, {"states", states}};
  std::ostringstream head;
  head << "# argext x=" << csv_number(res.argext.x[0]) << " lambda=" << csv_number(res.argext.lambda)
       << " interior=" << (res.interior ? "true" : "false") << '\n';
  r.csv = head.str() + csv.str();
}

void run_criteria(const RunConfig& c, const Dimension& dim, Report& r) {
  require_json(c);
  const Point x0 = point_option(c, "x0", dim);
  const FunctionalContext ctx(dim, k_field(c), tolerance(c, "tol", 1e-11));
  const CriterionVerdict v = criteria(ctx, x0, problem_option(c));
  add_warnings(r, v.warnings);
  r.payload = {{"theorem", v.theorem},
               {"clause", v.clause},
               {"point", to_json(v.point)},
               {"quantity", v.quantity},
               {"verdict", to_string(v.verdict)},
               {"problem", to_string(problem_option(c))},
               {"formula",
                {{"quantity",
                  "n = 5: c1 H(x0,x0); n = 6: c1 H(x0,x0) - c2 Delta K(x0) / (36 K(x0)); n >= 7: Delta K(x0) "
                  "(P) or -Delta K(x0) (Q)"}}}};
}

void run_solve_radial(const RunConfig& c, const Dimension& dim, Report& r) {
  const double a = number_option(c, "eps-start", 0.5), b = number_option(c, "eps-end", 5e-3);
  const int steps = int_option(c, "steps", 40);
  ContinuationOptions opt;
  opt.half_nodes = int_option(c, "mesh", 96);
  opt.newton.tol = tolerance(c, "newton-tol", opt.newton.tol);
  const KField K = k_field(c);

  std::vector<BranchPoint> points;
  RadialSolution final(dim);
  try {
    points = continue_branch(dim, K, a, b, steps, opt, &final);
  } catch (const ContinuationStall& e) {
    points = e.points();
    add_warnings(r, {e.what()});
    r.exit_code = 1;
  }
  add_warnings(r, final.warnings);

  ordered_json branch = ordered_json::array();
  std::ostringstream csv;
  csv << "eps,peak,alpha_hat,lambda_hat,fit_error,residual_norm,mesh_nodes\n";
  for (const auto& p : points) {
    branch.push_back({{"eps", p.eps},
                      {"peak", p.peak},
                      {"alpha_hat", p.alpha_hat},
                      {"lambda_hat", p.lambda_hat},
                      {"fit_error", p.fit_error},
                      {"residual_norm", p.residual_norm},
                      {"mesh_nodes", p.mesh_nodes}});
    csv << csv_number(p.eps) << ',' << csv_number(p.peak) << ',' << csv_number(p.alpha_hat) << ','
        << csv_number(p.lambda_hat) << ',' << csv_number(p.fit_error) << ',' << csv_number(p.residual_norm) << ','
        << p.mesh_nodes << '\n';
  }

  std::ostringstream prof;
  prof << "r,u,w\n";
  std::vector<double> rs, us, ws;
  if (final.u.size() == final.mesh.size()) {
    for (int i = final.mesh.size() - 1; i >= 0; --i) {
      rs.push_back(final.mesh.r()[i]);
      us.push_back(final.u[i]);
      ws.push_back(final.w[i]);
      prof << csv_number(rs.back()) << ',' << csv_number(us.back()) << ',' << csv_number(ws.back()) << '\n';
    }
  }

  r.payload = {{"k", K.descriptor()},
               {"branch", branch},
               {"profile", {{"eps", final.eps}, {"r", rs}, {"u", us}, {"w", ws}}},
               {"formula",
                {{"lambda_hat", "model rate matching the half-peak radius of u"},
                 {"alpha_hat", "u(0) / model(0)"},
                 {"fit_error", "relative weighted L2 distance to the model near the center"}}}};

  const std::string path = string_option(c, "profile", "");
  if (!path.empty()) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write profile to '" + path + "'");
    f << prof.str();
    r.csv = csv.str();
  } else {
    r.csv = csv.str() + "\n# profile eps=" + csv_number(final.eps) + "\n" + prof.str();
  }
}

}  // namespace

const char* to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

OutputFormat RunConfig::effective_format() const {
  if (format) return *format;
  return subcommand == "landscape" || subcommand == "solve-radial" ? OutputFormat::csv : OutputFormat::json;
}

const char* version() { return NAVIER_BUBBLE_VERSION; }

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::vector<double> parse_list(const std::string& s) { return parse_list_at(s, 0); }

Point parse_point(const std::string& s, const Dimension& dim) {
  const std::vector<double> v = parse_list(s);
  Point x = dim.origin();
  if (v.size() == 1) {
    x[0] = v[0];
  } else if (static_cast<int>(v.size()) == dim.n()) {
    for (int i = 0; i < dim.n(); ++i) x[i] = v[i];
  } else {
    throw ParseError("point needs 1 or " + std::to_string(dim.n()) + " coordinates", 0);
  }
  return x;
}

KField parse_k_descriptor(const std::string& s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos) throw ParseError("expected <family>:<parameters>", s.size());
  const std::string family = s.substr(0, colon);
  const std::vector<double> v = parse_list_at(s.substr(colon + 1), colon + 1);
  auto arity = [&](std::size_t k) {
    if (v.size() != k)
      throw ParseError(family + " takes " + std::to_string(k) + " parameter" + (k > 1 ? "s" : ""), colon + 1);
  };
  if (family == "const") {
    arity(1);
    return KField::constant(v[0]);
  }
  if (family == "quad") {
    arity(2);
    return KField::quadratic(v[0], v[1]);
  }
  if (family == "gauss") {
    arity(2);
    return KField::gaussian(v[0], v[1]);
  }
  if (family == "poly") return KField::polynomial(v);
  throw ParseError("unknown K family '" + family + "'", 0);
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Numerical checks for the critical biharmonic problem with Navier conditions", "navier-bubble"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1, 1);
  app.fallthrough();

  int dim = 5;
  std::string k = "const:1", format;
  std::uint64_t seed = 0;
  double tol = 0.0, newton_tol = 0.0;
  auto* o_dim = app.add_option("--dim", dim, "space dimension n >= 5 (default 5)");
  app.add_option("--k", k, "const:c | quad:a,b | gauss:A,s | poly:c0,c1,... (default const:1)");
  auto* o_format = app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  auto* o_seed = app.add_option("--seed", seed, "seed for sampled checks (default 0)");
  auto* o_tol = app.add_option("--tol", tol, "quadrature and series tolerance");
  auto* o_ntol = app.add_option("--newton-tol", newton_tol, "radial Newton tolerance");
  (void)o_dim;
  (void)o_seed;

  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;
  bool expand_csv = false;
  for (const auto& spec : subcommands()) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    sub->fallthrough();
    for (const auto& o : spec.options) {
      const std::string key = std::string(spec.name) + "/" + o.name;
      if (o.is_switch) {
        sub->add_flag(std::string("--") + o.name, switches[key], o.help);
      } else {
        sub->add_option(std::string("--") + o.name, values[key], o.help)->required(o.required);
      }
    }
    if (std::string(spec.name) == "expand") sub->add_flag("--csv", expand_csv, "same as --format csv");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::Error& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream out, err;
      app.exit(e, out, err);
      throw InfoRequested{out.str() + err.str()};
    }
    throw UsageError(e.what());
  }

  RunConfig c;
  c.subcommand = app.get_subcommands().front()->get_name();
  c.dim = dim;
  c.k = k;
  c.seed = seed;
  if (!o_format->empty()) c.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  if (expand_csv) c.format = OutputFormat::csv;
  if (!o_tol->empty()) c.tolerances["tol"] = tol;
  if (!o_ntol->empty()) c.tolerances["newton-tol"] = newton_tol;
  auto* sub = app.get_subcommand(c.subcommand);
  for (const auto& o : spec_of(c.subcommand).options) {
    const std::string key = c.subcommand + "/" + o.name;
    if (sub->get_option(std::string("--") + o.name)->empty()) continue;
    c.options[o.name] = o.is_switch ? "true" : values[key];
  }
  return c;
}

std::vector<std::string> format_args(const RunConfig& c) {
  const SubcommandSpec& spec = spec_of(c.subcommand);
  std::vector<std::string> a = {c.subcommand, "--dim=" + std::to_string(c.dim), "--k=" + c.k};
  if (c.format) a.push_back(std::string("--format=") + to_string(*c.format));
  a.push_back("--seed=" + std::to_string(c.seed));
  for (const auto& [name, v] : c.tolerances) a.push_back("--" + name + "=" + format_double(v));
  for (const auto& [name, v] : c.options) {
    const auto it = std::find_if(spec.options.begin(), spec.options.end(),
                                 [&](const OptionSpec& o) { return name == o.name; });
    if (it == spec.options.end()) throw UsageError("unknown option --" + name + " for " + c.subcommand);
    a.push_back(it->is_switch ? "--" + name : "--" + name + "=" + v);
  }
  return a;
}

Report run(const RunConfig& config) {
  Report r;
  r.config = config;
  r.version = version();
  r.timestamp = utc_timestamp();
  const Dimension dim(config.dim);
  const std::string& s = config.subcommand;
  if (s == "constants") {
    run_constants(config, dim, r);
  } else if (s == "green") {
    run_green(config, dim, r);
  } else if (s == "expand") {
    run_expand(config, dim, r);
  } else if (s == "reduce") {
    run_reduce(config, dim, r);
  } else if (s == "landscape") {
    run_landscape(config, dim, r);
  } else if (s == "criteria") {
    run_criteria(config, dim, r);
  } else if (s == "solve-radial") {
    run_solve_radial(config, dim, r);
  } else {
    throw UsageError("unknown subcommand '" + s + "'");
  }
  return r;
}

std::string render(const Report& r) {
  const RunConfig& c = r.config;
  const std::vector<std::string> args = format_args(c);
  if (c.effective_format() == OutputFormat::csv) {
    std::ostringstream out;
    out << "# schema " << kSchema << "\n# version " << r.version << "\n# timestamp " << r.timestamp << "\n# args";
    for (const auto& a : args) out << ' ' << a;
    out << '\n';
    for (const auto& w : r.warnings) out << "# warning " << w << '\n';
    out << r.csv;
    return out.str();
  }
  ordered_json cfg = {{"subcommand", c.subcommand},
                      {"dim", c.dim},
                      {"k", c.k},
                      {"format", to_string(c.effective_format())},
                      {"options", c.options},
                      {"tolerances", c.tolerances},
                      {"seed", c.seed},
                      {"args", args}};
  ordered_json doc = {{"schema", kSchema},
                      {"version", r.version},
                      {"timestamp", r.timestamp},
                      {"config", cfg},
                      {"payload", r.payload},
                      {"warnings", r.warnings},
                      {"exit_code", r.exit_code}};
  return doc.dump(2) + "\n";
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const InfoRequested& info) {
    out << info.text;
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    const Report r = run(config);
    out << render(r);
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    return r.exit_code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace navier_bubble::cli
