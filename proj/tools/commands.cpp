#include "commands.hpp"

#include "fuzzy/io.hpp"

#include <boost/version.hpp>
#include <Eigen/Core>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fzq {

using fz::cplx;
using fz::Mat;
using fz::RVec;
using fz::Weight;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

double tolerance(const GlobalOptions& g, double fallback) { return g.tol ? *g.tol : fallback; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool is_a1(const fz::AlgebraPtr& a) { return a->diagram().series == 'A' && a->rank() == 1; }

std::string spin_label(int w) { return w % 2 == 0 ? std::to_string(w / 2) : std::to_string(w) + "/2"; }

json weight_json(const fz::AlgebraPtr& a, const Weight& w) {
  json j{{"weight", w}};
  if (is_a1(a)) j["spin"] = spin_label(w[0]);
  return j;
}

json decomposition_json(const fz::AlgebraPtr& a, const std::map<Weight, int>& d) {
  json arr = json::array();
  for (const auto& [w, m] : d) {
    json e = weight_json(a, w);
    e["multiplicity"] = m;
    arr.push_back(e);
  }
  return arr;
}

void check(CommandResult& r, bool ok, const std::string& what) {
  if (!ok) r.failures.push_back(what);
}

fz::QuadratureRule make_rule(const GlobalOptions& g, const fz::Quantizer& q, int N, int f_degree) {
  QuadSpec s = parse_quad(g.quad);
  fz::RngSpec rng{"mt19937_64", s.seed ? *s.seed : g.seed};
  const bool a1 = is_a1(q.algebra());
  if (s.rule == "gauss-s2" || (s.rule == "auto" && a1)) {
    const int need = 2 * N * q.Lambda()[0] + f_degree;
    return fz::s2_grid(q.ref(), s.degree >= 0 ? s.degree : need);
  }
  return fz::haar_rule(q.ref(), rng, s.samples);
}

std::shared_ptr<const fz::Quantizer> make_quantizer(const std::string& group, const std::string& Lambda) {
  auto alg = fz::algebra_data(fz::parse_diagram(group));
  Weight L = parse_weight(Lambda);
  if (static_cast<int>(L.size()) != alg->rank())
    throw fz::Error("Lambda has " + std::to_string(L.size()) + " coordinates, rank is " + std::to_string(alg->rank()));
  return std::make_shared<const fz::Quantizer>(alg, L);
}

template <class T>
T to_number(std::string tok, const std::string& what) {
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
  size_t b = 0;
  while (b < tok.size() && std::isspace(static_cast<unsigned char>(tok[b]))) ++b;
  if (b < tok.size() && tok[b] == '+') ++b;
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data() + b, tok.data() + tok.size(), v);
  if (b == tok.size() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw fz::Error("malformed " + what + " '" + tok + "'");
  return v;
}

double wrap_angle(double a) {
  a = std::fmod(a + std::numbers::pi, 2 * std::numbers::pi);
  if (a < 0) a += 2 * std::numbers::pi;
  return a - std::numbers::pi;
}

}  // namespace

QuadSpec parse_quad(const std::string& text) {
  QuadSpec s;
  if (text.empty()) return s;
  if (text.front() == '{') {
    json j = json::parse(text);
    s.rule = j.value("rule", "auto");
    if (j.contains("points")) s.degree = j["points"].get<int>();
    if (j.contains("degree")) s.degree = j["degree"].get<int>();
    if (j.contains("samples")) s.samples = j["samples"].get<int>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  } else {
    const auto colon = text.find(':');
    s.rule = text.substr(0, colon);
    if (colon != std::string::npos) {
      std::stringstream ss(text.substr(colon + 1));
      std::string kv;
      while (std::getline(ss, kv, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw fz::Error("malformed quadrature option '" + kv + "'");
        const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "degree" || k == "points")
          s.degree = to_number<int>(v, "quadrature degree");
        else if (k == "samples")
          s.samples = to_number<int>(v, "sample count");
        else if (k == "seed")
          s.seed = to_number<std::uint64_t>(v, "seed");
        else
          throw fz::Error("unknown quadrature option '" + k + "'");
      }
    }
  }
  if (s.rule != "auto" && s.rule != "gauss-s2" && s.rule != "haar-mc")
    throw fz::Error("unknown quadrature rule '" + s.rule + "'");
  if (s.samples <= 0) throw fz::Error("sample count must be positive");
  return s;
}

Weight parse_weight(const std::string& text) {
  Weight w;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    w.push_back(to_number<int>(tok, "weight coordinate"));
  }
  if (w.empty()) throw fz::Error("empty weight");
  return w;
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    int step = 1;
    std::string hi = text.substr(dots + 2);
    if (auto c = hi.find(':'); c != std::string::npos) step = to_number<int>(hi.substr(c + 1), "level step"), hi = hi.substr(0, c);
    const int a = to_number<int>(text.substr(0, dots), "level"), b = to_number<int>(hi, "level");
    if (step <= 0 || b < a) throw fz::Error("malformed level range '" + text + "'");
    for (int n = a; n <= b; n += step) out.push_back(n);
  } else {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(to_number<int>(tok, "level"));
  }
  if (out.empty()) throw fz::Error("no levels given");
  for (int n : out)
    if (n < 0) throw fz::Error("levels must be nonnegative");
  return out;
}

json provenance(const GlobalOptions& g, const std::string& command, const json& config) {
  json p;
  p["tool"] = "fuzzyq";
  p["version"] = kVersion;
  p["schema"] = 1;
  p["command"] = command;
  p["argv"] = g.argv;
  p["seed"] = g.seed;
  p["rng"] = "mt19937_64";
  p["tolerance_override"] = g.tol ? json(*g.tol) : json(nullptr);
  p["quadrature"] = g.quad.empty() ? "auto" : g.quad;
  p["config"] = config;
  p["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  p["boost"] = BOOST_LIB_VERSION;
  p["compiler"] = __VERSION__;
  return p;
}

CommandResult cmd_classify(const GlobalOptions&, const std::string& diagram, const std::string& marks) {
  CommandResult r;
  fz::MarkedDiagram md{fz::parse_diagram(diagram), {}};
  if (!marks.empty()) {
    md.marks = parse_weight(marks);
  } else if (!diagram.empty() && diagram.front() == '{') {
    json j = json::parse(diagram);
    if (j.contains("marks")) md.marks = j["marks"].get<std::vector<int>>();
  }
  if (md.marks.empty()) throw fz::Error("at least one node must be marked");
  auto iso = fz::classify_isotropy(md);
  r.config = {{"diagram", diagram}, {"marks", md.marks}};
  json comps = json::array();
  for (const auto& c : iso.semisimple_part) comps.push_back(c.label());
  r.result = {{"diagram", md.diagram.label()},
              {"marks", md.marks},
              {"abelian_rank", iso.abelian_rank},
              {"semisimple_components", comps},
              {"dim_G", iso.dim_G},
              {"dim_H", iso.dim_H},
              {"dim_orbit", iso.dim_orbit}};
  r.csv_header = {"diagram", "marks", "abelian_rank", "semisimple_components", "dim_G", "dim_H", "dim_orbit"};
  std::string ms, cs;
  for (size_t k = 0; k < md.marks.size(); ++k) ms += (k ? ";" : "") + std::to_string(md.marks[k]);
  for (size_t k = 0; k < comps.size(); ++k) cs += (k ? ";" : "") + comps[k].get<std::string>();
  r.csv_rows.push_back({md.diagram.label(), ms, std::to_string(iso.abelian_rank), cs, std::to_string(iso.dim_G),
                        std::to_string(iso.dim_H), std::to_string(iso.dim_orbit)});
  check(r, iso.dim_orbit % 2 == 0, "orbit dimension is odd");
  check(r, iso.dim_orbit == iso.dim_G - iso.dim_H, "dim_orbit != dim_G - dim_H");
  check(r, iso.abelian_rank == static_cast<int>(md.marks.size()), "abelian rank differs from the number of marks");
  return r;
}

CommandResult cmd_quantize(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                           const std::string& levels, const std::string& dump) {
  CommandResult r;
  auto q = make_quantizer(group, Lambda);
  const auto& alg = q->algebra();
  const double tol = tolerance(g, 1e-10);
  r.config = {{"group", group}, {"Lambda", q->Lambda()}, {"N", levels}, {"dump", dump}};
  double cmax = 0;
  for (double c : alg->structure) cmax = std::max(cmax, std::abs(c));
  json rows = json::array(), dumped = json::array();
  r.csv_header = {"N", "dim", "casimir", "casimir_formula", "casimir_X", "serre", "commutation", "hermiticity",
                  "commutator_norm", "commutator_bound"};
  for (int N : parse_levels(levels)) {
    if (N < 1) throw fz::Error("quantize needs N >= 1");
    const fz::Irrep& rep = q->level(N);
    const double formula = fz::casimir_value(alg->roots, rep.hw);
    const Mat C = fz::casimir_matrix(rep);
    const double c1 = C.trace().real() / rep.dim();
    const double scalar_dev = fz::opnorm(C - c1 * Mat::Identity(rep.dim(), rep.dim()));
    const auto serre = fz::check_serre(rep);
    const double comm = fz::commutation_residual(rep), herm = fz::hermiticity_residual(rep);
    const auto X = q->coordinates(N);
    double xmax = 0, cn = 0;
    for (const auto& x : X) xmax = std::max(xmax, fz::opnorm(x));
    for (size_t a = 0; a < X.size(); ++a)
      for (size_t b = a + 1; b < X.size(); ++b) cn = std::max(cn, fz::opnorm(fz::commutator(X[a], X[b])));
    const double bound = xmax * cmax / N;
    json row{{"N", N},
             {"hw", weight_json(alg, rep.hw)},
             {"dim", rep.dim()},
             {"weyl_dim", fz::weyl_dim(alg->roots, rep.hw)},
             {"casimir", c1},
             {"casimir_formula", formula},
             {"casimir_scalar_deviation", scalar_dev},
             {"casimir_X", c1 / (double(N) * N)},
             {"serre_exponent", serre.exponent},
             {"serre_residual", serre.residual},
             {"commutation_residual", comm},
             {"hermiticity_residual", herm},
             {"commutator_norm", cn},
             {"commutator_bound", bound},
             {"X_scale", 1.0 / N}};
    rows.push_back(row);
    r.csv_rows.push_back({std::to_string(N), std::to_string(rep.dim()), fmt(c1), fmt(formula), fmt(c1 / (double(N) * N)),
                          fmt(serre.residual), fmt(comm), fmt(herm), fmt(cn), fmt(bound)});
    const std::string tag = " at N=" + std::to_string(N);
    check(r, std::abs(c1 - formula) <= tol * std::max(1.0, std::abs(formula)), "Casimir value" + tag);
    check(r, scalar_dev <= tol * std::max(1.0, std::abs(formula)), "Casimir not scalar" + tag);
    check(r, serre.residual <= tol, "Serre residual" + tag);
    check(r, comm <= tol, "commutation residual" + tag);
    check(r, herm <= tol, "hermiticity residual" + tag);
    check(r, cn <= bound * (1 + 1e-9), "commutator decay bound" + tag);
    check(r, rep.dim() == fz::weyl_dim(alg->roots, rep.hw), "dimension differs from Weyl formula" + tag);
    if (!dump.empty()) {
      json e = fz::export_irrep(rep);
      e["N"] = N;
      e["X_scale"] = 1.0 / N;
      dumped.push_back(e);
    }
  }
  r.result = {{"algebra", alg->name()}, {"Lambda", q->Lambda()}, {"levels", rows}};
  if (!dump.empty()) {
    std::ofstream f(dump);
    if (!f) throw fz::Error("cannot write " + dump);
    f << json{{"operators", dumped}}.dump(1) << "\n";
    r.result["dump"] = dump;
  }
  return r;
}

CommandResult cmd_converge(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                           const std::string& f1s, const std::string& f2s, const std::string& levels,
                           const std::string& mode, int points) {
  CommandResult r;
  if (mode != "star" && mode != "poisson") throw fz::Error("mode must be 'star' or 'poisson'");
  if (points <= 0) throw fz::Error("point count must be positive");
  auto q = make_quantizer(group, Lambda);
  const auto& alg = q->algebra();
  const int dim = alg->dim;
  const auto f1 = fz::Polynomial::parse(dim, f1s), f2 = fz::Polynomial::parse(dim, f2s);
  const fz::Polynomial target = mode == "star" ? f1 * f2 : fz::poisson_bracket(*alg, f1, f2);
  const double tol = tolerance(g, 1e-10);
  r.config = {{"group", group}, {"Lambda", q->Lambda()}, {"f1", f1s}, {"f2", f2s}, {"N", levels}, {"mode", mode},
              {"points", points}};
  fz::Rng rng({"mt19937_64", g.seed});
  const auto test = fz::haar_sample(q->ref(), rng, points);
  std::vector<double> Ns, defects;
  json rows = json::array();
  for (int N : parse_levels(levels)) {
    if (N < 1) throw fz::Error("converge needs N >= 1");
    const auto rule = make_rule(g, *q, N, f1.degree() + f2.degree());
    const auto vals = mode == "star" ? q->star(f1, f2, N, test, rule) : q->poisson_estimate(f1, f2, N, test, rule);
    double sup = 0;
    for (size_t k = 0; k < test.size(); ++k) sup = std::max(sup, std::abs(vals[k] - target(fz::moment(q->ref(), test[k]))));
    Ns.push_back(N);
    defects.push_back(sup);
    json row{{"N", N}, {"quantity", mode}, {"sup_defect", sup}, {"rule", rule.to_json()}};
    if (rule.kind == "haar-mc") row["mc_stderr_P_f1"] = q->quantize_P_stderr(f1, N, rule);
    rows.push_back(row);
  }
  bool all_small = true, monotone = true, positive = true;
  for (size_t k = 0; k < defects.size(); ++k) {
    all_small = all_small && defects[k] <= tol;
    positive = positive && defects[k] > 0;
    if (k > 0) monotone = monotone && defects[k] < defects[k - 1];
  }
  json slope = nullptr;
  if (positive && Ns.size() >= 2 && !all_small) slope = fz::loglog_slope(Ns, defects);
  r.csv_header = {"N", "quantity", "sup_defect", "fit_slope"};
  for (size_t k = 0; k < Ns.size(); ++k)
    r.csv_rows.push_back({std::to_string(int(Ns[k])), mode, fmt(defects[k]), slope.is_null() ? "" : fmt(slope.get<double>())});
  r.result = {{"algebra", alg->name()}, {"Lambda", q->Lambda()}, {"rows", rows}, {"fit_slope", slope},
              {"monotone", monotone}};
  check(r, all_small || monotone, "sup-defect is not monotonically decreasing");
  return r;
}

CommandResult cmd_bundle(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                         const std::string& lambda, const std::string& levels, bool assert_recursions) {
  CommandResult r;
  auto q = make_quantizer(group, Lambda);
  const auto& alg = q->algebra();
  const Weight lam = parse_weight(lambda);
  if (lam.size() != q->Lambda().size()) throw fz::Error("lambda has the wrong number of coordinates");
  fz::BundleQuantizer b(q, lam);
  const double tol = tolerance(g, 1e-10), rtol = tolerance(g, 1e-9);
  r.config = {{"group", group}, {"Lambda", q->Lambda()}, {"lambda", lam}, {"N", levels},
              {"assert_recursions", assert_recursions}};
  const auto fiber = fz::classical_fiber(alg->diagram(), q->Lambda(), lam);
  json fj = weight_json(alg, fiber.weight);
  fj["one_dimensional"] = fiber.one_dimensional;
  fj["isotropy_dim"] = fiber.isotropy.dim_H;
  const int T = b.transition_level();
  json rows = json::array();
  r.csv_header = {"N", "dim", "rank_Q", "idempotent", "equivariance", "I_residual", "P_residual", "transition"};
  for (int N : parse_levels(levels)) {
    const auto md = b.module_dims(N);
    const auto inv = b.q_invariants(N);
    const auto ri = b.recursion_step_i(N);
    json row{{"N", N},
             {"dims", {md.dim_algebra_factor, md.dim_fiber_factor}},
             {"dim", md.dim()},
             {"zero", md.zero},
             {"rank_Q", inv.rank},
             {"expected_rank", inv.expected_rank},
             {"Q_idempotent", inv.idempotent},
             {"Q_self_adjoint", inv.self_adjoint},
             {"Q_equivariance", inv.equivariance},
             {"recursion_residuals", {{"I", ri.residual}}},
             {"I_transition", ri.transition}};
    std::string pres;
    if (N >= 1) {
      const auto rp = b.recursion_step_p(N);
      row["recursion_residuals"]["P"] = rp.residual;
      pres = fmt(rp.residual);
      if (assert_recursions) check(r, rp.residual <= rtol, "P recursion at N=" + std::to_string(N));
    }
    const auto dec = b.decompose_module(N);
    row["decomposition"] = decomposition_json(alg, dec);
    rows.push_back(row);
    r.csv_rows.push_back({std::to_string(N), std::to_string(md.dim()), std::to_string(inv.rank), fmt(inv.idempotent),
                          fmt(inv.equivariance), fmt(ri.residual), pres, ri.transition ? "1" : "0"});
    const std::string tag = " at N=" + std::to_string(N);
    check(r, inv.idempotent <= tol && inv.self_adjoint <= tol && inv.equivariance <= tol, "Q invariants" + tag);
    check(r, inv.rank == inv.expected_rank, "rank of Q" + tag);
    long long total = 0;
    for (const auto& [w, m] : dec) total += m * fz::weyl_dim(alg->roots, w);
    check(r, total == md.dim(), "decomposition dimension" + tag);
    if (ri.transition)
      check(r, ri.lhs_norm == 0.0 && ri.rhs_norm > 0.5, "transition behaviour" + tag);
    else if (assert_recursions)
      check(r, ri.residual <= rtol, "I recursion" + tag);
  }
  r.result = {{"algebra", alg->name()}, {"Lambda", q->Lambda()}, {"lambda", weight_json(alg, lam)},
              {"mu_star", b.mu_star()}, {"transition_level", T}, {"fiber", fj}, {"levels", rows}};
  if (is_a1(alg)) {
    int nmax = 0;
    for (int N : parse_levels(levels)) nmax = std::max(nmax, N);
    const auto sl = fz::verify_section_limit(b, nmax);
    r.result["section_limit_first_mismatch"] = sl.first_mismatch;
    check(r, sl.first_mismatch < 0, "decomposition differs from the classical section space");
  }
  return r;
}

CommandResult cmd_kernel(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                         const std::string& levels, int random, bool degenerate, double diameter) {
  CommandResult r;
  auto q = make_quantizer(group, Lambda);
  const auto& alg = q->algebra();
  const bool a1 = is_a1(alg);
  if (random <= 0) throw fz::Error("triple count must be positive");
  if (diameter > 0 && !a1) throw fz::Error("small triangles are generated on S^2 only");
  const double tol_mod = tolerance(g, 1e-8), tol_phase = tolerance(g, 1e-3), tol_direct = tolerance(g, 1e-9);
  r.config = {{"group", group}, {"Lambda", q->Lambda()}, {"N", levels}, {"random", random},
              {"degenerate", degenerate}, {"diameter", diameter}};
  fz::Rng rng({"mt19937_64", g.seed});
  struct Triple {
    fz::OrbitPoint x, y, z;
  };
  std::vector<Triple> triples;
  for (int t = 0; t < random; ++t) {
    if (degenerate) {
      auto p = fz::haar_sample(q->ref(), rng, 1)[0];
      triples.push_back({p, p, p});
    } else if (diameter > 0) {
      Eigen::Vector3d c(rng.normal(), rng.normal(), rng.normal());
      c.normalize();
      Eigen::Vector3d e1 = c.unitOrthogonal(), e2 = c.cross(e1);
      std::vector<fz::OrbitPoint> pts;
      for (int k = 0; k < 3; ++k) {
        const double ang = 2 * std::numbers::pi * rng.uniform(), rad = 0.5 * diameter * rng.uniform();
        // Chord-to-angle factor: points lie within `diameter` in the radius-1/2 metric.
        Eigen::Vector3d n = c + rad * (std::cos(ang) * e1 + std::sin(ang) * e2);
        pts.push_back(fz::sphere_point(q->ref(), n.normalized()));
      }
      triples.push_back({pts[0], pts[1], pts[2]});
    } else {
      auto p = fz::haar_sample(q->ref(), rng, 3);
      triples.push_back({p[0], p[1], p[2]});
    }
  }
  r.csv_header = {"index", "N", "re", "im", "abs", "direct_residual", "modulus_residual", "phase_residual"};
  json summary = json::array();
  for (int N : parse_levels(levels)) {
    if (N < 1) throw fz::Error("kernel needs N >= 1");
    const double d = q->dim(N);
    double max_direct = 0, max_mod = 0, max_phase = 0, mean_peak = 0;
    for (size_t t = 0; t < triples.size(); ++t) {
      const auto& [x, y, z] = triples[t];
      const cplx K = q->kernel_K(N, x, y, z);
      const cplx Kd = q->kernel_K(N, x, y, z, fz::KernelForm::direct);
      const double direct = std::abs(K - Kd) / (d * d);
      max_direct = std::max(max_direct, direct);
      mean_peak += std::abs(K) / (d * d) / triples.size();
      std::string mod_s, ph_s;
      if (a1) {
        const int k = q->Lambda()[0];
        const auto nx = fz::sphere_direction(q->ref(), x), ny = fz::sphere_direction(q->ref(), y),
                   nz = fz::sphere_direction(q->ref(), z);
        const double c = std::cos(fz::s2_distance(nx, ny)) * std::cos(fz::s2_distance(ny, nz)) *
                         std::cos(fz::s2_distance(nz, nx));
        const double pred = d * d * std::pow(c, N * k);
        const double mod = std::abs(std::abs(K) - pred) / std::max(pred, 1e-300);
        max_mod = std::max(max_mod, mod);
        mod_s = fmt(mod);
        if (std::abs(K) > 1e-12 * d * d) {
          const double ph = std::abs(wrap_angle(std::arg(K) - 2.0 * N * k * fz::s2_signed_area(nx, ny, nz)));
          max_phase = std::max(max_phase, ph);
          ph_s = fmt(ph);
        }
      }
      r.csv_rows.push_back({std::to_string(t), std::to_string(N), fmt(K.real()), fmt(K.imag()), fmt(std::abs(K)),
                            fmt(direct), mod_s, ph_s});
    }
    json s{{"N", N}, {"dim", d}, {"max_direct_residual", max_direct}, {"mean_abs_K_over_dim2", mean_peak}};
    const std::string tag = " at N=" + std::to_string(N);
    check(r, max_direct <= tol_direct, "factorized and direct kernels differ" + tag);
    if (a1) {
      s["max_modulus_residual"] = max_mod;
      s["max_phase_residual"] = max_phase;
      check(r, max_mod <= tol_mod, "kernel modulus" + tag);
      check(r, max_phase <= tol_phase, "kernel phase" + tag);
    }
    summary.push_back(s);
  }
  r.result = {{"algebra", alg->name()}, {"Lambda", q->Lambda()}, {"summary", summary}};
  return r;
}

CommandResult cmd_coarse_grain(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                               const std::string& lambda, int N, int steps) {
  CommandResult r;
  auto q = make_quantizer(group, Lambda);
  const auto& alg = q->algebra();
  const Weight lam = parse_weight(lambda);
  fz::BundleQuantizer b(q, lam);
  const double tol = tolerance(g, 1e-10);
  r.config = {{"group", group}, {"Lambda", q->Lambda()}, {"lambda", lam}, {"N", N}, {"steps", steps}};
  const auto& L = b.level(N);
  if (L.zero) throw fz::Error("the module is zero at N=" + std::to_string(N));
  fz::Rng rng({"mt19937_64", g.seed});
  Mat field(q->dim(N), L.W.cols());
  for (Eigen::Index j = 0; j < field.cols(); ++j)
    for (Eigen::Index i = 0; i < field.rows(); ++i) {
      const double re = rng.normal(), im = rng.normal();
      field(i, j) = cplx(re, im);
    }
  const auto cg = b.coarse_grain(field, N, steps);
  r.result = {{"algebra", alg->name()}, {"Lambda", q->Lambda()}, {"lambda", weight_json(alg, lam)},
              {"start_level", N}, {"final_level", cg.level}, {"dim_ratios", cg.dim_ratios},
              {"input_norm", field.norm()}, {"output_norm", cg.field.norm()},
              {"output_shape", {cg.field.rows(), cg.field.cols()}}};
  r.csv_header = {"step", "level", "dim_ratio"};
  for (size_t k = 0; k < cg.dim_ratios.size(); ++k)
    r.csv_rows.push_back({std::to_string(k + 1), std::to_string(N - int(k) - 1), fmt(cg.dim_ratios[k])});
  bool zero = true;
  for (int c : lam) zero = zero && c == 0;
  if (zero) {
    Mat a = field * L.W.adjoint();
    for (int n = N; n > cg.level; --n) a = q->project_p(a, n);
    const double dev = (a * b.level(cg.level).W - cg.field).norm() / std::max(1.0, a.norm());
    r.result["trace_chain_residual"] = dev;
    check(r, dev <= tol, "coarse-graining differs from the p_N chain");
  }
  return r;
}

}  // namespace fzq
