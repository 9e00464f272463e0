// Acceptance suite: one PASS/FAIL line per criterion.
#include "fuzzy/bundles.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

using namespace fz;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Notes {
public:
  void check(Outcome& o, bool ok, const std::string& what) {
    if (!ok) {
      o.pass = false;
      if (failures_++ < 6) os_ << (os_.tellp() > 0 ? "; " : "") << what;
    }
  }
  std::string str() const {
    std::string s = os_.str();
    if (failures_ > 6) s += "; ... (" + std::to_string(failures_) + " failed checks)";
    return s;
  }

private:
  std::ostringstream os_;
  int failures_ = 0;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::shared_ptr<const Quantizer> sphere() {
  static auto q = std::make_shared<const Quantizer>(algebra_data(parse_diagram("A1")), Weight{1});
  return q;
}

std::shared_ptr<const Quantizer> plane() {
  static auto q = std::make_shared<const Quantizer>(algebra_data(parse_diagram("A2")), Weight{1, 0});
  return q;
}

Mat random_operator(int d, Rng& r) {
  Mat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      const double re = r.normal(), im = r.normal();
      m(i, j) = cplx(re, im);
    }
  return m;
}

double sup_defect(const std::vector<cplx>& v, const Polynomial& f, const Irrep& ref, const std::vector<OrbitPoint>& pts) {
  double s = 0;
  for (size_t k = 0; k < pts.size(); ++k) s = std::max(s, std::abs(v[k] - f(moment(ref, pts[k]))));
  return s;
}

Outcome casimir_law() {
  Outcome o;
  double worst = 0;
  for (int N = 1; N <= 50; ++N) {
    const double expect = 0.5 * N * (0.5 * N + 1);
    worst = std::max(worst, std::abs(casimir_eigenvalue(sphere()->level(N), 1e-12) - expect) / expect);
  }
  o.pass = worst < 1e-12;
  o.detail = "max rel err " + sci(worst) + " over N=1..50";
  return o;
}

Outcome serre() {
  Outcome o;
  double worst = 0;
  for (int N = 1; N <= 30; ++N) {
    const auto s = check_serre(sphere()->level(N));
    worst = std::max(worst, s.exponent == N + 1 ? s.residual : 1.0);
  }
  o.pass = worst < 1e-10;
  o.detail = "max ||J+^(N+1)||/||J+||^(N+1) = " + sci(worst) + " over N=1..30";
  return o;
}

Outcome sphere_relation() {
  Outcome o;
  double worst = 0;
  for (int N = 1; N <= 50; ++N) {
    Mat C = Mat::Zero(N + 1, N + 1);
    for (const auto& x : sphere()->coordinates(N)) C += x * x;
    Eigen::SelfAdjointEigenSolver<Mat> es(C);
    const double expect = 0.25 + 0.5 / N;
    worst = std::max(worst, (es.eigenvalues().array() - expect).abs().maxCoeff() / expect);
  }
  o.pass = worst < 1e-12;
  o.detail = "spectrum vs 1/4 + 1/(2N): max rel err " + sci(worst) + " over N=1..50";
  return o;
}

Outcome kernel_modulus() {
  Outcome o;
  Rng rng({"mt19937_64", 1001});
  const auto& ref = sphere()->ref();
  const auto pts = haar_sample(ref, rng, 300);
  double worst = 0;
  for (int N : {1, 5, 10, 25})
    for (int t = 0; t < 100; ++t) {
      const auto &x = pts[3 * t], &y = pts[3 * t + 1], &z = pts[3 * t + 2];
      const auto nx = sphere_direction(ref, x), ny = sphere_direction(ref, y), nz = sphere_direction(ref, z);
      const double c = std::cos(s2_distance(nx, ny)) * std::cos(s2_distance(ny, nz)) * std::cos(s2_distance(nz, nx));
      const double pred = (N + 1.0) * (N + 1.0) * std::pow(c, N);
      worst = std::max(worst, std::abs(std::abs(sphere()->kernel_K(N, x, y, z)) - pred) / pred);
    }
  o.pass = worst < 1e-8;
  o.detail = "100 triples, N in {1,5,10,25}: max rel err " + sci(worst);
  return o;
}

Outcome kernel_phase() {
  Outcome o;
  Notes notes;
  Rng rng({"mt19937_64", 1002});
  const auto& ref = sphere()->ref();
  double worst = 0, max_diam = 0, min_area = 1;
  for (int t = 0; t < 20; ++t) {
    Eigen::Vector3d c(rng.normal(), rng.normal(), rng.normal());
    c.normalize();
    const Eigen::Vector3d e1 = c.unitOrthogonal(), e2 = c.cross(e1);
    Eigen::Vector3d n[3];
    for (auto& v : n) {
      const double ang = 2 * std::numbers::pi * rng.uniform(), rad = 0.09 * rng.uniform();
      v = (c + rad * (std::cos(ang) * e1 + std::sin(ang) * e2)).normalized();
    }
    for (int a = 0; a < 3; ++a) max_diam = std::max(max_diam, s2_distance(n[a], n[(a + 1) % 3]));
    const double area = s2_signed_area(n[0], n[1], n[2]);
    min_area = std::min(min_area, std::abs(area));
    const auto x = sphere_point(ref, n[0]), y = sphere_point(ref, n[1]), z = sphere_point(ref, n[2]);
    for (int N : {5, 20}) {
      double diff = std::arg(sphere()->kernel_K(N, x, y, z)) - 2.0 * N * area;
      diff = std::remainder(diff, 2 * std::numbers::pi);
      worst = std::max(worst, std::abs(diff));
    }
  }
  notes.check(o, max_diam <= 0.1, "triangle diameter " + sci(max_diam) + " exceeds 0.1");
  notes.check(o, worst < 1e-3, "phase error " + sci(worst));
  o.detail = "20 triangles (diameter <= " + sci(max_diam) + ", min |area| " + sci(min_area) +
             "), N in {5,20}: max |arg K - 2N area| = " + sci(worst) + (o.pass ? "" : " | " + notes.str());
  return o;
}

Outcome unitality() {
  Outcome o;
  Notes notes;
  auto q = sphere();
  Rng rng({"mt19937_64", 1003});
  const auto pts = haar_sample(q->ref(), rng, 200);
  double i1 = 0, p1 = 0, cons = 0, adj = 0;
  for (int N = 1; N <= 20; ++N) {
    for (cplx v : q->symbol_I(Mat::Identity(N + 1, N + 1), N, pts)) i1 = std::max(i1, std::abs(v - 1.0));
    const Mat P = q->quantize_P(Polynomial::constant(3, 1.0), N, q->default_rule(N, 0));
    p1 = std::max(p1, (P - Mat::Identity(N + 1, N + 1)).norm());
    const Mat a = random_operator(N + 1, rng);
    const auto lhs = q->symbol_I(q->inject_i(a, N), N + 1, pts), rhs = q->symbol_I(a, N, pts);
    for (size_t k = 0; k < pts.size(); ++k) cons = std::max(cons, std::abs(lhs[k] - rhs[k]) / std::max(1.0, a.norm()));
    const Mat b = random_operator(N, rng);
    const cplx l = (q->inject_i(b, N - 1).adjoint() * a).trace() / double(N + 1);
    const cplx r = (b.adjoint() * q->project_p(a, N)).trace() / double(N);
    adj = std::max(adj, std::abs(l - r) / (a.norm() * b.norm()));
  }
  // Exact up to a few ulps from the rounding of a unit vector.
  notes.check(o, i1 <= 8 * std::numeric_limits<double>::epsilon(), "I_N(1) off by " + sci(i1));
  notes.check(o, p1 < 1e-12, "P_N(1) off by " + sci(p1));
  notes.check(o, cons < 1e-10, "I_{N+1} i_N vs I_N " + sci(cons));
  notes.check(o, adj < 1e-10, "adjointness " + sci(adj));
  o.detail = "|I_N(1)-1| " + sci(i1) + ", ||P_N(1)-1|| " + sci(p1) + ", consistency " + sci(cons) + ", adjointness " +
             sci(adj) + " (N <= 20, 200 points)" + (o.pass ? "" : " | " + notes.str());
  return o;
}

Outcome p_equivalence() {
  Outcome o;
  Rng rng({"mt19937_64", 1004});
  double worst = 0;
  for (int N = 1; N <= 20; ++N)
    for (int t = 0; t < 5; ++t) {
      const Mat a = random_operator(N + 1, rng);
      worst = std::max(worst, (sphere()->project_p(a, N) - sphere()->project_p(a, N, PForm::pi_minus)).norm() / a.norm());
    }
  o.pass = worst < 1e-10;
  o.detail = "partial trace vs Pi_- form, N <= 20: max rel diff " + sci(worst);
  return o;
}

Outcome star_convergence() {
  Outcome o;
  Notes notes;
  auto q = sphere();
  Rng rng({"mt19937_64", 1005});
  const auto pts = haar_sample(q->ref(), rng, 200);
  const auto x1 = Polynomial::coordinate(3, 0), x2 = Polynomial::coordinate(3, 1);
  const auto prod = x1 * x2, bracket = poisson_bracket(*q->algebra(), x1, x2);
  std::vector<double> Ns{5, 10, 20, 40}, star, pois;
  for (double n : Ns) {
    const int N = static_cast<int>(n);
    const auto rule = q->default_rule(N, 2);
    star.push_back(sup_defect(q->star(x1, x2, N, pts, rule), prod, q->ref(), pts));
    pois.push_back(sup_defect(q->poisson_estimate(x1, x2, N, pts, rule), bracket, q->ref(), pts));
  }
  const double s1 = loglog_slope(Ns, star), s2 = loglog_slope(Ns, pois);
  for (size_t k = 1; k < Ns.size(); ++k) {
    notes.check(o, star[k] < star[k - 1], "star defect not decreasing at N=" + std::to_string(int(Ns[k])));
    notes.check(o, pois[k] < pois[k - 1], "Poisson defect not decreasing at N=" + std::to_string(int(Ns[k])));
  }
  notes.check(o, s1 >= -1.3 && s1 <= -0.7, "star slope " + sci(s1));
  notes.check(o, s2 >= -1.3 && s2 <= -0.7, "Poisson slope " + sci(s2));
  std::ostringstream os;
  os.precision(3);
  os << "star defects";
  for (double d : star) os << " " << d;
  os << " slope " << s1 << "; Poisson defects";
  for (double d : pois) os << " " << d;
  os << " slope " << s2;
  o.detail = os.str() + (o.pass ? "" : " | " + notes.str());
  return o;
}

Outcome local_expansion() {
  Outcome o;
  Notes notes;
  std::ostringstream os;
  os.precision(3);
  for (auto q : {sphere(), plane()}) {
    std::vector<double> ds;
    for (double r : {0.04, 0.02, 0.01}) {
      Rng rng({"mt19937_64", 1006});
      ds.push_back(kernel_local_expansion(*q, r, 100, rng).max_discrepancy);
    }
    const double e1 = std::log2(ds[0] / ds[1]), e2 = std::log2(ds[1] / ds[2]);
    notes.check(o, e1 >= 2.7 && e2 >= 2.7, q->algebra()->name() + " exponent below 2.7");
    os << q->algebra()->name() << ": " << ds[0] << ", " << ds[1] << ", " << ds[2] << " (exponents " << e1 << ", " << e2
       << ") ";
  }
  o.detail = os.str() + (o.pass ? "" : "| " + notes.str());
  return o;
}

Outcome bundle_identities() {
  Outcome o;
  Notes notes;
  double worst_i = 0, worst_p = 0, worst_q = 0;
  for (int lam : {0, 1, -1, 2, -2, -4}) {
    BundleQuantizer b(sphere(), {lam});
    const int T = b.transition_level();
    const std::string tag = "lambda=" + std::to_string(lam);
    for (int N = 0; N <= 12; ++N) {
      const auto inv = b.q_invariants(N);
      worst_q = std::max({worst_q, inv.idempotent, inv.self_adjoint, inv.equivariance});
      notes.check(o, inv.rank == inv.expected_rank, tag + " rank of Q at N=" + std::to_string(N));
      notes.check(o, b.module_dims(N).zero == (N < T), tag + " zero module pattern at N=" + std::to_string(N));
      if (N < 12) {
        const auto ri = b.recursion_step_i(N);
        if (N == T - 1) {
          notes.check(o, ri.transition && ri.lhs_norm == 0.0 && ri.rhs_norm > 0.5,
                      tag + " transition at N=" + std::to_string(N));
        } else {
          notes.check(o, !ri.transition, tag + " spurious transition at N=" + std::to_string(N));
          worst_i = std::max(worst_i, ri.residual);
          notes.check(o, ri.residual < 1e-9, tag + " I_Q residual " + sci(ri.residual) + " at N=" + std::to_string(N));
        }
      }
      if (N >= 1) {
        const auto rp = b.recursion_step_p(N);
        worst_p = std::max(worst_p, rp.residual);
        notes.check(o, rp.residual < 1e-9, tag + " P_Q residual " + sci(rp.residual) + " at N=" + std::to_string(N));
      }
    }
    const auto sl = verify_section_limit(b, 12);
    notes.check(o, sl.first_mismatch < 0, tag + " decomposition differs from the section multiset");
    const auto f = classical_fiber(sphere()->algebra()->diagram(), {1}, {lam});
    notes.check(o, f.weight == Weight{-lam}, tag + " fiber weight");
  }
  notes.check(o, worst_q < 1e-10, "Q invariants " + sci(worst_q));
  o.detail = "Q invariants " + sci(worst_q) + ", max I_Q residual off transition " + sci(worst_i) +
             ", max P_Q residual " + sci(worst_p) + (o.pass ? "" : " | " + notes.str());
  return o;
}

Outcome classification() {
  Outcome o;
  Notes notes;
  struct Row {
    std::string diagram;
    std::vector<int> marks;
    long dim;
    int abelian;
    std::vector<std::string> semisimple;
  };
  const std::vector<Row> rows{{"A1", {1}, 2, 1, {}},        {"A2", {1}, 4, 1, {"A1"}},
                              {"A3", {1}, 6, 1, {"A2"}},    {"C2", {1}, 6, 1, {"A1"}},
                              {"A2", {1, 2}, 6, 2, {}},     {"B2", {1}, 6, 1, {"A1"}},
                              {"B5", {1, 3}, 40, 2, {"A1", "B2"}}};
  for (const auto& r : rows) {
    const auto s = classify_isotropy({parse_diagram(r.diagram), r.marks});
    std::vector<std::string> comps;
    for (const auto& c : s.semisimple_part) comps.push_back(c.label());
    std::sort(comps.begin(), comps.end());
    notes.check(o, s.dim_orbit == r.dim && s.abelian_rank == r.abelian && comps == r.semisimple,
                r.diagram + " row");
  }
  int checked = 0;
  std::vector<DynkinDiagram> ds;
  for (int k = 1; k <= 4; ++k) ds.push_back(DynkinDiagram::series_diagram('A', k));
  for (int k = 2; k <= 4; ++k) ds.push_back(DynkinDiagram::series_diagram('B', k));
  for (int k = 2; k <= 4; ++k) ds.push_back(DynkinDiagram::series_diagram('C', k));
  ds.push_back(DynkinDiagram::series_diagram('D', 4));
  ds.push_back(DynkinDiagram::series_diagram('G', 2));
  ds.push_back(DynkinDiagram::series_diagram('F', 4));
  for (const auto& d : ds)
    for (unsigned mask = 1; mask < (1u << d.rank); ++mask) {
      std::vector<int> marks;
      for (int i = 0; i < d.rank; ++i)
        if (mask & (1u << i)) marks.push_back(d.nodes[i]);
      const auto s = classify_isotropy({d, marks});
      notes.check(o, s.dim_orbit % 2 == 0, d.label() + " odd orbit");
      ++checked;
    }
  o.detail = "7 table/worked-example rows, " + std::to_string(checked) + " marked diagrams of rank <= 4 even" +
             (o.pass ? "" : " | " + notes.str());
  return o;
}

Outcome a2_smoke() {
  Outcome o;
  Notes notes;
  auto q = plane();
  const auto& g = q->algebra();
  double comm = 0, inter = 0, unit = 0, peak = 0;
  for (int N = 0; N <= 6; ++N) comm = std::max(comm, commutation_residual(q->level(N)));
  comm = std::max(comm, commutation_residual(build_irrep(g, {1, 1})));
  for (int N = 0; N <= 5; ++N) {
    const RepSpace t = tensor(q->ref(), q->level(N));
    inter = std::max(inter, intertwiner_residual({q->pi_plus(N), {N + 1, 0}}, t, q->level(N + 1)));
    const int d = q->dim(N), d1 = q->dim(N + 1);
    unit = std::max(unit, (q->inject_i(Mat::Identity(d, d), N) - Mat::Identity(d1, d1)).norm());
    unit = std::max(unit, (q->project_p(Mat::Identity(d1, d1), N + 1) - Mat::Identity(d, d)).norm());
  }
  for (int N = 1; N <= 6; ++N) {
    const RepSpace t = tensor(q->dual_ref(), q->level(N));
    inter = std::max(inter, intertwiner_residual({q->pi_minus(N), {N - 1, 0}}, t, q->level(N - 1)));
  }
  Rng rng({"mt19937_64", 1012});
  const auto pts = haar_sample(q->ref(), rng, 20);
  bool decays = true;
  for (int k = 0; k < 10; ++k) {
    const auto &x = pts[2 * k], &y = pts[2 * k + 1];
    const double base = std::abs(x.coherent(q->ref()).dot(y.coherent(q->ref())));
    double prev = 1.0;
    for (int N = 1; N <= 6; ++N) {
      const double ov = std::abs(q->coherent(N, x).dot(q->coherent(N, y)));
      peak = std::max(peak, std::abs(ov - std::pow(base, N)));
      decays = decays && ov < prev;
      prev = ov;
    }
  }
  notes.check(o, comm < 1e-10, "commutation " + sci(comm));
  notes.check(o, inter < 1e-10, "intertwiner " + sci(inter));
  notes.check(o, unit < 1e-10, "unitality " + sci(unit));
  notes.check(o, peak < 1e-10 && decays, "overlap decay");
  o.detail = "commutation " + sci(comm) + ", intertwiner " + sci(inter) + ", unitality " + sci(unit) +
             ", |overlap|^N deviation " + sci(peak) + (o.pass ? "" : " | " + notes.str());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Casimir law", casimir_law},
      {"Serre nilpotency", serre},
      {"Sphere relation flow", sphere_relation},
      {"Kernel modulus", kernel_modulus},
      {"Kernel phase", kernel_phase},
      {"Unitality and consistency", unitality},
      {"p_N equivalence", p_equivalence},
      {"Star-product convergence", star_convergence},
      {"Local expansion", local_expansion},
      {"Bundle identities", bundle_identities},
      {"Classification", classification},
      {"A2 smoke suite", a2_smoke},
  };
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
