#include "fuzzy/lie_core.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace fz {

std::string to_string(const Weight& w) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << ')';
  return os.str();
}

Weight operator+(const Weight& a, const Weight& b) {
  if (a.size() != b.size()) throw Error("weight rank mismatch");
  Weight r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Weight operator-(const Weight& a, const Weight& b) {
  if (a.size() != b.size()) throw Error("weight rank mismatch");
  Weight r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Weight operator*(int n, const Weight& a) {
  Weight r(a);
  for (auto& x : r) x *= n;
  return r;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

double opnorm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------- diagrams

std::string DynkinDiagram::label() const {
  return std::string(1, series) + std::to_string(rank);
}

int DynkinDiagram::index_of(int node_id) const {
  auto it = std::find(nodes.begin(), nodes.end(), node_id);
  if (it == nodes.end()) throw Error("unknown node id " + std::to_string(node_id));
  return static_cast<int>(it - nodes.begin());
}

namespace {

struct Graph {
  int n;
  std::vector<std::vector<int>> adj;
  std::map<std::pair<int, int>, int> mult;  // keyed by (min,max) index
  int m(int a, int b) const {
    auto it = mult.find({std::min(a, b), std::max(a, b)});
    return it == mult.end() ? 0 : it->second;
  }
};

// Walks a path starting at `start` avoiding `block`; returns visited indices.
std::vector<int> walk(const Graph& g, int start, int block) {
  std::vector<int> path{start};
  int prev = block, cur = start;
  while (true) {
    int next = -1;
    for (int x : g.adj[cur])
      if (x != prev) next = x;
    if (next < 0 || static_cast<int>(g.adj[cur].size()) > 2) break;
    path.push_back(next);
    prev = cur;
    cur = next;
  }
  return path;
}

}  // namespace

DynkinDiagram DynkinDiagram::from_edges(std::vector<int> node_ids, std::vector<Edge> edge_list) {
  if (node_ids.empty()) throw Error("diagram has no nodes");
  std::sort(node_ids.begin(), node_ids.end());
  if (std::adjacent_find(node_ids.begin(), node_ids.end()) != node_ids.end())
    throw Error("duplicate node ids");
  DynkinDiagram d;
  d.nodes = node_ids;
  d.rank = static_cast<int>(node_ids.size());
  const int n = d.rank;
  Graph g{n, std::vector<std::vector<int>>(n), {}};
  for (auto& e : edge_list) {
    int a = d.index_of(e.from), b = d.index_of(e.to);
    if (a == b) throw Error("self loop");
    if (e.mult < 1 || e.mult > 3) throw Error("bond multiplicity must be 1, 2 or 3");
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    if (g.mult.count(key)) throw Error("repeated edge");
    if (e.mult > 1 && e.arrow != e.from && e.arrow != e.to)
      throw Error("multiple bond needs an arrow pointing to one of its nodes");
    g.mult[key] = e.mult;
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  if (static_cast<int>(edge_list.size()) != n - 1) throw Error("diagram is not a tree");
  {
    std::vector<int> seen(n, 0), stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int x : g.adj[v])
        if (!seen[x]) seen[x] = 1, stack.push_back(x);
    }
    if (std::count(seen.begin(), seen.end(), 1) != n) throw Error("diagram is disconnected");
  }
  d.edges = edge_list;

  // Root lengths: propagate ratios through the tree, long roots get 12.
  std::vector<double> len(n, 0.0);
  {
    len[0] = 1.0;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int x : g.adj[v]) {
        if (len[x] != 0.0) continue;
        int m = g.m(v, x);
        double r = 1.0;
        if (m > 1) {
          const Edge* e = nullptr;
          for (auto& ed : edge_list) {
            int a = d.index_of(ed.from), b = d.index_of(ed.to);
            if ((a == v && b == x) || (a == x && b == v)) e = &ed;
          }
          int shortn = d.index_of(e->arrow);
          r = (shortn == x) ? 1.0 / m : static_cast<double>(m);
        }
        len[x] = len[v] * r;
        stack.push_back(x);
      }
    }
    double mx = *std::max_element(len.begin(), len.end());
    d.len2.resize(n);
    for (int i = 0; i < n; ++i) {
      double v = 12.0 * len[i] / mx;
      d.len2[i] = static_cast<int>(std::lround(v));
    }
  }
  d.cartan = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) d.cartan(i, i) = 2;
  for (auto& [key, m] : g.mult) {
    auto [a, b] = key;
    if (m == 1) {
      d.cartan(a, b) = d.cartan(b, a) = -1;
      continue;
    }
    int s = d.len2[a] < d.len2[b] ? a : b;
    int l = s == a ? b : a;
    d.cartan(s, l) = -1;
    d.cartan(l, s) = -m;
  }

  // Series recognition.
  int multiple = 0, branch = -1;
  for (auto& [key, m] : g.mult)
    if (m > 1) ++multiple;
  for (int i = 0; i < n; ++i) {
    int deg = static_cast<int>(g.adj[i].size());
    if (deg > 3) throw Error("node of degree > 3");
    if (deg == 3) {
      if (branch >= 0) throw Error("more than one branch node");
      branch = i;
    }
  }
  if (multiple > 1) throw Error("more than one multiple bond");
  if (branch >= 0 && multiple) throw Error("branch node together with a multiple bond");

  auto ends = [&]() {
    std::vector<int> e;
    for (int i = 0; i < n; ++i)
      if (g.adj[i].size() <= 1) e.push_back(i);
    return e;
  };

  if (n == 1) {
    d.series = 'A';
    d.canon = {0};
    return d;
  }
  if (branch < 0 && !multiple) {
    d.series = 'A';
    d.canon = walk(g, ends().front(), -1);
    return d;
  }
  if (branch < 0) {
    auto e = ends();
    int mb = 0, ma = 0, mbv = 0;
    for (auto& [key, m] : g.mult)
      if (m > 1) ma = key.first, mbv = key.second, mb = m;
    if (mb == 3) {
      if (n != 2) throw Error("triple bond only occurs in G2");
      d.series = 'G';
      int s = d.len2[ma] < d.len2[mbv] ? ma : mbv;
      d.canon = {s, s == ma ? mbv : ma};
      return d;
    }
    bool at_end = (g.adj[ma].size() == 1) || (g.adj[mbv].size() == 1);
    if (n == 2) {
      d.series = 'B';
      int l = d.len2[ma] > d.len2[mbv] ? ma : mbv;
      d.canon = {l, l == ma ? mbv : ma};
      return d;
    }
    if (at_end) {
      int endn = g.adj[ma].size() == 1 ? ma : mbv;
      int other = endn == ma ? mbv : ma;
      int start = e[0] == endn ? e[1] : e[0];
      d.canon = walk(g, start, -1);
      d.series = d.len2[endn] < d.len2[other] ? 'B' : 'C';
      return d;
    }
    if (n != 4) throw Error("interior double bond only occurs in F4");
    // F4: long-long => short-short
    int start = d.len2[e[0]] == 12 ? e[0] : e[1];
    d.canon = walk(g, start, -1);
    if (d.len2[d.canon[0]] != 12 || d.len2[d.canon[1]] != 12) throw Error("invalid F4 pattern");
    d.series = 'F';
    return d;
  }
  // Branch node: D or E.
  std::vector<std::vector<int>> arms;
  for (int x : g.adj[branch]) arms.push_back(walk(g, x, branch));
  for (auto& a : arms)
    for (int v : a)
      if (g.adj[v].size() > 2) throw Error("invalid branching");
  std::stable_sort(arms.begin(), arms.end(),
                   [](auto& a, auto& b) { return a.size() < b.size(); });
  size_t a0 = arms[0].size(), a1 = arms[1].size(), a2 = arms[2].size();
  if (a0 == 1 && a1 == 1) {
    d.series = 'D';
    std::vector<int> longarm = arms[2];
    std::reverse(longarm.begin(), longarm.end());
    d.canon = longarm;
    d.canon.push_back(branch);
    int x = arms[0][0], y = arms[1][0];
    d.canon.push_back(std::min(x, y));
    d.canon.push_back(std::max(x, y));
    return d;
  }
  if (a0 == 1 && a1 == 2 && a2 >= 2 && a2 <= 4) {
    d.series = 'E';
    // 1-3-4-5-6-7-8, node 2 attached to 4.
    d.canon.assign(n, -1);
    d.canon[1] = arms[0][0];
    d.canon[3] = branch;
    d.canon[2] = arms[1][0];
    d.canon[0] = arms[1][1];
    for (size_t k = 0; k < a2; ++k) d.canon[4 + k] = arms[2][k];
    return d;
  }
  throw Error("branch arms do not match D or E");
}

DynkinDiagram DynkinDiagram::series_diagram(char s, int r) {
  s = static_cast<char>(std::toupper(s));
  auto chain = [](int n) {
    std::vector<Edge> e;
    for (int i = 1; i < n; ++i) e.push_back({i, i + 1, 1, 0});
    return e;
  };
  std::vector<int> ids(r);
  std::iota(ids.begin(), ids.end(), 1);
  std::vector<Edge> e;
  switch (s) {
    case 'A':
      if (r < 1) throw Error("A_n needs n >= 1");
      e = chain(r);
      break;
    case 'B':
      if (r < 2) throw Error("B_n needs n >= 2");
      e = chain(r);
      e.back() = {r - 1, r, 2, r};
      break;
    case 'C':
      if (r < 2) throw Error("C_n needs n >= 2");
      e = chain(r);
      e.back() = {r - 1, r, 2, r - 1};
      break;
    case 'D':
      if (r < 4) throw Error("D_n needs n >= 4");
      e = chain(r - 1);
      e.push_back({r - 2, r, 1, 0});
      break;
    case 'E':
      if (r < 6 || r > 8) throw Error("E_n needs 6 <= n <= 8");
      e = {{1, 3, 1, 0}, {3, 4, 1, 0}, {2, 4, 1, 0}};
      for (int i = 4; i < r; ++i) e.push_back({i, i + 1, 1, 0});
      break;
    case 'F':
      if (r != 4) throw Error("F_n only for n = 4");
      e = {{1, 2, 1, 0}, {2, 3, 2, 3}, {3, 4, 1, 0}};
      break;
    case 'G':
      if (r != 2) throw Error("G_n only for n = 2");
      e = {{1, 2, 3, 1}};
      break;
    default:
      throw Error(std::string("unknown series ") + s);
  }
  DynkinDiagram d = from_edges(ids, e);
  // Keep the standard labelling for named series.
  d.series = s;
  d.canon.resize(r);
  std::iota(d.canon.begin(), d.canon.end(), 0);
  return d;
}

DynkinDiagram parse_diagram(const std::string& spec) {
  std::string t;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error("empty diagram spec");
  if (t[0] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const std::exception& ex) {
      throw Error(std::string("malformed diagram JSON: ") + ex.what());
    }
    if (!j.contains("nodes") || !j["nodes"].is_array()) throw Error("diagram JSON needs nodes");
    std::vector<int> nodes = j["nodes"].get<std::vector<int>>();
    std::vector<Edge> edges;
    if (j.contains("edges"))
      for (auto& e : j["edges"]) {
        Edge ed;
        ed.from = e.at("from").get<int>();
        ed.to = e.at("to").get<int>();
        ed.mult = e.value("mult", 1);
        ed.arrow = e.value("arrow", 0);
        edges.push_back(ed);
      }
    return DynkinDiagram::from_edges(nodes, edges);
  }
  char s = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  std::string rest = t.substr(1);
  if (!rest.empty() && (rest[0] == '_')) rest = rest.substr(1);
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit))
    throw Error("malformed diagram spec '" + spec + "'");
  return DynkinDiagram::series_diagram(s, std::stoi(rest));
}

// ---------------------------------------------------------------- roots

RootSystem::RootSystem(const DynkinDiagram& d) : diagram(d) {
  const int n = d.rank;
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < n; ++i) {
    std::vector<int> c(n, 0);
    c[i] = 1;
    index[c] = static_cast<int>(positive.size());
    positive.push_back(c);
    height.push_back(1);
    parent.push_back(-1);
    step.push_back(i);
  }
  // Grow by root strings: b + a_i is a root iff q > 0 with q = p - <b, a_i^vee>.
  for (size_t k = 0; k < positive.size(); ++k) {
    auto b = positive[k];
    for (int i = 0; i < n; ++i) {
      int pairing = 0;
      for (int j = 0; j < n; ++j) pairing += b[j] * d.cartan(j, i);
      int p = 0;
      auto c = b;
      while (true) {
        c[i] -= 1;
        if (c[i] < 0 || !index.count(c)) break;
        ++p;
      }
      if (p - pairing > 0) {
        auto nb = b;
        nb[i] += 1;
        if (!index.count(nb)) {
          index[nb] = static_cast<int>(positive.size());
          positive.push_back(nb);
          height.push_back(height[k] + 1);
          parent.push_back(static_cast<int>(k));
          step.push_back(i);
        }
      }
    }
  }
  // Reorder by height then lexicographically (descending coordinates).
  std::vector<int> order(positive.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (height[a] != height[b]) return height[a] < height[b];
    return positive[a] > positive[b];
  });
  std::vector<int> inv(order.size());
  for (size_t k = 0; k < order.size(); ++k) inv[order[k]] = static_cast<int>(k);
  std::vector<std::vector<int>> P;
  std::vector<int> H, Pa, S;
  for (int o : order) {
    P.push_back(positive[o]);
    H.push_back(height[o]);
    Pa.push_back(parent[o] < 0 ? -1 : inv[parent[o]]);
    S.push_back(step[o]);
  }
  positive = P;
  height = H;
  parent = Pa;
  step = S;
  highest = static_cast<int>(positive.size()) - 1;
}

int RootSystem::simple(int i) const {
  for (int r = 0; r < num_positive(); ++r)
    if (height[r] == 1 && positive[r][i] == 1) return r;
  throw Error("simple root index out of range");
}

int RootSystem::len2(int r) const {
  const auto& c = positive[r];
  const int n = diagram.rank;
  long s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += static_cast<long>(c[i]) * c[j] * diagram.cartan(i, j) * diagram.len2[j];
  return static_cast<int>(s / 2);
}

int RootSystem::coroot_pairing(const Weight& mu, int r) const {
  const auto& c = positive[r];
  long num = 0;
  for (int j = 0; j < diagram.rank; ++j) num += static_cast<long>(c[j]) * mu[j] * diagram.len2[j];
  return static_cast<int>(num / len2(r));
}

Weight RootSystem::as_weight(int r) const {
  Weight w(diagram.rank, 0);
  for (int j = 0; j < diagram.rank; ++j)
    for (int k = 0; k < diagram.rank; ++k) w[k] += positive[r][j] * diagram.cartan(j, k);
  return w;
}

// ---------------------------------------------------------------- weights

bool is_dominant(const Weight& lambda) {
  return std::all_of(lambda.begin(), lambda.end(), [](int x) { return x >= 0; });
}

Weight dual_weight(const DynkinDiagram& d, const Weight& lambda) {
  if (static_cast<int>(lambda.size()) != d.rank) throw Error("weight length does not match rank");
  const int n = d.rank;
  // Permutation of standard labels 1..n (0-based here).
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  switch (d.series) {
    case 'A':
      std::reverse(perm.begin(), perm.end());
      break;
    case 'D':
      if (n % 2 == 1) std::swap(perm[n - 2], perm[n - 1]);
      break;
    case 'E':
      if (n == 6) perm = {5, 1, 4, 3, 2, 0};
      break;
    default:
      break;
  }
  Weight out(n);
  for (int k = 0; k < n; ++k) out[d.canon[perm[k]]] = lambda[d.canon[k]];
  return out;
}

long long weyl_dim(const RootSystem& rs, const Weight& lambda) {
  using boost::multiprecision::cpp_int;
  const auto& d = rs.diagram;
  if (static_cast<int>(lambda.size()) != d.rank) throw Error("weight length does not match rank");
  if (!is_dominant(lambda)) throw Error("weyl_dim needs a dominant weight, got " + to_string(lambda));
  cpp_int num = 1, den = 1;
  for (const auto& c : rs.positive) {
    long a = 0, b = 0;
    for (int j = 0; j < d.rank; ++j) {
      a += static_cast<long>(c[j]) * (lambda[j] + 1) * d.len2[j];
      b += static_cast<long>(c[j]) * d.len2[j];
    }
    num *= a;
    den *= b;
  }
  cpp_int q = num / den;
  if (q * den != num) throw Error("Weyl dimension is not integral");
  if (q > cpp_int(std::numeric_limits<long long>::max())) throw Error("Weyl dimension overflows");
  return static_cast<long long>(q);
}

double weight_inner(const DynkinDiagram& d, const Weight& mu, const Weight& nu) {
  // (pi_i, pi_j) = (A^{-1})_{ij} (a_j, a_j)/2 with len2 = 6 (a,a).
  Eigen::MatrixXd A = d.cartan.cast<double>();
  Eigen::MatrixXd Ainv = A.inverse();
  double s = 0;
  for (int i = 0; i < d.rank; ++i)
    for (int j = 0; j < d.rank; ++j) s += mu[i] * nu[j] * Ainv(i, j) * (d.len2[j] / 6.0) / 2.0;
  return s;
}

double casimir_value(const RootSystem& rs, const Weight& lambda) {
  Weight two_rho_plus(lambda.size());
  for (size_t i = 0; i < lambda.size(); ++i) two_rho_plus[i] = lambda[i] + 2;
  return 0.5 * weight_inner(rs.diagram, lambda, two_rho_plus);
}

Weight dominant_conjugate(const DynkinDiagram& d, Weight mu, const std::vector<int>& allowed) {
  std::vector<int> nodes = allowed;
  if (nodes.empty()) {
    nodes.resize(d.rank);
    std::iota(nodes.begin(), nodes.end(), 0);
  }
  for (int guard = 0; guard < 100000; ++guard) {
    int bad = -1;
    for (int i : nodes)
      if (mu[i] < 0) {
        bad = i;
        break;
      }
    if (bad < 0) return mu;
    int c = mu[bad];
    for (int k = 0; k < d.rank; ++k) mu[k] -= c * d.cartan(bad, k);
  }
  throw Error("Weyl reflection loop did not terminate");
}

// ---------------------------------------------------------------- isotropy

long series_dimension(char s, int n) {
  switch (s) {
    case 'A': return static_cast<long>(n) * (n + 2);
    case 'B':
    case 'C': return static_cast<long>(n) * (2 * n + 1);
    case 'D': return static_cast<long>(n) * (2 * n - 1);
    case 'E': return n == 6 ? 78 : n == 7 ? 133 : 248;
    case 'F': return 52;
    case 'G': return 14;
    default: throw Error("unknown series");
  }
}

IsotropyDescriptor classify_isotropy(const MarkedDiagram& md) {
  const auto& d = md.diagram;
  if (md.marks.empty()) throw Error("marked diagram needs at least one mark");
  std::set<int> marked;
  for (int id : md.marks) marked.insert(d.index_of(id));
  if (marked.size() != md.marks.size()) throw Error("repeated mark");

  RootSystem rs(d);
  IsotropyDescriptor out;
  out.abelian_rank = static_cast<int>(marked.size());
  out.dim_G = rs.dim();
  long residual_pos = 0;
  for (const auto& c : rs.positive) {
    bool avoid = true;
    for (int i : marked)
      if (c[i] != 0) avoid = false;
    if (avoid) ++residual_pos;
  }
  out.dim_H = d.rank + 2 * residual_pos;
  out.dim_orbit = out.dim_G - out.dim_H;

  // Connected components of the unmarked subgraph.
  std::vector<int> comp(d.rank, -1);
  int ncomp = 0;
  for (int s = 0; s < d.rank; ++s) {
    if (marked.count(s) || comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int x = 0; x < d.rank; ++x)
        if (x != v && d.cartan(v, x) != 0 && !marked.count(x) && comp[x] < 0)
          comp[x] = ncomp, stack.push_back(x);
    }
    ++ncomp;
  }
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> ids;
    std::vector<Edge> edges;
    for (int i = 0; i < d.rank; ++i)
      if (comp[i] == c) ids.push_back(d.nodes[i]);
    for (const auto& e : d.edges) {
      int a = d.index_of(e.from), b = d.index_of(e.to);
      if (comp[a] == c && comp[b] == c) edges.push_back(e);
    }
    out.semisimple_part.push_back(DynkinDiagram::from_edges(ids, edges));
  }
  return out;
}

}  // namespace fz
