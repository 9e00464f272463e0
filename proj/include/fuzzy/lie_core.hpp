#pragma once

#include "fuzzy/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fz {

/// Bond between two nodes; `arrow` is the id of the node the arrow points to
/// (the shorter root), or 0 for a simple bond.
struct Edge {
  int from = 0;
  int to = 0;
  int mult = 1;
  int arrow = 0;
};

/// Connected Dynkin diagram of a simple compact Lie algebra.
///
/// Nodes keep the ids they were given, sorted ascending; the Cartan matrix and
/// every weight use that order. `canon[k]` is the internal index of the node
/// with standard label k+1 for the recognized series.
class DynkinDiagram {
public:
  char series = '?';
  int rank = 0;
  std::vector<int> nodes;
  std::vector<Edge> edges;
  /// cartan(i,j) = 2(a_i,a_j)/(a_j,a_j); row i holds the fundamental-weight
  /// coordinates of the simple root a_i.
  Eigen::MatrixXi cartan;
  /// Squared root lengths scaled so that long roots have 12.
  std::vector<int> len2;
  std::vector<int> canon;

  std::string label() const;
  int index_of(int node_id) const;

  /// Validates a connected graph with bonds and arrows and recognizes its series.
  static DynkinDiagram from_edges(std::vector<int> nodes, std::vector<Edge> edges);
  /// Standard labelling of a named series, e.g. "A3", "B2", "E6".
  static DynkinDiagram series_diagram(char series, int rank);
};

/// Accepts a series name ("A3") or a JSON object {nodes, edges:[{from,to,mult,arrow}]}.
DynkinDiagram parse_diagram(const std::string& spec);

/// Positive roots in simple-root coordinates, ordered by height then lexicographically.
struct RootSystem {
  DynkinDiagram diagram;
  std::vector<std::vector<int>> positive;
  std::vector<int> height;
  /// For a non-simple root r: positive[r] = positive[parent[r]] + a_{step[r]}.
  /// Simple roots have parent -1 and step equal to their node index.
  std::vector<int> parent;
  std::vector<int> step;
  int highest = -1;

  explicit RootSystem(const DynkinDiagram& d);
  int num_positive() const { return static_cast<int>(positive.size()); }
  int dim() const { return diagram.rank + 2 * num_positive(); }
  /// Index of the simple root a_i among `positive`.
  int simple(int i) const;
  /// Squared length of a positive root in the units of DynkinDiagram::len2.
  int len2(int r) const;
  /// <mu, r^vee> for a weight in fundamental coordinates.
  int coroot_pairing(const Weight& mu, int r) const;
  /// Fundamental-weight coordinates of a positive root.
  Weight as_weight(int r) const;
};

struct MarkedDiagram {
  DynkinDiagram diagram;
  /// Node ids of the marked vertices; nonempty.
  std::vector<int> marks;
};

struct IsotropyDescriptor {
  int abelian_rank = 0;
  std::vector<DynkinDiagram> semisimple_part;
  long dim_H = 0;
  long dim_G = 0;
  long dim_orbit = 0;
};

IsotropyDescriptor classify_isotropy(const MarkedDiagram& md);

/// Dimension of the simple algebra of a recognized series.
long series_dimension(char series, int rank);

Weight dual_weight(const DynkinDiagram& d, const Weight& lambda);
bool is_dominant(const Weight& lambda);

/// Weyl dimension formula, exact.
long long weyl_dim(const RootSystem& rs, const Weight& lambda);

/// Inner product (mu, nu) of weights with long roots of squared length 2.
double weight_inner(const DynkinDiagram& d, const Weight& mu, const Weight& nu);

/// Eigenvalue of the quadratic Casimir on (lambda) in the generator normalization
/// used throughout (spin-j value j(j+1) for A1).
double casimir_value(const RootSystem& rs, const Weight& lambda);

/// Dominant weight in the Weyl orbit of mu, restricted to reflections in the
/// nodes listed by `allowed` (all nodes when empty).
Weight dominant_conjugate(const DynkinDiagram& d, Weight mu, const std::vector<int>& allowed = {});

/// Matrix-level data of a simple compact Lie algebra.
///
/// `J` is a basis of self-adjoint generators realized in a faithful reference
/// representation, orthonormal for the invariant form `metric`, with
/// [J_a,J_b] = i C^c_ab J_c. The form is normalized so that the su(2) spanned
/// by a long-root triple has generators of spin type, [J_1,J_2] = iJ_3.
/// The complexified basis B = (h_1..h_l, e_r..., f_r...) of Chevalley type is
/// related by J_a = sum_k to_chevalley(a,k) B_k and B_k = sum_a from_chevalley(k,a) J_a.
struct LieAlgebraData {
  RootSystem roots;
  int dim = 0;
  Weight reference_hw;
  std::vector<Mat> J;
  /// structure(a,b,c) = C^c_ab stored at index (a*dim + b)*dim + c.
  std::vector<double> structure;
  RMat metric;
  RMat inverse_metric;
  Mat to_chevalley;
  Mat from_chevalley;
  double trace_scale = 1.0;

  double C(int a, int b, int c) const { return structure[(a * dim + b) * dim + c]; }
  int rank() const { return roots.diagram.rank; }
  const DynkinDiagram& diagram() const { return roots.diagram; }
  std::string name() const { return roots.diagram.label(); }
};

using AlgebraPtr = std::shared_ptr<const LieAlgebraData>;

/// Builds structure constants and the Chevalley change of basis. Supported
/// for every classical series and G2, F4, E6 (reference representation
/// dimension permitting).
AlgebraPtr algebra_data(const DynkinDiagram& d);

/// Largest |antisymmetry| and Jacobi residuals of the structure constants.
double structure_antisymmetry_residual(const LieAlgebraData& g);
double structure_jacobi_residual(const LieAlgebraData& g);

}  // namespace fz
