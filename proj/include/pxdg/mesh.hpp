#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pxdg {

enum class BoundaryKind { dirichlet, neumann };

/// Which endpoints of the interval carry Dirichlet data.
struct DirichletSides {
  bool left = true;
  bool right = true;

  static DirichletSides both() { return {true, true}; }
  static DirichletSides none() { return {false, false}; }
  static DirichletSides left_only() { return {true, false}; }
  static DirichletSides right_only() { return {false, true}; }
};

/// How the face-size function is assigned at interior points.
/// `average` is the production rule; `squared_debug` (h^2) exists only as a
/// negative control for the property suites.
enum class FaceSizeRule { average, squared_debug };

/// Partition x_0 < ... < x_n of [x_left, x_right].
///
/// Element i is [x_i, x_{i+1}]. Faces are the nodes: x_1..x_{n-1} are
/// interior (left element i-1, right element i), x_0 and x_n are boundary
/// faces. The face size at an interior node is the mean of the two adjacent
/// element lengths and at a boundary node the adjacent element length.
class Mesh1D {
 public:
  Mesh1D(std::vector<double> nodes, DirichletSides dirichlet = DirichletSides::both(),
         FaceSizeRule rule = FaceSizeRule::average);

  std::size_t num_elements() const { return nodes_.size() - 1; }
  std::size_t num_nodes() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double left() const { return nodes_.front(); }
  double right() const { return nodes_.back(); }
  double length() const { return right() - left(); }

  std::pair<double, double> element(std::size_t e) const { return {nodes_[e], nodes_[e + 1]}; }
  double element_size(std::size_t e) const { return nodes_[e + 1] - nodes_[e]; }
  double max_element_size() const;

  bool is_interior_node(std::size_t i) const { return i > 0 && i + 1 < nodes_.size(); }
  std::size_t num_interior_faces() const { return nodes_.size() - 2; }

  /// Face size at node i.
  double face_size(std::size_t node_index) const;

  BoundaryKind left_kind() const { return dirichlet_.left ? BoundaryKind::dirichlet : BoundaryKind::neumann; }
  BoundaryKind right_kind() const { return dirichlet_.right ? BoundaryKind::dirichlet : BoundaryKind::neumann; }
  DirichletSides dirichlet() const { return dirichlet_; }
  FaceSizeRule face_size_rule() const { return rule_; }

  /// Element containing x; ties at interior nodes go to the right element.
  std::size_t locate(double x) const;

  bool contains(double x) const { return x >= left() && x <= right(); }

  /// Bisects every element.
  Mesh1D refine() const;

  /// "nodes=-1,-0.5,0,0.5,1 dirichlet=left,right"
  std::string to_string() const;
  static Mesh1D parse(std::string_view text);

  bool operator==(const Mesh1D& other) const {
    return nodes_ == other.nodes_ && dirichlet_.left == other.dirichlet_.left &&
           dirichlet_.right == other.dirichlet_.right && rule_ == other.rule_;
  }

 private:
  std::vector<double> nodes_;
  DirichletSides dirichlet_;
  FaceSizeRule rule_;
};

Mesh1D uniform_mesh(double x_left, double x_right, std::size_t n,
                    DirichletSides dirichlet = DirichletSides::both(),
                    FaceSizeRule rule = FaceSizeRule::average);

/// Element patches: T_z for every node z, T_kappa for every element (elements
/// sharing a node with kappa, kappa included) and T_e for every node-face
/// (union of T_kappa over elements touching the face). Lists are sorted.
struct Neighborhoods {
  std::vector<std::vector<std::size_t>> node_patch;
  std::vector<std::vector<std::size_t>> element_patch;
  std::vector<std::vector<std::size_t>> face_patch;
};

Neighborhoods face_neighborhoods(const Mesh1D& mesh);

}  // namespace pxdg
