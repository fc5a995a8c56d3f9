#include "pxdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pxdg {

Mesh1D::Mesh1D(std::vector<double> nodes, DirichletSides dirichlet, FaceSizeRule rule)
    : nodes_(std::move(nodes)), dirichlet_(dirichlet), rule_(rule) {
  if (nodes_.size() < 2) throw std::invalid_argument("mesh needs at least one element");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("mesh nodes must be strictly increasing");
  }
}

double Mesh1D::max_element_size() const {
  double h = 0.0;
  for (std::size_t e = 0; e < num_elements(); ++e) h = std::max(h, element_size(e));
  return h;
}

double Mesh1D::face_size(std::size_t i) const {
  if (i >= nodes_.size()) throw std::out_of_range("face index out of range");
  double h = 0.0;
  if (i == 0) h = element_size(0);
  else if (i + 1 == nodes_.size()) h = element_size(num_elements() - 1);
  else h = 0.5 * (element_size(i - 1) + element_size(i));
  return rule_ == FaceSizeRule::squared_debug ? h * h : h;
}

std::size_t Mesh1D::locate(double x) const {
  if (!contains(x)) throw std::domain_error("point outside the mesh");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.end()) return num_elements() - 1;
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

Mesh1D Mesh1D::refine() const {
  std::vector<double> fine;
  fine.reserve(2 * nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    fine.push_back(nodes_[i]);
    fine.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
  }
  fine.push_back(nodes_.back());
  return Mesh1D(std::move(fine), dirichlet_, rule_);
}

std::string Mesh1D::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "nodes=";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i) os << ',';
    os << nodes_[i];
  }
  os << " dirichlet=";
  std::vector<std::string> sides;
  if (dirichlet_.left) sides.push_back("left");
  if (dirichlet_.right) sides.push_back("right");
  if (sides.empty()) os << "none";
  for (std::size_t i = 0; i < sides.size(); ++i) os << (i ? "," : "") << sides[i];
  return os.str();
}

Mesh1D Mesh1D::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string token;
  std::vector<double> nodes;
  DirichletSides sides = DirichletSides::none();
  bool have_sides = false;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("mesh token without '=': " + token);
    const std::string key = token.substr(0, eq);
    std::stringstream values(token.substr(eq + 1));
    std::string item;
    if (key == "nodes") {
      while (std::getline(values, item, ',')) nodes.push_back(std::stod(item));
    } else if (key == "dirichlet") {
      have_sides = true;
      while (std::getline(values, item, ',')) {
        if (item == "left") sides.left = true;
        else if (item == "right") sides.right = true;
        else if (item == "both") sides = DirichletSides::both();
        else if (item != "none") throw std::invalid_argument("unknown boundary side: " + item);
      }
    } else {
      throw std::invalid_argument("unknown mesh key: " + key);
    }
  }
  if (!have_sides) sides = DirichletSides::both();
  return Mesh1D(std::move(nodes), sides);
}

Mesh1D uniform_mesh(double x_left, double x_right, std::size_t n, DirichletSides dirichlet,
                    FaceSizeRule rule) {
  if (n < 2) throw std::invalid_argument("uniform_mesh: need at least 2 elements");
  if (!(x_left < x_right)) throw std::invalid_argument("uniform_mesh: empty interval");
  std::vector<double> nodes(n + 1);
  const double h = (x_right - x_left) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) nodes[i] = x_left + h * static_cast<double>(i);
  nodes.back() = x_right;
  // keep symmetric meshes exactly symmetric (node at 0 for even n on (-a, a))
  if (x_left == -x_right) {
    for (std::size_t i = 0; i <= n / 2; ++i) {
      const double v = 0.5 * (nodes[n - i] - nodes[i]);
      nodes[i] = -v;
      nodes[n - i] = v;
    }
    if (n % 2 == 0) nodes[n / 2] = 0.0;
  }
  return Mesh1D(std::move(nodes), dirichlet, rule);
}

Neighborhoods face_neighborhoods(const Mesh1D& mesh) {
  const std::size_t ne = mesh.num_elements();
  const std::size_t nn = mesh.num_nodes();
  Neighborhoods out;
  out.node_patch.resize(nn);
  for (std::size_t z = 0; z < nn; ++z) {
    if (z > 0) out.node_patch[z].push_back(z - 1);
    if (z < ne) out.node_patch[z].push_back(z);
  }
  out.element_patch.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    std::set<std::size_t> patch;
    for (std::size_t z : {e, e + 1}) patch.insert(out.node_patch[z].begin(), out.node_patch[z].end());
    out.element_patch[e].assign(patch.begin(), patch.end());
  }
  out.face_patch.resize(nn);
  for (std::size_t z = 0; z < nn; ++z) {
    std::set<std::size_t> patch;
    for (std::size_t e : out.node_patch[z]) {
      patch.insert(out.element_patch[e].begin(), out.element_patch[e].end());
    }
    out.face_patch[z].assign(patch.begin(), patch.end());
  }
  return out;
}

}  // namespace pxdg
