#include "pxdg/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pxdg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad number for " + what + ": '" + text + "'");
}

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, what));
  }
  return out;
}

bool to_flag(const std::string& text, const std::string& what) {
  if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "off" || text == "no") return false;
  throw ConfigError("bad flag for " + what + ": '" + text + "'");
}

DirichletSides parse_sides(const std::string& text) {
  if (text == "none") return DirichletSides::none();
  DirichletSides sides = DirichletSides::none();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "left") sides.left = true;
    else if (item == "right") sides.right = true;
    else throw ConfigError("bad dirichlet side: '" + item + "'");
  }
  return sides;
}

ExponentField parse_field(const std::string& text, const std::string& what) {
  try {
    return ExponentField::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("bad exponent for " + what + ": " + e.what());
  }
}

}  // namespace

Problem paper1d(double epsilon, double a, double C) {
  Problem pb;
  std::ostringstream id;
  id.precision(17);
  id << "paper1d:eps=" << epsilon << ",a=" << a << ",C=" << C;
  pb.id = id.str();
  pb.exact = build_exact(epsilon, a, C);
  pb.spec.p = ExponentField::hat(epsilon, a);
  pb.spec.u_D = {-pb.exact->B(), pb.exact->B()};
  pb.spec.normalize_by_exponent = true;
  return pb;
}

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected key=value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::function<double(double)> parse_data_function(const std::string& text) {
  std::istringstream ss(text);
  std::string kind;
  ss >> kind;
  std::vector<double> c;
  std::string tok;
  while (ss >> tok) c.push_back(to_double(tok, "xi"));
  if (kind == "const" && c.size() == 1) return [v = c[0]](double) { return v; };
  if (kind == "linear" && c.size() == 2) return [c](double x) { return c[0] + c[1] * x; };
  if (kind == "sin" && c.size() == 2) return [c](double x) { return c[0] * std::sin(c[1] * x); };
  if (kind == "poly" && !c.empty()) {
    return [c](double x) {
      double v = 0.0;
      for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
      return v;
    };
  }
  throw ConfigError("bad data function: '" + text + "'");
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file " + path);
  auto kv = parse_key_values(in, path);
  Problem pb;
  pb.id = "custom:" + path;
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  if (auto v = take("domain")) {
    const auto d = split_numbers(*v, ',', "domain");
    if (d.size() != 2 || !(d[0] < d[1])) throw ConfigError("domain needs two increasing numbers");
    pb.x_left = d[0];
    pb.x_right = d[1];
  }
  if (auto v = take("dirichlet")) pb.dirichlet = parse_sides(*v);
  if (auto v = take("p")) pb.spec.p = parse_field(*v, "p");
  if (auto v = take("q")) pb.spec.q = parse_field(*v, "q");
  if (auto v = take("r")) pb.spec.r = parse_field(*v, "r");
  if (auto v = take("u_left")) pb.spec.u_D.left = to_double(*v, "u_left");
  if (auto v = take("u_right")) pb.spec.u_D.right = to_double(*v, "u_right");
  if (auto v = take("normalize")) pb.spec.normalize_by_exponent = to_flag(*v, "normalize");
  if (auto v = take("fidelity")) pb.spec.fidelity_on = to_flag(*v, "fidelity");
  if (auto v = take("xi")) pb.spec.xi = parse_data_function(*v);
  if (!kv.empty()) throw ConfigError(path + ": unknown key '" + kv.begin()->first + "'");
  if (pb.spec.fidelity_on && !pb.spec.xi) throw ConfigError(path + ": fidelity=1 needs xi");
  return pb;
}

Problem resolve_problem(const std::string& id) {
  if (id == "paper1d") return paper1d();
  if (id.rfind("paper1d:", 0) == 0) {
    double eps = 0.01, a = 0.01, C = 1.3;
    std::stringstream ss(id.substr(8));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("bad paper1d parameter: '" + item + "'");
      const std::string key = trim(item.substr(0, eq));
      const double v = to_double(item.substr(eq + 1), key);
      if (key == "eps") eps = v;
      else if (key == "a") a = v;
      else if (key == "C") C = v;
      else throw ConfigError("unknown paper1d parameter '" + key + "'");
    }
    try {
      return paper1d(eps, a, C);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (id.rfind("custom:", 0) == 0) return load_problem_file(id.substr(7));
  throw ConfigError("unknown problem '" + id + "'");
}

}  // namespace pxdg
