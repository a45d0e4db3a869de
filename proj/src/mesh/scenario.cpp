#include "lanegrid/mesh/scenario.hpp"

#include "lanegrid/error.hpp"

namespace lanegrid::mesh {

std::string to_string(boundary_kind b) {
  return b == boundary_kind::periodic ? "periodic" : "outflow";
}

boundary_kind parse_boundary(std::string_view s) {
  if (s == "periodic") return boundary_kind::periodic;
  if (s == "outflow") return boundary_kind::outflow;
  throw config_error("unknown boundary '" + std::string(s) +
                     "' (expected outflow|periodic)");
}

scenario scenario::sod() {
  scenario sc;
  sc.name = "sod";
  sc.gravity = false;
  sc.boundary = boundary_kind::outflow;
  // Zero threshold refines every sub-grid to max_level: the tube runs on a
  // uniform tree, the usual shape for convergence and conservation runs.
  sc.refine_threshold = 0.0;
  sc.default_steps = 25;
  return sc;
}

scenario scenario::sphere() {
  scenario sc;
  sc.name = "sphere";
  sc.gravity = true;
  sc.boundary = boundary_kind::outflow;
  sc.refine_threshold = 0.1;
  sc.default_steps = 10;
  return sc;
}

scenario scenario::binary() {
  scenario sc;
  sc.name = "binary";
  sc.gravity = true;
  sc.boundary = boundary_kind::outflow;
  sc.refine_threshold = 0.1;
  sc.default_steps = 20;
  return sc;
}

scenario scenario::by_name(std::string_view name) {
  if (name == "sod") return sod();
  if (name == "sphere") return sphere();
  if (name == "binary") return binary();
  throw config_error("unknown scenario '" + std::string(name) +
                     "' (expected sod|sphere|binary)");
}

scenario scenario::from_json(const nlohmann::json& j) {
  scenario sc = by_name(j.value("name", std::string("sod")));
  if (j.contains("gamma")) sc.gamma = j.at("gamma").get<double>();
  if (j.contains("domain_edge")) sc.domain_edge = j.at("domain_edge").get<double>();
  if (j.contains("gravity")) sc.gravity = j.at("gravity").get<bool>();
  if (j.contains("boundary"))
    sc.boundary = parse_boundary(j.at("boundary").get<std::string>());
  if (j.contains("refine_threshold"))
    sc.refine_threshold = j.at("refine_threshold").get<double>();
  if (j.contains("steps")) sc.default_steps = j.at("steps").get<int>();
  if (j.contains("perturb")) sc.perturb = j.at("perturb").get<double>();
  if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("diaphragm")) sc.diaphragm = j.at("diaphragm").get<double>();
  if (j.contains("rho_left")) sc.rho_left = j.at("rho_left").get<double>();
  if (j.contains("p_left")) sc.p_left = j.at("p_left").get<double>();
  if (j.contains("rho_right")) sc.rho_right = j.at("rho_right").get<double>();
  if (j.contains("p_right")) sc.p_right = j.at("p_right").get<double>();
  if (j.contains("center_a")) sc.center_a = j.at("center_a").get<std::array<double, 3>>();
  if (j.contains("center_b")) sc.center_b = j.at("center_b").get<std::array<double, 3>>();
  if (j.contains("ball_radius")) sc.ball_radius = j.at("ball_radius").get<double>();
  if (j.contains("rho_inside")) sc.rho_inside = j.at("rho_inside").get<double>();
  if (j.contains("rho_outside")) sc.rho_outside = j.at("rho_outside").get<double>();
  if (j.contains("ambient_pressure"))
    sc.ambient_pressure = j.at("ambient_pressure").get<double>();

  if (!(sc.gamma > 1.0)) throw config_error("scenario gamma must be > 1");
  if (!(sc.domain_edge > 0.0)) throw config_error("domain_edge must be > 0");
  if (sc.refine_threshold < 0.0)
    throw config_error("refine_threshold must be >= 0");
  return sc;
}

nlohmann::json scenario::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["gamma"] = gamma;
  j["domain_edge"] = domain_edge;
  j["gravity"] = gravity;
  j["boundary"] = to_string(boundary);
  j["refine_threshold"] = refine_threshold;
  j["steps"] = default_steps;
  j["perturb"] = perturb;
  j["seed"] = seed;
  j["diaphragm"] = diaphragm;
  j["rho_left"] = rho_left;
  j["p_left"] = p_left;
  j["rho_right"] = rho_right;
  j["p_right"] = p_right;
  j["center_a"] = center_a;
  j["center_b"] = center_b;
  j["ball_radius"] = ball_radius;
  j["rho_inside"] = rho_inside;
  j["rho_outside"] = rho_outside;
  j["ambient_pressure"] = ambient_pressure;
  return j;
}

double scenario::initial_rho(double x, double y, double z) const {
  if (name == "sod") {
    (void)y;
    (void)z;
    return x < diaphragm ? rho_left : rho_right;
  }
  auto inside = [&](const std::array<double, 3>& c) {
    double dx = x - c[0], dy = y - c[1], dz = z - c[2];
    return dx * dx + dy * dy + dz * dz <= ball_radius * ball_radius;
  };
  if (name == "sphere") return inside(center_a) ? rho_inside : rho_outside;
  // binary
  return (inside(center_a) || inside(center_b)) ? rho_inside : rho_outside;
}

conserved scenario::initial_state(double x, double y, double z) const {
  double rho = initial_rho(x, y, z);
  double p;
  if (name == "sod") {
    p = x < diaphragm ? p_left : p_right;
  } else {
    p = ambient_pressure;
  }
  // velocity zero everywhere: E is internal energy only
  return {rho, 0.0, 0.0, 0.0, p / (gamma - 1.0)};
}

}  // namespace lanegrid::mesh
