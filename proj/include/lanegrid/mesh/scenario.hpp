#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace lanegrid::mesh {

enum class boundary_kind { outflow, periodic };

std::string to_string(boundary_kind b);
boundary_kind parse_boundary(std::string_view s);

/// Conserved cell state in field order rho, momx, momy, momz, E.
using conserved = std::array<double, 5>;

/// Benchmark scenario: initial condition, equation-of-state parameter and
/// refinement configuration. Three built-in shapes:
///   sod    — x-aligned shock tube, uniform in y/z, hydro only
///   sphere — dense ball in a light ambient, hydro + gravity
///   binary — two dense balls placed point-symmetrically, hydro + gravity
struct scenario {
  std::string name = "sod";
  double gamma = 1.4;
  double domain_edge = 1.0;
  bool gravity = false;
  boundary_kind boundary = boundary_kind::outflow;
  double refine_threshold = 0.0;
  int default_steps = 25;
  double perturb = 0.0;  // relative density perturbation amplitude
  std::uint64_t seed = 0;

  // sod parameters
  double diaphragm = 0.5;
  double rho_left = 1.0, p_left = 1.0;
  double rho_right = 0.125, p_right = 0.1;

  // sphere / binary parameters
  std::array<double, 3> center_a = {0.3125, 0.3125, 0.3125};
  std::array<double, 3> center_b = {0.6875, 0.6875, 0.6875};
  double ball_radius = 0.06;
  double rho_inside = 1.0;
  double rho_outside = 0.01;
  double ambient_pressure = 1.0;

  static scenario sod();
  static scenario sphere();
  static scenario binary();
  static scenario by_name(std::string_view name);

  /// Built-in defaults for "name" overridden by any keys present in j.
  static scenario from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  /// Analytic initial condition at a physical point (unperturbed).
  conserved initial_state(double x, double y, double z) const;

  /// Initial mass density only (drives the refinement trigger).
  double initial_rho(double x, double y, double z) const;
};

}  // namespace lanegrid::mesh
