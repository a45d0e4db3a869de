#pragma once

#include <string>
#include <string_view>
#include <type_traits>

#include "lanegrid/error.hpp"
#include "lanegrid/simd/pack.hpp"

namespace lanegrid::simd {

/// Lane configuration selected at run time (CLI --simd flag).
/// "scalar" is the reference backend at width 1; w2/w4/w8 are the wide
/// backend at a fixed width; "native" resolves to the widest f64 width the
/// host's vector unit covers.
enum class lane_mode { scalar, w2, w4, w8, native };

lane_mode parse_lane_mode(std::string_view s);
std::string to_string(lane_mode m);

/// Widest f64 lane width backed by the host vector ISA (8, 4, 2, or 1).
int native_lane_width() noexcept;

struct lane_config {
  bool wide = false;
  int width = 1;
};

lane_config resolve_lane_mode(lane_mode m);

std::string to_string(lane_config c);

/// Calls f with a std::type_identity<Pack> tag for the configured f64 pack
/// type. Kernels templated on the pack type get instantiated once per
/// (backend, width) combination and picked here at run time.
template <class F>
decltype(auto) visit_lane_config(lane_config cfg, F&& f) {
  if (cfg.wide) {
    switch (cfg.width) {
      case 1: return f(std::type_identity<lane_pack<double, 1, wide_backend>>{});
      case 2: return f(std::type_identity<lane_pack<double, 2, wide_backend>>{});
      case 4: return f(std::type_identity<lane_pack<double, 4, wide_backend>>{});
      case 8: return f(std::type_identity<lane_pack<double, 8, wide_backend>>{});
    }
  } else {
    switch (cfg.width) {
      case 1: return f(std::type_identity<lane_pack<double, 1, scalar_backend>>{});
      case 2: return f(std::type_identity<lane_pack<double, 2, scalar_backend>>{});
      case 4: return f(std::type_identity<lane_pack<double, 4, scalar_backend>>{});
      case 8: return f(std::type_identity<lane_pack<double, 8, scalar_backend>>{});
    }
  }
  throw config_error("unsupported lane width " + std::to_string(cfg.width));
}

}  // namespace lanegrid::simd
