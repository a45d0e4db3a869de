#include "lanegrid/simd/dispatch.hpp"

namespace lanegrid::simd {

lane_mode parse_lane_mode(std::string_view s) {
  if (s == "scalar") return lane_mode::scalar;
  if (s == "w2") return lane_mode::w2;
  if (s == "w4") return lane_mode::w4;
  if (s == "w8") return lane_mode::w8;
  if (s == "native") return lane_mode::native;
  throw config_error("unknown simd mode '" + std::string(s) +
                     "' (expected scalar|w2|w4|w8|native)");
}

std::string to_string(lane_mode m) {
  switch (m) {
    case lane_mode::scalar: return "scalar";
    case lane_mode::w2: return "w2";
    case lane_mode::w4: return "w4";
    case lane_mode::w8: return "w8";
    case lane_mode::native: return "native";
  }
  return "?";
}

int native_lane_width() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  if (__builtin_cpu_supports("avx512f")) return 8;
  if (__builtin_cpu_supports("avx")) return 4;
  if (__builtin_cpu_supports("sse2")) return 2;
  return 1;
#elif defined(__ARM_NEON) || defined(__aarch64__)
  return 2;
#else
  return 1;
#endif
}

lane_config resolve_lane_mode(lane_mode m) {
  switch (m) {
    case lane_mode::scalar: return {false, 1};
    case lane_mode::w2: return {true, 2};
    case lane_mode::w4: return {true, 4};
    case lane_mode::w8: return {true, 8};
    case lane_mode::native: return {true, native_lane_width()};
  }
  return {false, 1};
}

std::string to_string(lane_config c) {
  if (!c.wide && c.width == 1) return "scalar";
  return (c.wide ? "w" : "scalar-w") + std::to_string(c.width);
}

}  // namespace lanegrid::simd
