#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

// Portable lane-pack value types: a fixed-width vector of same-typed lanes
// (lane_pack) and its per-lane boolean companion (lane_mask).
//
// Two backends with identical, bit-reproducible semantics:
//   * scalar_backend — plain element arrays and explicit per-lane loops.
//     This is the reference implementation; its loops define the semantics.
//   * wide_backend   — compiler vector extensions plus x86 intrinsics where
//     they matter (sqrt, fma). Results are bit-identical to the scalar
//     backend for every operation, including reductions.
//
// Semantic contract shared by both backends:
//   * arithmetic is IEEE-754 round-to-nearest-even, one rounding per op
//   * fma performs a single rounding (fused)
//   * min/max propagate the non-NaN operand when exactly one input is NaN
//   * comparisons involving a NaN operand are false
//   * reduce_sum accumulates lanes strictly left to right (lane 0 first);
//     reduce_min/reduce_max are order-independent
//
// Widths are limited to {1, 2, 4, 8}. There are no gather/scatter or
// partial loads: callers pad buffers so every access is a full pack.
// Integer packs (int32) support add/sub/min/max/compare/select plus the
// memory operations; division, sqrt, fma, abs and copysign are
// floating-point only and rejected at compile time.
//
// Packs and masks are immutable values in kernel code: safe to copy across
// threads, no operation touches global state. Mixing widths or backends in
// one expression is a compile error, so configuration mismatches cannot
// occur at run time.

namespace lanegrid::simd {

inline constexpr int max_lane_width = 8;

struct scalar_backend {};
struct wide_backend {};

namespace detail {

template <class T>
inline constexpr bool is_lane_element =
    std::is_same_v<T, double> || std::is_same_v<T, float> ||
    std::is_same_v<T, std::int32_t>;

template <int W>
inline constexpr bool is_lane_width = (W == 1 || W == 2 || W == 4 || W == 8);

template <class T> struct int_lane;
template <> struct int_lane<double> { using type = std::int64_t; };
template <> struct int_lane<float> { using type = std::int32_t; };
template <> struct int_lane<std::int32_t> { using type = std::int32_t; };
template <class T> using int_lane_t = typename int_lane<T>::type;

template <class T>
constexpr T sign_bit_of() {
  using U = std::make_unsigned_t<T>;
  return static_cast<T>(U{1} << (sizeof(T) * 8 - 1));
}

// Compiler vector type of W lanes; a single lane degenerates to the plain
// element so W == 1 instantiations stay valid everywhere.
template <class T, int W>
struct vec_of {
  typedef T type __attribute__((vector_size(W * sizeof(T))));
};
template <class T>
struct vec_of<T, 1> {
  using type = T;
};
template <class T, int W> using vec_t = typename vec_of<T, W>::type;

// Reference min/max semantics; both backends implement exactly this rule.
template <class T>
constexpr T min_rule(T a, T b) {
  if constexpr (std::is_floating_point_v<T>) {
    if (b != b) return a;
    if (a != a) return b;
  }
  return b < a ? b : a;
}

template <class T>
constexpr T max_rule(T a, T b) {
  if constexpr (std::is_floating_point_v<T>) {
    if (b != b) return a;
    if (a != a) return b;
  }
  return a < b ? b : a;
}

[[noreturn]] inline void throw_bounds(std::size_t offset, int width,
                                      std::size_t size) {
  throw std::out_of_range("lane_pack memory access out of range: offset " +
                          std::to_string(offset) + " width " +
                          std::to_string(width) + " buffer size " +
                          std::to_string(size));
}

}  // namespace detail

template <class T, int W, class Backend>
class lane_pack;

// ---------------------------------------------------------------------------
// lane_mask
// ---------------------------------------------------------------------------

template <class T, int W, class Backend>
class lane_mask {
  static_assert(detail::is_lane_element<T> && detail::is_lane_width<W>);
  static_assert(std::is_same_v<Backend, scalar_backend> ||
                std::is_same_v<Backend, wide_backend>);

  static constexpr bool kWideVec =
      std::is_same_v<Backend, wide_backend> && W > 1;
  using ilane = detail::int_lane_t<T>;
  using ivec = detail::vec_t<ilane, W>;
  using storage = std::conditional_t<kWideVec, ivec, std::array<bool, W>>;

  storage bits_;

  struct raw_tag {};
  lane_mask(raw_tag, storage s) : bits_(s) {}

  template <class, int, class> friend class lane_pack;

 public:
  using value_type = bool;
  using backend_type = Backend;
  static constexpr int width = W;

  lane_mask() : lane_mask(false) {}

  explicit lane_mask(bool value) {
    if constexpr (kWideVec) {
      bits_ = value ? ~ivec{} : ivec{};
    } else {
      bits_.fill(value);
    }
  }

  static lane_mask from_bools(std::span<const bool> b) {
    if (b.size() != static_cast<std::size_t>(W))
      throw std::invalid_argument("lane_mask::from_bools size mismatch");
    lane_mask m(false);
    for (int i = 0; i < W; ++i) m.set(i, b[i]);
    return m;
  }

  bool operator[](int i) const {
    if constexpr (kWideVec) {
      return bits_[i] != 0;
    } else {
      return bits_[static_cast<std::size_t>(i)];
    }
  }

  void set(int i, bool v) {
    if constexpr (kWideVec) {
      bits_[i] = v ? ~ilane{0} : ilane{0};
    } else {
      bits_[static_cast<std::size_t>(i)] = v;
    }
  }

  friend lane_mask operator&(lane_mask a, lane_mask b) {
    if constexpr (kWideVec) {
      return lane_mask(raw_tag{}, a.bits_ & b.bits_);
    } else {
      lane_mask r(false);
      for (int i = 0; i < W; ++i) r.set(i, a[i] && b[i]);
      return r;
    }
  }

  friend lane_mask operator|(lane_mask a, lane_mask b) {
    if constexpr (kWideVec) {
      return lane_mask(raw_tag{}, a.bits_ | b.bits_);
    } else {
      lane_mask r(false);
      for (int i = 0; i < W; ++i) r.set(i, a[i] || b[i]);
      return r;
    }
  }

  friend lane_mask operator^(lane_mask a, lane_mask b) {
    if constexpr (kWideVec) {
      return lane_mask(raw_tag{}, a.bits_ ^ b.bits_);
    } else {
      lane_mask r(false);
      for (int i = 0; i < W; ++i) r.set(i, a[i] != b[i]);
      return r;
    }
  }

  friend lane_mask operator~(lane_mask a) {
    if constexpr (kWideVec) {
      return lane_mask(raw_tag{}, ~a.bits_);
    } else {
      lane_mask r(false);
      for (int i = 0; i < W; ++i) r.set(i, !a[i]);
      return r;
    }
  }
};

template <class T, int W, class B>
bool all_of(const lane_mask<T, W, B>& m) {
  for (int i = 0; i < W; ++i)
    if (!m[i]) return false;
  return true;
}

template <class T, int W, class B>
bool any_of(const lane_mask<T, W, B>& m) {
  for (int i = 0; i < W; ++i)
    if (m[i]) return true;
  return false;
}

template <class T, int W, class B>
bool none_of(const lane_mask<T, W, B>& m) {
  return !any_of(m);
}

template <class T, int W, class B>
int count_true(const lane_mask<T, W, B>& m) {
  int n = 0;
  for (int i = 0; i < W; ++i) n += m[i] ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------
// lane_pack
// ---------------------------------------------------------------------------

template <class T, int W, class Backend>
class lane_pack {
  static_assert(detail::is_lane_element<T> && detail::is_lane_width<W>);
  static_assert(std::is_same_v<Backend, scalar_backend> ||
                std::is_same_v<Backend, wide_backend>);

  static constexpr bool kWide = std::is_same_v<Backend, wide_backend>;
  static constexpr bool kWideVec = kWide && W > 1;
  static constexpr bool kFloat = std::is_floating_point_v<T>;

  using ilane = detail::int_lane_t<T>;
  using vec = detail::vec_t<T, W>;
  using ivec = detail::vec_t<ilane, W>;
  using storage = std::conditional_t<kWide, vec, std::array<T, W>>;

  storage v_;

  struct raw_tag {};
  lane_pack(raw_tag, storage s) : v_(s) {}

 public:
  using value_type = T;
  using backend_type = Backend;
  using mask_type = lane_mask<T, W, Backend>;
  static constexpr int width = W;

  lane_pack() : lane_pack(T{}) {}

  /// Broadcast: every lane equals x bit-exactly.
  explicit lane_pack(T x) {
    if constexpr (kWideVec) {
      for (int i = 0; i < W; ++i) v_[i] = x;
    } else if constexpr (kWide) {
      v_ = x;
    } else {
      v_.fill(x);
    }
  }

  /// Lanes [start, start+1, ..., start+W-1].
  static lane_pack iota(T start) {
    lane_pack p(start);
    for (int i = 0; i < W; ++i) p.set(i, static_cast<T>(start + T(i)));
    return p;
  }

  T operator[](int i) const {
    if constexpr (kWideVec) {
      return v_[i];
    } else if constexpr (kWide) {
      return v_;
    } else {
      return v_[static_cast<std::size_t>(i)];
    }
  }

  void set(int i, T x) {
    if constexpr (kWideVec) {
      v_[i] = x;
    } else if constexpr (kWide) {
      v_ = x;
    } else {
      v_[static_cast<std::size_t>(i)] = x;
    }
  }

  // ---- memory ---------------------------------------------------------------

  /// Bounds-checked load of W consecutive elements.
  static lane_pack load(std::span<const T> buf, std::size_t offset) {
    if (offset + W > buf.size()) detail::throw_bounds(offset, W, buf.size());
    return load_unchecked(buf.data() + offset);
  }

  /// Bounds-checked store of W consecutive elements; no other element of
  /// the buffer is modified.
  void store(std::span<T> buf, std::size_t offset) const {
    if (offset + W > buf.size()) detail::throw_bounds(offset, W, buf.size());
    store_unchecked(buf.data() + offset);
  }

  /// Unchecked load; caller guarantees W readable elements at p.
  static lane_pack load_unchecked(const T* p) {
    lane_pack r;
    std::memcpy(&r.v_, p, W * sizeof(T));
    return r;
  }

  void store_unchecked(T* p) const { std::memcpy(p, &v_, W * sizeof(T)); }

  // ---- elementwise arithmetic -------------------------------------------------

  friend lane_pack operator+(lane_pack a, lane_pack b) {
    if constexpr (kWide) {
      return lane_pack(raw_tag{}, a.v_ + b.v_);
    } else {
      for (int i = 0; i < W; ++i) a.v_[i] = a.v_[i] + b.v_[i];
      return a;
    }
  }

  friend lane_pack operator-(lane_pack a, lane_pack b) {
    if constexpr (kWide) {
      return lane_pack(raw_tag{}, a.v_ - b.v_);
    } else {
      for (int i = 0; i < W; ++i) a.v_[i] = a.v_[i] - b.v_[i];
      return a;
    }
  }

  friend lane_pack operator*(lane_pack a, lane_pack b) {
    if constexpr (kWide) {
      return lane_pack(raw_tag{}, a.v_ * b.v_);
    } else {
      for (int i = 0; i < W; ++i) a.v_[i] = a.v_[i] * b.v_[i];
      return a;
    }
  }

  friend lane_pack operator/(lane_pack a, lane_pack b) {
    static_assert(kFloat, "lane division is floating-point only");
    if constexpr (kWide) {
      return lane_pack(raw_tag{}, a.v_ / b.v_);
    } else {
      for (int i = 0; i < W; ++i) a.v_[i] = a.v_[i] / b.v_[i];
      return a;
    }
  }

  friend lane_pack operator-(lane_pack a) {
    if constexpr (kWide) {
      return lane_pack(raw_tag{}, -a.v_);
    } else {
      for (int i = 0; i < W; ++i) a.v_[i] = -a.v_[i];
      return a;
    }
  }

  lane_pack& operator+=(lane_pack o) { return *this = *this + o; }
  lane_pack& operator-=(lane_pack o) { return *this = *this - o; }
  lane_pack& operator*=(lane_pack o) { return *this = *this * o; }
  lane_pack& operator/=(lane_pack o) { return *this = *this / o; }

  // ---- comparisons ------------------------------------------------------------

  friend mask_type operator<(lane_pack a, lane_pack b) {
    if constexpr (kWideVec) {
      return wrap_mask(a.v_ < b.v_);
    } else {
      mask_type m(false);
      for (int i = 0; i < W; ++i) m.set(i, a[i] < b[i]);
      return m;
    }
  }

  friend mask_type operator<=(lane_pack a, lane_pack b) {
    if constexpr (kWideVec) {
      return wrap_mask(a.v_ <= b.v_);
    } else {
      mask_type m(false);
      for (int i = 0; i < W; ++i) m.set(i, a[i] <= b[i]);
      return m;
    }
  }

  friend mask_type operator>(lane_pack a, lane_pack b) {
    if constexpr (kWideVec) {
      return wrap_mask(a.v_ > b.v_);
    } else {
      mask_type m(false);
      for (int i = 0; i < W; ++i) m.set(i, a[i] > b[i]);
      return m;
    }
  }

  friend mask_type operator>=(lane_pack a, lane_pack b) {
    if constexpr (kWideVec) {
      return wrap_mask(a.v_ >= b.v_);
    } else {
      mask_type m(false);
      for (int i = 0; i < W; ++i) m.set(i, a[i] >= b[i]);
      return m;
    }
  }

  friend mask_type operator==(lane_pack a, lane_pack b) {
    if constexpr (kWideVec) {
      return wrap_mask(a.v_ == b.v_);
    } else {
      mask_type m(false);
      for (int i = 0; i < W; ++i) m.set(i, a[i] == b[i]);
      return m;
    }
  }

  friend lane_pack select(const mask_type& m, const lane_pack& a,
                          const lane_pack& b) {
    return select_impl(m, a, b);
  }

  friend lane_pack min(lane_pack a, lane_pack b) {
    if constexpr (kWideVec && kFloat) {
      // NaN rule: if b is NaN take a, if a is NaN take b, else the smaller.
      vec smaller = (b.v_ < a.v_) ? b.v_ : a.v_;
      vec fix_a = (a.v_ != a.v_) ? b.v_ : smaller;
      return lane_pack(raw_tag{}, (b.v_ != b.v_) ? a.v_ : fix_a);
    } else if constexpr (kWideVec) {
      return lane_pack(raw_tag{}, (b.v_ < a.v_) ? b.v_ : a.v_);
    } else {
      lane_pack r;
      for (int i = 0; i < W; ++i) r.set(i, detail::min_rule(a[i], b[i]));
      return r;
    }
  }

  friend lane_pack max(lane_pack a, lane_pack b) {
    if constexpr (kWideVec && kFloat) {
      vec larger = (a.v_ < b.v_) ? b.v_ : a.v_;
      vec fix_a = (a.v_ != a.v_) ? b.v_ : larger;
      return lane_pack(raw_tag{}, (b.v_ != b.v_) ? a.v_ : fix_a);
    } else if constexpr (kWideVec) {
      return lane_pack(raw_tag{}, (a.v_ < b.v_) ? b.v_ : a.v_);
    } else {
      lane_pack r;
      for (int i = 0; i < W; ++i) r.set(i, detail::max_rule(a[i], b[i]));
      return r;
    }
  }

  friend lane_pack abs(lane_pack a) {
    static_assert(kFloat, "abs is floating-point only");
    if constexpr (kWideVec) {
      constexpr ilane sign = detail::sign_bit_of<ilane>();
      ivec keep = ivec{} + static_cast<ilane>(~sign);
      return lane_pack(raw_tag{},
                       std::bit_cast<vec>(std::bit_cast<ivec>(a.v_) & keep));
    } else {
      lane_pack r;
      for (int i = 0; i < W; ++i) r.set(i, std::fabs(a[i]));
      return r;
    }
  }

  friend lane_pack copysign(lane_pack mag, lane_pack sgn) {
    static_assert(kFloat, "copysign is floating-point only");
    if constexpr (kWideVec) {
      constexpr ilane sign = detail::sign_bit_of<ilane>();
      ivec sign_v = ivec{} + sign;
      ivec m = std::bit_cast<ivec>(mag.v_) & ~sign_v;
      ivec s = std::bit_cast<ivec>(sgn.v_) & sign_v;
      return lane_pack(raw_tag{}, std::bit_cast<vec>(m | s));
    } else {
      lane_pack r;
      for (int i = 0; i < W; ++i) r.set(i, std::copysign(mag[i], sgn[i]));
      return r;
    }
  }

  friend lane_pack sqrt(lane_pack a) {
    static_assert(kFloat, "sqrt is floating-point only");
    if constexpr (kWideVec) {
      return lane_pack(raw_tag{}, wide_sqrt(a.v_));
    } else {
      lane_pack r;
      for (int i = 0; i < W; ++i) r.set(i, std::sqrt(a[i]));
      return r;
    }
  }

  /// Fused multiply-add: lane i = fl(a[i]*b[i] + c[i]) with a single
  /// rounding, matching std::fma.
  friend lane_pack fma(lane_pack a, lane_pack b, lane_pack c) {
    static_assert(kFloat, "fma is floating-point only");
    if constexpr (kWideVec) {
      return lane_pack(raw_tag{}, wide_fma(a.v_, b.v_, c.v_));
    } else {
      lane_pack r;
      for (int i = 0; i < W; ++i) r.set(i, std::fma(a[i], b[i], c[i]));
      return r;
    }
  }

  // ---- reductions ---------------------------------------------------------------

  /// Strict left-to-right lane sum: ((lane0 + lane1) + lane2) + ...
  friend T reduce_sum(lane_pack a) {
    T acc = a[0];
    for (int i = 1; i < W; ++i) acc = acc + a[i];
    return acc;
  }

  friend T reduce_min(lane_pack a) {
    T acc = a[0];
    for (int i = 1; i < W; ++i) acc = detail::min_rule(acc, a[i]);
    return acc;
  }

  friend T reduce_max(lane_pack a) {
    T acc = a[0];
    for (int i = 1; i < W; ++i) acc = detail::max_rule(acc, a[i]);
    return acc;
  }

 private:
  static mask_type wrap_mask(ivec raw) {
    return mask_type(typename mask_type::raw_tag{}, raw);
  }

  static lane_pack select_impl(const mask_type& m, const lane_pack& a,
                               const lane_pack& b) {
    if constexpr (kWideVec) {
      return lane_pack(raw_tag{}, m.bits_ ? a.v_ : b.v_);
    } else {
      lane_pack r;
      for (int i = 0; i < W; ++i) r.set(i, m[i] ? a[i] : b[i]);
      return r;
    }
  }

  static vec wide_sqrt(vec x) {
#if defined(__SSE2__)
    if constexpr (std::is_same_v<T, double> && W == 2) {
      return std::bit_cast<vec>(_mm_sqrt_pd(std::bit_cast<__m128d>(x)));
    }
#endif
#if defined(__AVX__)
    if constexpr (std::is_same_v<T, double> && W == 4) {
      return std::bit_cast<vec>(_mm256_sqrt_pd(std::bit_cast<__m256d>(x)));
    }
#endif
#if defined(__AVX512F__)
    if constexpr (std::is_same_v<T, double> && W == 8) {
      return std::bit_cast<vec>(_mm512_sqrt_pd(std::bit_cast<__m512d>(x)));
    }
#elif defined(__AVX__)
    if constexpr (std::is_same_v<T, double> && W == 8) {
      struct halves { __m256d lo, hi; };
      auto h = std::bit_cast<halves>(x);
      h.lo = _mm256_sqrt_pd(h.lo);
      h.hi = _mm256_sqrt_pd(h.hi);
      return std::bit_cast<vec>(h);
    }
#endif
    vec r = x;
    for (int i = 0; i < W; ++i) r[i] = std::sqrt(x[i]);
    return r;
  }

  static vec wide_fma(vec a, vec b, vec c) {
#if defined(__FMA__)
    if constexpr (std::is_same_v<T, double> && W == 2) {
      return std::bit_cast<vec>(_mm_fmadd_pd(std::bit_cast<__m128d>(a),
                                             std::bit_cast<__m128d>(b),
                                             std::bit_cast<__m128d>(c)));
    }
    if constexpr (std::is_same_v<T, double> && W == 4) {
      return std::bit_cast<vec>(_mm256_fmadd_pd(std::bit_cast<__m256d>(a),
                                                std::bit_cast<__m256d>(b),
                                                std::bit_cast<__m256d>(c)));
    }
#endif
#if defined(__AVX512F__)
    if constexpr (std::is_same_v<T, double> && W == 8) {
      return std::bit_cast<vec>(_mm512_fmadd_pd(std::bit_cast<__m512d>(a),
                                                std::bit_cast<__m512d>(b),
                                                std::bit_cast<__m512d>(c)));
    }
#elif defined(__FMA__)
    if constexpr (std::is_same_v<T, double> && W == 8) {
      struct halves { __m256d x, y; };
      auto ha = std::bit_cast<halves>(a);
      auto hb = std::bit_cast<halves>(b);
      auto hc = std::bit_cast<halves>(c);
      ha.x = _mm256_fmadd_pd(ha.x, hb.x, hc.x);
      ha.y = _mm256_fmadd_pd(ha.y, hb.y, hc.y);
      return std::bit_cast<vec>(ha);
    }
#endif
    vec r = a;
    for (int i = 0; i < W; ++i) r[i] = std::fma(a[i], b[i], c[i]);
    return r;
  }
};

/// Broadcast helper matching the interface's named operation.
template <class Pack>
Pack splat(typename Pack::value_type x) {
  return Pack(x);
}

}  // namespace lanegrid::simd
