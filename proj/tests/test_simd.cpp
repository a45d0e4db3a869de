#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "lanegrid/simd/dispatch.hpp"
#include "lanegrid/simd/pack.hpp"

using namespace lanegrid::simd;

namespace {

// Independent reference semantics, written as plain loops over plain
// arrays. The lane_pack backends are checked against these, and against
// each other bitwise.
namespace ref {

double min_rule(double a, double b) {
  if (b != b) return a;
  if (a != a) return b;
  return b < a ? b : a;
}

double max_rule(double a, double b) {
  if (b != b) return a;
  if (a != a) return b;
  return a < b ? b : a;
}

double sum_left_to_right(const std::vector<double>& v) {
  double acc = v[0];
  for (std::size_t i = 1; i < v.size(); ++i) acc = acc + v[i];
  return acc;
}

}  // namespace ref

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// Payload-tolerant comparison for sums over packs that may hold several
// NaN lanes (NaN + NaN payload choice is not reproducible).
bool same_sum(double a, double b) {
  return same_bits(a, b) || (a != a && b != b);
}

bool same_bits_f(float a, float b) {
  return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b);
}

class value_source {
 public:
  explicit value_source(std::uint64_t seed) : eng_(seed) {}

  // Mixes ordinary magnitudes with specials: zeros of both signs,
  // infinities, NaNs with random payloads, denormals.
  double next() {
    switch (pick_(eng_)) {
      case 0:
        return uniform_(eng_);
      case 1:
        return uniform_(eng_) * 1e-300;
      case 2:
        return uniform_(eng_) * 1e300;
      case 3: {
        switch (special_(eng_)) {
          case 0: return 0.0;
          case 1: return -0.0;
          case 2: return std::numeric_limits<double>::infinity();
          case 3: return -std::numeric_limits<double>::infinity();
          default: {
            std::uint64_t payload = eng_() | 0x7ff8000000000000ull;
            return std::bit_cast<double>(payload);
          }
        }
      }
      default:
        return std::ldexp(uniform_(eng_), int(eng_() % 64) - 32);
    }
  }

  double next_finite() {
    return std::ldexp(uniform_(eng_), int(eng_() % 40) - 20);
  }

 private:
  std::mt19937_64 eng_;
  std::uniform_real_distribution<double> uniform_{-1000.0, 1000.0};
  std::uniform_int_distribution<int> pick_{0, 4};
  std::uniform_int_distribution<int> special_{0, 4};
};

template <class Pack>
Pack pack_from(const std::vector<double>& v) {
  Pack p;
  for (int i = 0; i < Pack::width; ++i) p.set(i, v[std::size_t(i)]);
  return p;
}

// When two operands of one arithmetic op are both NaN, hardware keeps the
// payload of whichever operand the code generator put first, which is not
// reproducible across code paths. Single-NaN propagation is deterministic,
// so generators cap each lane triple at one NaN.
void cap_nans_per_lane(std::vector<double>& a, std::vector<double>& b,
                       std::vector<double>& c) {
  auto isn = [](double x) { return x != x; };
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (isn(a[i]) && isn(b[i])) b[i] = 1.5;
    if ((isn(a[i]) || isn(b[i])) && isn(c[i])) c[i] = 2.5;
  }
}

// Runs one check over every (op, random input) pair for a given pack type,
// comparing against the plain-loop reference.
template <class Pack>
void check_against_reference(int rounds, std::uint64_t seed) {
  constexpr int W = Pack::width;
  value_source src(seed);
  for (int r = 0; r < rounds; ++r) {
    std::vector<double> a(W), b(W), c(W);
    for (int i = 0; i < W; ++i) {
      a[std::size_t(i)] = src.next();
      b[std::size_t(i)] = src.next();
      c[std::size_t(i)] = src.next();
    }
    cap_nans_per_lane(a, b, c);
    Pack pa = pack_from<Pack>(a), pb = pack_from<Pack>(b),
         pc = pack_from<Pack>(c);

    Pack sum = pa + pb, dif = pa - pb, prd = pa * pb, quo = pa / pb;
    Pack mn = min(pa, pb), mx = max(pa, pb), cs = copysign(pa, pb);
    Pack ng = -pa, ab = abs(pa), sq = sqrt(pa), fm = fma(pa, pb, pc);
    for (int i = 0; i < W; ++i) {
      auto ai = a[std::size_t(i)];
      auto bi = b[std::size_t(i)];
      auto ci = c[std::size_t(i)];
      REQUIRE(same_bits(sum[i], ai + bi));
      REQUIRE(same_bits(dif[i], ai - bi));
      REQUIRE(same_bits(prd[i], ai * bi));
      REQUIRE(same_bits(quo[i], ai / bi));
      REQUIRE(same_bits(mn[i], ref::min_rule(ai, bi)));
      REQUIRE(same_bits(mx[i], ref::max_rule(ai, bi)));
      REQUIRE(same_bits(cs[i], std::copysign(ai, bi)));
      REQUIRE(same_bits(ng[i], -ai));
      REQUIRE(same_bits(ab[i], std::fabs(ai)));
      REQUIRE(same_bits(sq[i], std::sqrt(ai)));
      REQUIRE(same_bits(fm[i], std::fma(ai, bi, ci)));
    }

    auto lt = pa < pb;
    auto le = pa <= pb;
    auto gt = pa > pb;
    auto ge = pa >= pb;
    auto eq = pa == pb;
    for (int i = 0; i < W; ++i) {
      auto ai = a[std::size_t(i)];
      auto bi = b[std::size_t(i)];
      REQUIRE(lt[i] == (ai < bi));
      REQUIRE(le[i] == (ai <= bi));
      REQUIRE(gt[i] == (ai > bi));
      REQUIRE(ge[i] == (ai >= bi));
      REQUIRE(eq[i] == (ai == bi));
    }

    Pack sel = select(lt, pa, pb);
    for (int i = 0; i < W; ++i) {
      auto want = (a[std::size_t(i)] < b[std::size_t(i)]) ? a[std::size_t(i)]
                                                          : b[std::size_t(i)];
      REQUIRE(same_bits(sel[i], want));
    }

    REQUIRE(same_sum(reduce_sum(pa), ref::sum_left_to_right(a)));
    double mn_ref = a[0], mx_ref = a[0];
    for (int i = 1; i < W; ++i) {
      mn_ref = ref::min_rule(mn_ref, a[std::size_t(i)]);
      mx_ref = ref::max_rule(mx_ref, a[std::size_t(i)]);
    }
    REQUIRE(same_bits(reduce_min(pa), mn_ref));
    REQUIRE(same_bits(reduce_max(pa), mx_ref));
  }
}

// Bitwise agreement of the wide backend with the scalar backend on the
// same inputs, for every operation.
template <int W>
void check_backend_equivalence(int rounds, std::uint64_t seed) {
  using WP = lane_pack<double, W, wide_backend>;
  using SP = lane_pack<double, W, scalar_backend>;
  value_source src(seed);
  for (int r = 0; r < rounds; ++r) {
    std::vector<double> a(W), b(W), c(W);
    for (int i = 0; i < W; ++i) {
      a[std::size_t(i)] = src.next();
      b[std::size_t(i)] = src.next();
      c[std::size_t(i)] = src.next();
    }
    cap_nans_per_lane(a, b, c);
    WP wa = pack_from<WP>(a), wb = pack_from<WP>(b), wc = pack_from<WP>(c);
    SP sa = pack_from<SP>(a), sb = pack_from<SP>(b), sc = pack_from<SP>(c);

    auto lanes_equal = [&](WP w, SP s) {
      for (int i = 0; i < W; ++i)
        if (!same_bits(w[i], s[i])) return false;
      return true;
    };

    REQUIRE(lanes_equal(wa + wb, sa + sb));
    REQUIRE(lanes_equal(wa - wb, sa - sb));
    REQUIRE(lanes_equal(wa * wb, sa * sb));
    REQUIRE(lanes_equal(wa / wb, sa / sb));
    REQUIRE(lanes_equal(min(wa, wb), min(sa, sb)));
    REQUIRE(lanes_equal(max(wa, wb), max(sa, sb)));
    REQUIRE(lanes_equal(copysign(wa, wb), copysign(sa, sb)));
    REQUIRE(lanes_equal(-wa, -sa));
    REQUIRE(lanes_equal(abs(wa), abs(sa)));
    REQUIRE(lanes_equal(sqrt(wa), sqrt(sa)));
    REQUIRE(lanes_equal(fma(wa, wb, wc), fma(sa, sb, sc)));
    REQUIRE(lanes_equal(select(wa < wb, wa, wb), select(sa < sb, sa, sb)));
    REQUIRE(same_sum(reduce_sum(wa), reduce_sum(sa)));
    REQUIRE(same_bits(reduce_min(wa), reduce_min(sa)));
    REQUIRE(same_bits(reduce_max(wa), reduce_max(sa)));
    for (int i = 0; i < W; ++i) {
      REQUIRE((wa < wb)[i] == (sa < sb)[i]);
      REQUIRE((wa <= wb)[i] == (sa <= sb)[i]);
      REQUIRE((wa > wb)[i] == (sa > sb)[i]);
      REQUIRE((wa >= wb)[i] == (sa >= sb)[i]);
      REQUIRE((wa == wb)[i] == (sa == sb)[i]);
    }
  }
}

}  // namespace

using wide4 = lane_pack<double, 4, wide_backend>;
using wide2 = lane_pack<double, 2, wide_backend>;
using scal4 = lane_pack<double, 4, scalar_backend>;

TEST_CASE("splat broadcasts bit-exactly") {
  wide4 p(3.0);
  for (int i = 0; i < 4; ++i) CHECK(same_bits(p[i], 3.0));

  lane_pack<double, 1, wide_backend> one(0.0);
  CHECK(same_bits(one[0], 0.0));

  double payload_nan = std::bit_cast<double>(0x7ff800000abcdef1ull);
  wide4 pn(payload_nan);
  for (int i = 0; i < 4; ++i) CHECK(same_bits(pn[i], payload_nan));
}

TEST_CASE("load/store definitions and bounds") {
  std::vector<double> buf = {1, 2, 3, 4, 5};
  auto p = wide4::load(buf, 1);
  CHECK(p[0] == 2.0);
  CHECK(p[3] == 5.0);

  auto s = lane_pack<double, 1, scalar_backend>::load(buf, 0);
  CHECK(s[0] == 1.0);

  std::vector<double> out(4, 0.0);
  wide2 seven(7.0);
  seven.store(out, 1);
  CHECK(out == std::vector<double>{0, 7, 7, 0});

  CHECK_THROWS_AS((void)wide4::load(buf, 2), std::out_of_range);
  CHECK_THROWS_AS(wide4(1.0).store(std::span<double>(out), 1),
                  std::out_of_range);

  // store(load(b,k), b, k) leaves b unchanged
  auto before = buf;
  wide4::load(buf, 1).store(buf, 1);
  CHECK(buf == before);
}

TEST_CASE("randomized store/load round-trip is bit-exact incl. NaN payloads") {
  value_source src(99);
  std::vector<double> buf(64);
  for (auto& x : buf) x = src.next();
  auto before = buf;
  for (std::size_t off = 0; off + 8 <= buf.size(); off += 3) {
    auto p = lane_pack<double, 8, wide_backend>::load(buf, off);
    p.store(buf, off);
  }
  for (std::size_t i = 0; i < buf.size(); ++i)
    CHECK(same_bits(buf[i], before[i]));
}

TEST_CASE("elementwise examples") {
  std::vector<double> av = {1, 2, 3, 4};
  auto a = pack_from<wide4>(av);
  auto doubled = a * wide4(2.0);
  for (int i = 0; i < 4; ++i) CHECK(doubled[i] == 2.0 * av[std::size_t(i)]);

  auto same = a + wide4(0.0);
  for (int i = 0; i < 4; ++i) CHECK(same_bits(same[i], av[std::size_t(i)]));
}

TEST_CASE("unary examples") {
  std::vector<double> sq = {4, 9, 16, 25};
  auto r = sqrt(pack_from<wide4>(sq));
  CHECK(r[0] == 2.0);
  CHECK(r[1] == 3.0);
  CHECK(r[2] == 4.0);
  CHECK(r[3] == 5.0);

  value_source src(7);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> v(4);
    for (auto& x : v) x = src.next();
    auto p = pack_from<wide4>(v);
    auto back = -(-p);
    for (int i = 0; i < 4; ++i) CHECK(same_bits(back[i], v[std::size_t(i)]));
  }

  // abs(x) == select(x < 0, -x, x) for finite nonzero x
  for (int round = 0; round < 200; ++round) {
    std::vector<double> v(4);
    for (auto& x : v) {
      do {
        x = src.next_finite();
      } while (x == 0.0);
    }
    auto p = pack_from<wide4>(v);
    auto via_select = select(p < wide4(0.0), -p, p);
    auto via_abs = abs(p);
    for (int i = 0; i < 4; ++i) CHECK(same_bits(via_abs[i], via_select[i]));
  }
}

TEST_CASE("fma examples") {
  std::vector<double> a = {1, 2}, b = {3, 4}, c = {5, 6};
  auto r = fma(pack_from<wide2>(a), pack_from<wide2>(b), pack_from<wide2>(c));
  CHECK(r[0] == 8.0);
  CHECK(r[1] == 14.0);

  // fma(a, b, 0) vs mul: both round the product once, so they agree except
  // possibly on the sign of zero.
  value_source src(13);
  for (int round = 0; round < 500; ++round) {
    std::vector<double> av(2), bv(2);
    for (auto& x : av) x = src.next_finite();
    for (auto& x : bv) x = src.next_finite();
    auto fa = fma(pack_from<wide2>(av), pack_from<wide2>(bv), wide2(0.0));
    auto mu = pack_from<wide2>(av) * pack_from<wide2>(bv);
    for (int i = 0; i < 2; ++i) {
      if (mu[i] == 0.0) {
        CHECK(fa[i] == 0.0);
      } else {
        CHECK(same_bits(fa[i], mu[i]));
      }
    }
  }
}

TEST_CASE("comparisons with NaN are false") {
  double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> av = {nan, 1.0, nan, 3.0};
  std::vector<double> bv = {1.0, nan, nan, 3.0};
  auto a = pack_from<wide4>(av), b = pack_from<wide4>(bv);
  CHECK(!any_of(a < b));
  CHECK((a <= b)[3]);
  CHECK((a == b)[3]);
  CHECK(count_true(a == b) == 1);

  std::vector<double> cv = {1, 5, 3, 3};
  auto lt = pack_from<wide4>(cv) < wide4(3.0);
  CHECK(lt[0]);
  CHECK(!lt[1]);
  CHECK(!lt[2]);
  CHECK(!lt[3]);
}

TEST_CASE("select identities") {
  value_source src(21);
  std::vector<double> av(4), bv(4);
  for (auto& x : av) x = src.next_finite();
  for (auto& x : bv) x = src.next_finite();
  auto a = pack_from<wide4>(av), b = pack_from<wide4>(bv);

  auto all_true = lane_mask<double, 4, wide_backend>(true);
  auto r = select(all_true, a, b);
  for (int i = 0; i < 4; ++i) CHECK(same_bits(r[i], av[std::size_t(i)]));

  std::array<bool, 4> bits = {true, false, true, false};
  auto m = lane_mask<double, 4, wide_backend>::from_bools(bits);
  auto same = select(m, a, a);
  for (int i = 0; i < 4; ++i) CHECK(same_bits(same[i], av[std::size_t(i)]));
}

TEST_CASE("select(lt, a, b) equals min for NaN-free inputs") {
  value_source src(22);
  for (int round = 0; round < 300; ++round) {
    std::vector<double> av(8), bv(8);
    for (auto& x : av) x = src.next_finite();
    for (auto& x : bv) x = src.next_finite();
    using P = lane_pack<double, 8, wide_backend>;
    auto a = pack_from<P>(av), b = pack_from<P>(bv);
    auto via_select = select(a < b, a, b);
    auto via_min = min(a, b);
    for (int i = 0; i < 8; ++i)
      CHECK(same_bits(via_select[i], via_min[i]));
  }
}

TEST_CASE("reductions") {
  std::vector<double> v = {1, 2, 3, 4};
  CHECK(reduce_sum(pack_from<wide4>(v)) == 10.0);
  CHECK(reduce_min(wide4(5.5)) == 5.5);
  CHECK(reduce_max(wide4(-2.0)) == -2.0);

  // cancellation-heavy sum must match the sequential loop exactly
  std::vector<double> heavy = {1e16, 1.0, -1e16, 1.0};
  CHECK(same_bits(reduce_sum(pack_from<wide4>(heavy)),
                  ref::sum_left_to_right(heavy)));
  CHECK(same_bits(reduce_sum(pack_from<scal4>(heavy)),
                  ref::sum_left_to_right(heavy)));
}

TEST_CASE("mask queries") {
  std::array<bool, 4> bits = {true, false, true, false};
  auto m = lane_mask<double, 4, wide_backend>::from_bools(bits);
  CHECK(count_true(m) == 2);
  CHECK(!all_of(m));
  CHECK(any_of(m));
  CHECK(!none_of(m));

  auto t = lane_mask<double, 4, scalar_backend>(true);
  auto f = lane_mask<double, 4, scalar_backend>(false);
  CHECK(all_of(t));
  CHECK(none_of(f));

  value_source src(31);
  for (int round = 0; round < 100; ++round) {
    std::array<bool, 8> rb{};
    for (auto& x : rb) x = (src.next_finite() > 0);
    auto rm = lane_mask<double, 8, wide_backend>::from_bools(rb);
    CHECK(any_of(rm) == !none_of(rm));
  }
}

TEST_CASE("scalar backend matches independent reference") {
  check_against_reference<lane_pack<double, 1, scalar_backend>>(500, 101);
  check_against_reference<lane_pack<double, 2, scalar_backend>>(500, 102);
  check_against_reference<lane_pack<double, 4, scalar_backend>>(500, 103);
  check_against_reference<lane_pack<double, 8, scalar_backend>>(500, 104);
}

TEST_CASE("wide backend matches independent reference") {
  check_against_reference<lane_pack<double, 1, wide_backend>>(500, 201);
  check_against_reference<lane_pack<double, 2, wide_backend>>(500, 202);
  check_against_reference<lane_pack<double, 4, wide_backend>>(500, 203);
  check_against_reference<lane_pack<double, 8, wide_backend>>(500, 204);
}

TEST_CASE("wide and scalar backends agree bitwise") {
  check_backend_equivalence<1>(2000, 301);
  check_backend_equivalence<2>(2000, 302);
  check_backend_equivalence<4>(2000, 303);
  check_backend_equivalence<8>(2000, 304);
}

TEST_CASE("width decomposition: one W=4 op equals two W=2 ops") {
  value_source src(41);
  for (int round = 0; round < 500; ++round) {
    std::vector<double> av(4), bv(4);
    for (auto& x : av) x = src.next();
    for (auto& x : bv) x = src.next();
    auto a4 = pack_from<wide4>(av), b4 = pack_from<wide4>(bv);
    auto r4 = a4 * b4 + (a4 - b4) / b4;

    for (int half = 0; half < 2; ++half) {
      std::vector<double> ah(av.begin() + 2 * half, av.begin() + 2 * half + 2);
      std::vector<double> bh(bv.begin() + 2 * half, bv.begin() + 2 * half + 2);
      auto a2 = pack_from<wide2>(ah), b2 = pack_from<wide2>(bh);
      auto r2 = a2 * b2 + (a2 - b2) / b2;
      for (int i = 0; i < 2; ++i)
        CHECK(same_bits(r4[2 * half + i], r2[i]));
    }
  }
}

TEST_CASE("float packs work") {
  using fp = lane_pack<float, 4, wide_backend>;
  fp a(2.0f), b(0.5f);
  auto r = sqrt(a * a) + b;
  for (int i = 0; i < 4; ++i) CHECK(same_bits_f(r[i], 2.5f));
  CHECK(reduce_sum(r) == 10.0f);
}

TEST_CASE("int32 packs support the integer subset") {
  using ip = lane_pack<std::int32_t, 4, wide_backend>;
  using sip = lane_pack<std::int32_t, 4, scalar_backend>;
  std::mt19937_64 eng(55);
  for (int round = 0; round < 500; ++round) {
    ip a, b;
    sip sa, sb;
    for (int i = 0; i < 4; ++i) {
      auto x = std::int32_t(eng());
      auto y = std::int32_t(eng());
      a.set(i, x);
      b.set(i, y);
      sa.set(i, x);
      sb.set(i, y);
    }
    auto s = a + b;
    auto ss = sa + sb;
    auto d = a - b;
    auto sd = sa - sb;
    auto mn = min(a, b);
    auto smn = min(sa, sb);
    auto mx = max(a, b);
    auto smx = max(sa, sb);
    auto sel = select(a < b, a, b);
    auto ssel = select(sa < sb, sa, sb);
    for (int i = 0; i < 4; ++i) {
      CHECK(s[i] == ss[i]);
      CHECK(d[i] == sd[i]);
      CHECK(mn[i] == smn[i]);
      CHECK(mx[i] == smx[i]);
      CHECK(sel[i] == ssel[i]);
      CHECK((a == b)[i] == (sa == sb)[i]);
    }
  }
}

TEST_CASE("lane mode parsing and native width") {
  CHECK(parse_lane_mode("scalar") == lane_mode::scalar);
  CHECK(parse_lane_mode("w4") == lane_mode::w4);
  CHECK_THROWS_AS(parse_lane_mode("w16"), lanegrid::config_error);

  int native = native_lane_width();
  CHECK(native >= 1);
  CHECK(native <= 8);
  CHECK((native & (native - 1)) == 0);

  auto cfg = resolve_lane_mode(lane_mode::scalar);
  CHECK(!cfg.wide);
  CHECK(cfg.width == 1);

  bool saw_w4 = false;
  visit_lane_config(resolve_lane_mode(lane_mode::w4), [&](auto tag) {
    using P = typename decltype(tag)::type;
    saw_w4 = (P::width == 4) &&
             std::is_same_v<typename P::backend_type, wide_backend>;
  });
  CHECK(saw_w4);
}
