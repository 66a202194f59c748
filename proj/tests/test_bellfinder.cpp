#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "xbell/bellfinder.hpp"

using namespace xbell;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

SourceConfig degenerate() { return SourceConfig{}; }

SourceConfig off_degenerate(double fraction = 0.6) {
  SourceConfig c;
  c.signal_fraction = fraction;
  return c;
}

std::size_t count_state(const std::vector<BellPoint>& pts, BellState s) {
  return std::size_t(std::count_if(pts.begin(), pts.end(), [&](const BellPoint& p) { return p.state == s; }));
}

// Brute-force reference for where |C| = |D| can sit at degeneracy: C and D
// reduce to cos(theta_s) and cos(theta_i) with equal weights.
bool equal_cosines(const BellPoint& p) {
  return std::abs(std::abs(std::cos(p.theta_s)) - std::abs(std::cos(p.theta_i))) <= 1e-9;
}

}  // namespace

TEST_CASE("validate") {
  CHECK_NOTHROW(validate(degenerate()));
  SourceConfig c;
  c.theta_min = 0.0;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = {};
  c.theta_max = 4.0;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = {};
  c.theta_min = 2.0;
  c.theta_max = 1.0;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = {};
  c.samples = 1;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = {};
  c.signal_fraction = 1.0;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = {};
  c.miller = {0, 0, 0};
  CHECK_THROWS_AS(validate(c), InvalidInput);
}

TEST_CASE("degenerate scan structure") {
  const auto curves = scan(degenerate());
  CHECK(curves[0].branch == Branch::Plus);
  CHECK(curves[1].branch == Branch::Minus);
  for (const auto& curve : curves) {
    REQUIRE(curve.samples.size() == 2000);
    CHECK(curve.samples.front().theta_p == 0.01);
    CHECK(curve.samples.back().theta_p == kPi - 0.01);
    for (std::size_t j = 1; j < curve.samples.size(); ++j)
      CHECK(curve.samples[j].theta_p > curve.samples[j - 1].theta_p);
    for (const auto& s : curve.samples) {
      if (!s.feasible) {
        CHECK(s.a2 == 0.0);
        continue;
      }
      CHECK(s.a2 >= 0.0);
      CHECK(s.b2 >= 0.0);
      CHECK(s.c2 >= 0.0);
      CHECK(s.d2 >= 0.0);
      CHECK(s.amplitudes.solution.residual <= 1e-9);
    }
    // Pump grazing at the ends of the range cannot phase match.
    CHECK_FALSE(curve.samples.front().feasible);
    CHECK_FALSE(curve.samples.back().feasible);
    REQUIRE(curve.edges.size() == 2);
    CHECK(curve.edges[0].sample.theta_p == Approx(std::asin(make_model(degenerate()).kin.g /
                                                            (2.0 * make_model(degenerate()).kin.k_pump))));
    for (const auto& e : curve.edges) {
      CHECK(e.sample.feasible);
      CHECK(e.sample.amplitudes.solution.residual <= 1e-9);
      CHECK(curve.samples[e.neighbor].feasible);
    }
  }
}

TEST_CASE("two-sample scan") {
  SourceConfig c = degenerate();
  c.samples = 2;
  c.theta_min = 1.0;
  c.theta_max = 2.0;
  const auto curves = scan(c);
  for (const auto& curve : curves) {
    REQUIRE(curve.samples.size() == 2);
    CHECK(curve.samples[0].theta_p == 1.0);
    CHECK(curve.samples[1].theta_p == 2.0);
    CHECK(curve.edges.empty());
  }
}

TEST_CASE("scan with no phase-matched angle") {
  SourceConfig c = degenerate();
  c.theta_min = 0.01;
  c.theta_max = 0.1;
  CHECK_THROWS_AS(scan(c), FeasibilityError);
  CHECK_THROWS_AS(bell_table(c), FeasibilityError);
  try {
    scan(c);
  } catch (const FeasibilityError& e) {
    CHECK(std::string(e.what()).find("25 keV") != std::string::npos);
  }
}

TEST_CASE("degenerate crossings") {
  const auto curves = scan(degenerate());
  for (const auto& curve : curves) {
    // three interior crossings plus both feasibility edges
    CHECK(find_crossings(curve, AmplitudePair::CD).size() == 5);
    const auto model = make_model(degenerate());
    const RefineContext ctx{model, curve.branch, pair_maximum(curve, AmplitudePair::AB)};
    for (const auto& br : find_crossings(curve, AmplitudePair::AB)) CHECK_FALSE(refine_crossing(br, AmplitudePair::AB, ctx));
  }
}

TEST_CASE("curve with a constant offset has no crossings") {
  ScanCurve curve;
  for (int j = 0; j < 10; ++j) {
    ScanSample s;
    s.theta_p = 0.1 * (j + 1);
    s.feasible = true;
    s.amplitudes.a = 2.0 + 0.01 * j;
    s.amplitudes.b = 1.0;
    s.amplitudes.c = 1.0;
    s.amplitudes.d = -3.0;
    curve.samples.push_back(s);
  }
  CHECK(find_crossings(curve, AmplitudePair::AB).empty());
  CHECK(find_crossings(curve, AmplitudePair::CD).empty());
}

TEST_CASE("refine near pi/2 on the Plus branch") {
  const auto model = make_model(degenerate());
  const auto curves = scan(degenerate());
  const auto& plus = curves[0];
  const RefineContext ctx{model, Branch::Plus, pair_maximum(plus, AmplitudePair::CD)};
  std::optional<BellPoint> found;
  for (const auto& br : find_crossings(plus, AmplitudePair::CD))
    if (br.lo.theta_p < kPi / 2 && br.hi.theta_p > kPi / 2) found = refine_crossing(br, AmplitudePair::CD, ctx);
  REQUIRE(found);
  CHECK(found->state == BellState::PsiMinus);
  CHECK(found->pump_polarization == Pol::V);
  CHECK(found->theta_p == Approx(kPi / 2).epsilon(1e-9));
  CHECK(std::abs(found->theta_s - 2.2798) <= 5e-3);
  CHECK(std::abs(found->theta_i - 0.8617) <= 5e-3);
}

TEST_CASE("refine at the low feasibility edge") {
  const auto model = make_model(degenerate());
  const auto curves = scan(degenerate());
  for (const auto& curve : curves) {
    const RefineContext ctx{model, curve.branch, pair_maximum(curve, AmplitudePair::CD)};
    const auto brackets = find_crossings(curve, AmplitudePair::CD);
    REQUIRE_FALSE(brackets.empty());
    const auto p = refine_crossing(brackets.front(), AmplitudePair::CD, ctx);
    REQUIRE(p);
    CHECK(p->state == BellState::PsiPlus);
    CHECK(std::abs(p->theta_p - 0.1208) <= 5e-3);
    CHECK(std::abs(p->theta_s + 0.1208) <= 5e-3);
    CHECK(std::abs(p->theta_i + 0.1208) <= 5e-3);
    CHECK(p->residual <= 1e-9);
  }
}

TEST_CASE("crossing where both amplitudes vanish is rejected") {
  const auto model = make_model(degenerate());
  ScanSample lo, hi;
  lo.feasible = hi.feasible = true;
  lo.theta_p = 1.0;
  hi.theta_p = 1.1;
  hi.amplitudes.a = 1.0;
  hi.amplitudes.b = 0.5;
  const RefineContext ctx{model, Branch::Plus, 1.0};
  CHECK_FALSE(refine_crossing({lo, hi}, AmplitudePair::AB, ctx));
}

TEST_CASE("bracket without a sign change") {
  const auto model = make_model(degenerate());
  ScanSample lo, hi;
  lo.feasible = hi.feasible = true;
  lo.theta_p = 1.0;
  hi.theta_p = 1.1;
  lo.amplitudes.a = hi.amplitudes.a = 1.0;
  lo.amplitudes.b = hi.amplitudes.b = 0.5;
  const RefineContext ctx{model, Branch::Plus, 1.0};
  CHECK_THROWS_AS(refine_crossing({lo, hi}, AmplitudePair::AB, ctx), InvalidBracket);
  lo.feasible = false;
  CHECK_THROWS_AS(refine_crossing({lo, hi}, AmplitudePair::CD, ctx), InvalidBracket);
}

TEST_CASE("degenerate Bell table") {
  const auto pts = bell_table(degenerate());
  REQUIRE(pts.size() == 5);
  CHECK(count_state(pts, BellState::PsiPlus) == 4);
  CHECK(count_state(pts, BellState::PsiMinus) == 1);
  CHECK(count_state(pts, BellState::PhiPlus) + count_state(pts, BellState::PhiMinus) == 0);
  CHECK(pts[2].state == BellState::PsiMinus);
  CHECK(pts[2].theta_p == Approx(kPi / 2).epsilon(1e-10));
  for (const auto& p : pts) {
    CHECK(p.pump_polarization == Pol::V);
    CHECK(equal_cosines(p));
  }
  // (theta_p, pi - theta_p) pairs around the self-mirrored pi/2 point
  CHECK(pts[0].theta_p + pts[4].theta_p == Approx(kPi).epsilon(1e-10));
  CHECK(pts[1].theta_p + pts[3].theta_p == Approx(kPi).epsilon(1e-10));
}

TEST_CASE("off-degenerate Bell table has one point per state") {
  const auto pts = bell_table(off_degenerate());
  REQUIRE(pts.size() == 4);
  for (auto s : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus})
    CHECK(count_state(pts, s) == 1);
  for (const auto& p : pts)
    CHECK((p.pump_polarization == Pol::H) ==
          (p.state == BellState::PhiPlus || p.state == BellState::PhiMinus));
}

TEST_CASE("emitted points re-evaluated from their angles") {
  for (const auto& cfg : {degenerate(), off_degenerate(), off_degenerate(0.4), off_degenerate(0.7)}) {
    const auto model = make_model(cfg);
    const auto curves = scan(cfg);
    for (const auto& p : bell_table(cfg)) {
      const Vec2 mismatch = phase_mismatch(p.theta_p, p.theta_s, p.theta_i, model.kin.k_pump,
                                           model.kin.k_signal, model.kin.k_idler, model.kin.g);
      CHECK(mismatch.norm() <= 1e-9);
      PhaseMatchSolution s{p.theta_p, p.theta_s, p.theta_i, p.branch, 0.0};
      const auto amps = channel_amplitudes(s, model.w, model.kin.g);
      const auto pair = p.pump_polarization == Pol::H ? AmplitudePair::AB : AmplitudePair::CD;
      CHECK(std::abs(pair_difference(amps, pair)) <= 1e-9 * p.amplitude);
      const double pmax = std::max(pair_maximum(curves[0], pair), pair_maximum(curves[1], pair));
      CHECK(p.amplitude > kZeroAmplitudeFraction * pmax);
    }
  }
}

TEST_CASE("grid independence") {
  for (const auto& cfg : {degenerate(), off_degenerate()}) {
    SourceConfig fine = cfg;
    fine.samples = 4000;
    const auto a = bell_table(cfg);
    const auto b = bell_table(fine);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a[j].state == b[j].state);
      CHECK(std::abs(a[j].theta_p - b[j].theta_p) <= 1e-8);
    }
  }
}

TEST_CASE("exchanging signal and idler fractions relabels the pair") {
  BellTableOptions all;
  all.keep_mirror_images = true;
  const auto p6 = bell_table(off_degenerate(0.6), all);
  const auto p4 = bell_table(off_degenerate(0.4), all);
  REQUIRE(p6.size() == 8);
  REQUIRE(p4.size() == p6.size());
  for (const auto& p : p4) {
    const bool matched = std::any_of(p6.begin(), p6.end(), [&](const BellPoint& q) {
      return q.state == p.state && std::abs(q.theta_p - p.theta_p) <= 1e-8 &&
             angle_distance(q.theta_s, p.theta_i) <= 1e-8 && angle_distance(q.theta_i, p.theta_s) <= 1e-8;
    });
    CHECK(matched);
  }
}

TEST_CASE("Plus-branch points are mirror images of Minus-branch points") {
  BellTableOptions all;
  all.keep_mirror_images = true;
  const auto pts = bell_table(off_degenerate(), all);
  for (const auto& p : pts) {
    if (p.branch != Branch::Plus) continue;
    const bool mirrored = std::any_of(pts.begin(), pts.end(), [&](const BellPoint& q) {
      return q.branch == Branch::Minus && q.state == p.state &&
             angle_distance(q.theta_p, kPi - p.theta_p) <= 1e-8 &&
             angle_distance(q.theta_s, kPi - p.theta_s) <= 1e-8 &&
             angle_distance(q.theta_i, kPi - p.theta_i) <= 1e-8;
    });
    CHECK(mirrored);
  }
}

TEST_CASE("windowed degenerate table keeps only the pi/2 point") {
  SourceConfig c = degenerate();
  c.theta_min = 1.4;
  c.theta_max = 1.8;
  const auto pts = bell_table(c);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].state == BellState::PsiMinus);
  CHECK(pts[0].theta_p == Approx(kPi / 2).epsilon(1e-10));
}

TEST_CASE("results are deterministic") {
  const auto a = bell_table(off_degenerate());
  const auto b = bell_table(off_degenerate());
  REQUIRE(a.size() == b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(a[j].theta_p == b[j].theta_p);
    CHECK(a[j].theta_s == b[j].theta_s);
    CHECK(a[j].amplitude == b[j].amplitude);
  }
}
