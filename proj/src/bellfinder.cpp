#include "xbell/bellfinder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xbell {

namespace {

constexpr double kPi = std::numbers::pi;

bool feasible_at(const SourceModel& model, double theta_p) {
  return std::abs(triangle_cosine(theta_p, model.kin)) <= 1.0;
}

ScanSample make_sample(double theta_p, const std::optional<ChannelAmplitudes>& amps) {
  ScanSample s;
  s.theta_p = theta_p;
  if (!amps) return s;
  s.feasible = true;
  s.amplitudes = *amps;
  s.a2 = amps->a * amps->a;
  s.b2 = amps->b * amps->b;
  s.c2 = amps->c * amps->c;
  s.d2 = amps->d * amps->d;
  return s;
}

// Boundary between an infeasible and a feasible pump angle, returned on the
// feasible side.
double locate_edge(const SourceModel& model, double infeasible, double feasible) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (infeasible + feasible);
    if (mid == infeasible || mid == feasible) break;
    (feasible_at(model, mid) ? feasible : infeasible) = mid;
  }
  return feasible;
}

std::pair<double, double> pair_values(const ChannelAmplitudes& amps, AmplitudePair pair) {
  return pair == AmplitudePair::AB ? std::pair{amps.a, amps.b} : std::pair{amps.c, amps.d};
}

bool straddles_zero(double fa, double fb) {
  return (fa <= 0.0 && fb >= 0.0) || (fa >= 0.0 && fb <= 0.0);
}

BellState classify(AmplitudePair pair, double first, double second) {
  const bool plus = first * second > 0.0;
  if (pair == AmplitudePair::AB) return plus ? BellState::PhiPlus : BellState::PhiMinus;
  return plus ? BellState::PsiPlus : BellState::PsiMinus;
}

bool is_mirror_image(const BellPoint& p, const BellPoint& q) {
  return p.state == q.state &&
         angle_distance(p.theta_p, kPi - q.theta_p) <= kDuplicateTolerance &&
         angle_distance(p.theta_s, kPi - q.theta_s) <= kDuplicateTolerance &&
         angle_distance(p.theta_i, kPi - q.theta_i) <= kDuplicateTolerance;
}

}  // namespace

void validate(const SourceConfig& c) {
  if (!(c.pump_energy > 0.0)) throw InvalidInput("pump energy must be positive");
  if (!(c.signal_fraction > 0.0 && c.signal_fraction < 1.0))
    throw InvalidInput("signal fraction must lie in (0,1)");
  if (!(c.lattice_constant > 0.0)) throw InvalidInput("lattice constant must be positive");
  if (c.miller == Miller{0, 0, 0}) throw InvalidInput("Miller indices must not all be zero");
  if (!(c.theta_min > 0.0 && c.theta_max < kPi && c.theta_min < c.theta_max))
    throw InvalidInput("pump angle range must satisfy 0 < theta_min < theta_max < pi");
  if (c.samples < 2) throw InvalidInput("at least two samples are required");
  if (!(c.hc > 0.0)) throw InvalidInput("hc must be positive");
}

SourceModel make_model(const SourceConfig& config) {
  validate(config);
  SourceModel m;
  m.energies = split(config.pump_energy, config.signal_fraction);
  m.kin = make_kinematics(make_reflection(config.lattice_constant, config.miller), m.energies,
                          config.hc);
  m.w = frequencies(m.energies);
  return m;
}

std::optional<ChannelAmplitudes> evaluate(const SourceModel& model, double theta_p, Branch branch) {
  const auto solutions = phase_match(theta_p, model.kin);
  if (solutions.empty()) return std::nullopt;
  PhaseMatchSolution chosen = solutions.front();
  for (const auto& s : solutions)
    if (s.branch == branch) chosen = s;
  // A flat triangle is shared by both branches.
  chosen.branch = branch;
  return channel_amplitudes(chosen, model.w, model.kin.g);
}

ChannelAmplitudes evaluate_touching(const SourceModel& model, double theta_p, Branch branch) {
  const Vec2 q = momentum_transfer(theta_p, model.kin.k_pump, model.kin.g);
  const auto t = touching_solution(q, model.kin.k_signal, model.kin.k_idler, branch);
  PhaseMatchSolution s{theta_p, t.theta_s, t.theta_i, branch, 0.0};
  s.residual = phase_mismatch(theta_p, s.theta_s, s.theta_i, model.kin.k_pump,
                              model.kin.k_signal, model.kin.k_idler, model.kin.g)
                   .norm();
  return channel_amplitudes(s, model.w, model.kin.g);
}

std::array<ScanCurve, 2> scan(const SourceConfig& config) {
  const SourceModel model = make_model(config);
  const std::size_t n = config.samples;

  std::vector<double> grid(n);
  const double step = (config.theta_max - config.theta_min) / double(n - 1);
  for (std::size_t j = 0; j < n; ++j) grid[j] = config.theta_min + step * double(j);
  grid.back() = config.theta_max;

  std::array<ScanCurve, 2> curves;
  const std::array<Branch, 2> branches{Branch::Plus, Branch::Minus};
  bool any_feasible = false;
  for (std::size_t b = 0; b < 2; ++b) {
    ScanCurve& curve = curves[b];
    curve.signal_fraction = config.signal_fraction;
    curve.branch = branches[b];
    curve.samples.reserve(n);
    for (double theta : grid) {
      curve.samples.push_back(make_sample(theta, evaluate(model, theta, curve.branch)));
      any_feasible = any_feasible || curve.samples.back().feasible;
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const auto& s0 = curve.samples[j];
      const auto& s1 = curve.samples[j + 1];
      if (s0.feasible == s1.feasible) continue;
      const std::size_t neighbor = s0.feasible ? j : j + 1;
      const double theta_edge = s0.feasible ? locate_edge(model, s1.theta_p, s0.theta_p)
                                            : locate_edge(model, s0.theta_p, s1.theta_p);
      curve.edges.push_back(
          {make_sample(theta_edge, evaluate_touching(model, theta_edge, curve.branch)), neighbor});
    }
  }

  if (!any_feasible) {
    std::ostringstream msg;
    msg << "no phase-matched pump angle in [" << config.theta_min << ", " << config.theta_max
        << "] rad for pump " << config.pump_energy << " keV, signal "
        << model.energies.signal_energy << " keV, idler " << model.energies.idler_energy << " keV";
    throw FeasibilityError(msg.str());
  }
  return curves;
}

std::string_view to_string(AmplitudePair p) { return p == AmplitudePair::AB ? "AB" : "CD"; }

double pair_difference(const ChannelAmplitudes& amps, AmplitudePair pair) {
  const auto [first, second] = pair_values(amps, pair);
  return std::abs(first) - std::abs(second);
}

std::vector<Bracket> find_crossings(const ScanCurve& curve, AmplitudePair pair) {
  std::vector<Bracket> out;
  for (std::size_t j = 0; j + 1 < curve.samples.size(); ++j) {
    const auto& s0 = curve.samples[j];
    const auto& s1 = curve.samples[j + 1];
    if (!s0.feasible || !s1.feasible) continue;
    if (straddles_zero(pair_difference(s0.amplitudes, pair), pair_difference(s1.amplitudes, pair)))
      out.push_back({s0, s1});
  }
  for (const auto& edge : curve.edges) {
    const auto& neighbor = curve.samples[edge.neighbor];
    if (!straddles_zero(pair_difference(edge.sample.amplitudes, pair),
                        pair_difference(neighbor.amplitudes, pair)))
      continue;
    if (edge.sample.theta_p < neighbor.theta_p)
      out.push_back({edge.sample, neighbor});
    else
      out.push_back({neighbor, edge.sample});
  }
  std::sort(out.begin(), out.end(),
            [](const Bracket& x, const Bracket& y) { return x.lo.theta_p < y.lo.theta_p; });
  return out;
}

double pair_maximum(const ScanCurve& curve, AmplitudePair pair) {
  double m = 0.0;
  auto visit = [&](const ScanSample& s) {
    if (!s.feasible) return;
    const auto [first, second] = pair_values(s.amplitudes, pair);
    m = std::max({m, std::abs(first), std::abs(second)});
  };
  for (const auto& s : curve.samples) visit(s);
  for (const auto& e : curve.edges) visit(e.sample);
  return m;
}

std::string_view to_string(BellState s) {
  switch (s) {
    case BellState::PhiPlus: return "PhiPlus";
    case BellState::PhiMinus: return "PhiMinus";
    case BellState::PsiPlus: return "PsiPlus";
    case BellState::PsiMinus: return "PsiMinus";
  }
  return "?";
}

std::optional<BellPoint> refine_crossing(const Bracket& bracket, AmplitudePair pair,
                                         const RefineContext& context) {
  double f_lo = pair_difference(bracket.lo.amplitudes, pair);
  double f_hi = pair_difference(bracket.hi.amplitudes, pair);
  if (!bracket.lo.feasible || !bracket.hi.feasible || !straddles_zero(f_lo, f_hi) ||
      !(bracket.lo.theta_p <= bracket.hi.theta_p)) {
    std::ostringstream msg;
    msg << "bracket [" << bracket.lo.theta_p << ", " << bracket.hi.theta_p
        << "] does not straddle a crossing of " << to_string(pair);
    throw InvalidBracket(msg.str());
  }

  ChannelAmplitudes root;
  if (f_lo == 0.0) {
    root = bracket.lo.amplitudes;
  } else if (f_hi == 0.0) {
    root = bracket.hi.amplitudes;
  } else {
    double lo = bracket.lo.theta_p;
    double hi = bracket.hi.theta_p;
    ChannelAmplitudes at_lo = bracket.lo.amplitudes;
    ChannelAmplitudes at_hi = bracket.hi.amplitudes;
    while (hi - lo > kRootTolerance) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      // Interior points of a valid bracket phase match; the touching solution
      // only covers a midpoint that rounds past a feasibility edge.
      const auto evaluated = evaluate(context.model, mid, context.branch);
      const ChannelAmplitudes at_mid =
          evaluated ? *evaluated : evaluate_touching(context.model, mid, context.branch);
      const double f_mid = pair_difference(at_mid, pair);
      if (f_mid == 0.0) {
        at_lo = at_hi = at_mid;
        break;
      }
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        at_lo = at_mid;
        f_lo = f_mid;
      } else {
        hi = mid;
        at_hi = at_mid;
        f_hi = f_mid;
      }
    }
    root = std::abs(pair_difference(at_lo, pair)) <= std::abs(pair_difference(at_hi, pair))
               ? at_lo
               : at_hi;
  }

  const auto [first, second] = pair_values(root, pair);
  const double amplitude = 0.5 * (std::abs(first) + std::abs(second));
  if (amplitude <= kZeroAmplitudeFraction * context.pair_max) return std::nullopt;

  BellPoint p;
  p.state = classify(pair, first, second);
  p.theta_p = root.solution.theta_p;
  p.theta_s = root.solution.theta_s;
  p.theta_i = root.solution.theta_i;
  p.branch = context.branch;
  p.amplitude = amplitude;
  p.pump_polarization = pair == AmplitudePair::AB ? Pol::H : Pol::V;
  p.residual = root.solution.residual;
  return p;
}

std::vector<BellPoint> bell_table(const SourceConfig& config, const BellTableOptions& options) {
  const SourceModel model = make_model(config);
  const auto curves = scan(config);

  std::array<std::vector<BellPoint>, 2> found;  // Plus, Minus
  for (std::size_t b = 0; b < 2; ++b) {
    for (AmplitudePair pair : {AmplitudePair::AB, AmplitudePair::CD}) {
      const RefineContext context{model, curves[b].branch, pair_maximum(curves[b], pair)};
      for (const auto& bracket : find_crossings(curves[b], pair))
        if (auto p = refine_crossing(bracket, pair, context)) found[b].push_back(*p);
    }
  }

  auto& plus = found[0];
  const auto& minus = found[1];
  if (!options.keep_mirror_images) {
    std::erase_if(plus, [&](const BellPoint& p) {
      return std::any_of(minus.begin(), minus.end(),
                         [&](const BellPoint& m) { return is_mirror_image(p, m); });
    });
  }

  // Minus-branch points take precedence when two branches land on the same
  // pump angle with the same state.
  std::vector<BellPoint> table;
  for (const auto* list : std::array<const std::vector<BellPoint>*, 2>{&minus, &plus}) {
    for (const auto& p : *list) {
      const bool duplicate = std::any_of(table.begin(), table.end(), [&](const BellPoint& q) {
        return q.state == p.state && std::abs(q.theta_p - p.theta_p) <= kDuplicateTolerance;
      });
      if (!duplicate) table.push_back(p);
    }
  }
  std::sort(table.begin(), table.end(), [](const BellPoint& x, const BellPoint& y) {
    if (x.theta_p != y.theta_p) return x.theta_p < y.theta_p;
    return x.state < y.state;
  });
  return table;
}

}  // namespace xbell
