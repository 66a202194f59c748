#include "xbell/phasematch.hpp"

#include <cmath>
#include <numbers>

namespace xbell {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidInput(std::string(name) + " must be positive, got " + std::to_string(v));
}

TriangleSolution close_triangle(const Vec2& q, double k_signal, double k_idler, double theta_s,
                                Branch branch) {
  const Vec2 idler = q - k_signal * direction(theta_s);
  TriangleSolution s;
  s.theta_s = wrap_angle(theta_s);
  s.theta_i = std::atan2(idler.y(), idler.x());
  s.branch = branch;
  s.residual = (k_signal * direction(s.theta_s) + k_idler * direction(s.theta_i) - q).norm();
  return s;
}

}  // namespace

std::string_view to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

double wrap_angle(double theta) {
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

Kinematics make_kinematics(const CrystalReflection& reflection, const EnergySplit& energies,
                           double hc) {
  return Kinematics{wavenumber(energies.pump_energy, hc), wavenumber(energies.signal_energy, hc),
                    wavenumber(energies.idler_energy, hc), reflection.g_magnitude()};
}

Vec2 momentum_transfer(double theta_p, double k_pump, double g) {
  require_positive(k_pump, "pump wavenumber");
  require_positive(g, "|G|");
  return k_pump * direction(theta_p) + lattice_vector(g);
}

std::vector<TriangleSolution> solve_signal_idler(const Vec2& q, double k_signal, double k_idler) {
  require_positive(k_signal, "signal wavenumber");
  require_positive(k_idler, "idler wavenumber");
  const double qn = q.norm();
  if (qn == 0.0) throw DegenerateGeometry("momentum transfer is zero; its direction is undefined");

  const double theta_q = std::atan2(q.y(), q.x());
  const double cos_alpha = (qn * qn + k_signal * k_signal - k_idler * k_idler) / (2.0 * qn * k_signal);
  if (std::abs(cos_alpha) > 1.0) return {};

  if (std::abs(cos_alpha) == 1.0)
    return {close_triangle(q, k_signal, k_idler, cos_alpha > 0 ? theta_q : theta_q + kPi,
                           Branch::Plus)};

  const double alpha = std::acos(cos_alpha);
  return {close_triangle(q, k_signal, k_idler, theta_q + alpha, Branch::Plus),
          close_triangle(q, k_signal, k_idler, theta_q - alpha, Branch::Minus)};
}

TriangleSolution touching_solution(const Vec2& q, double k_signal, double k_idler, Branch branch) {
  require_positive(k_signal, "signal wavenumber");
  require_positive(k_idler, "idler wavenumber");
  const double qn = q.norm();
  if (qn == 0.0) throw DegenerateGeometry("momentum transfer is zero; its direction is undefined");

  const double theta_q = std::atan2(q.y(), q.x());
  const double cos_alpha = (qn * qn + k_signal * k_signal - k_idler * k_idler) / (2.0 * qn * k_signal);
  const bool signal_along_q = cos_alpha >= 0.0;
  const bool idler_along_q = !signal_along_q || qn >= k_signal;
  // Both beams are pinned exactly collinear with Q so that the triangle is
  // flat even when |Q| sits a rounding error off the limit.
  TriangleSolution s;
  s.theta_s = wrap_angle(signal_along_q ? theta_q : theta_q + kPi);
  s.theta_i = wrap_angle(idler_along_q ? theta_q : theta_q + kPi);
  s.branch = branch;
  s.residual = (k_signal * direction(s.theta_s) + k_idler * direction(s.theta_i) - q).norm();
  return s;
}

Vec2 phase_mismatch(double theta_p, double theta_s, double theta_i, double k_pump,
                    double k_signal, double k_idler, double g) {
  return k_signal * direction(theta_s) + k_idler * direction(theta_i) -
         k_pump * direction(theta_p) - lattice_vector(g);
}

std::vector<PhaseMatchSolution> phase_match(double theta_p, const Kinematics& kin) {
  const Vec2 q = momentum_transfer(theta_p, kin.k_pump, kin.g);
  std::vector<PhaseMatchSolution> out;
  for (const auto& t : solve_signal_idler(q, kin.k_signal, kin.k_idler)) {
    PhaseMatchSolution s{theta_p, t.theta_s, t.theta_i, t.branch, 0.0};
    s.residual = phase_mismatch(theta_p, s.theta_s, s.theta_i, kin.k_pump, kin.k_signal,
                                kin.k_idler, kin.g)
                     .norm();
    out.push_back(s);
  }
  return out;
}

double triangle_cosine(double theta_p, const Kinematics& kin) {
  const Vec2 q = momentum_transfer(theta_p, kin.k_pump, kin.g);
  const double qn = q.norm();
  if (qn == 0.0) throw DegenerateGeometry("momentum transfer is zero; its direction is undefined");
  return (qn * qn + kin.k_signal * kin.k_signal - kin.k_idler * kin.k_idler) /
         (2.0 * qn * kin.k_signal);
}

}  // namespace xbell
