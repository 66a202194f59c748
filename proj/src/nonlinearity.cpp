#include "xbell/nonlinearity.hpp"

#include <cmath>
#include <string>

namespace xbell {

namespace {

using CVec3 = Eigen::Vector3cd;

void check_frequencies(const Frequencies& w) {
  if (!(w.pump > 0.0 && w.signal > 0.0 && w.idler > 0.0))
    throw InvalidInput("frequencies must be positive");
  if (std::abs(w.signal + w.idler - w.pump) > 1e-9 * w.pump)
    throw InvalidInput("energy not conserved: signal + idler = " +
                       std::to_string(w.signal + w.idler) + ", pump = " + std::to_string(w.pump));
}

Vec3 in_plane(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

// Bilinear product; Eigen's dot() conjugates its left operand.
std::complex<double> bdot(const CVec3& a, const CVec3& b) { return a.cwiseProduct(b).sum(); }

}  // namespace

std::string_view to_string(Pol p) { return p == Pol::H ? "H" : "V"; }

PolarizationBasis polarization_vectors(double theta) {
  return {Vec3(-std::sin(theta), std::cos(theta), 0.0), Vec3(0.0, 0.0, 1.0)};
}

Vec3 polarization_vector(Pol p, double theta) {
  const auto basis = polarization_vectors(theta);
  return p == Pol::H ? basis.h : basis.v;
}

double bracket_amplitude(const Vec3& e_pump, const Vec3& e_signal, const Vec3& e_idler,
                         const Frequencies& w, const Vec3& g_vec) {
  check_frequencies(w);
  const double t1 = w.idler * w.pump * g_vec.dot(e_signal) * e_pump.dot(e_idler);
  const double t2 = w.signal * w.idler * g_vec.dot(e_pump) * e_idler.dot(e_signal);
  const double t3 = w.signal * w.pump * g_vec.dot(e_idler) * e_pump.dot(e_signal);
  return (t1 - t2 + t3) / (w.pump * w.pump);
}

double bracket_amplitude(const Channel& channel, double theta_p, double theta_s, double theta_i,
                         const Frequencies& w, const Vec3& g_vec) {
  return bracket_amplitude(polarization_vector(channel.pump, theta_p),
                           polarization_vector(channel.signal, theta_s),
                           polarization_vector(channel.idler, theta_i), w, g_vec);
}

double bracket_scale(const Vec3& e_pump, const Vec3& e_signal, const Vec3& e_idler,
                     const Frequencies& w, const Vec3& g_vec) {
  check_frequencies(w);
  const double weights = w.idler * w.pump + w.signal * w.idler + w.signal * w.pump;
  return g_vec.norm() * e_pump.norm() * e_signal.norm() * e_idler.norm() * weights /
         (w.pump * w.pump);
}

std::complex<double> full_current_oracle(double theta_p, double /*theta_s*/, double theta_i,
                                         const Frequencies& w, const Vec3& g_vec,
                                         const Vec3& e_pump, const Vec3& e_idler,
                                         const Vec3& e_signal, double hc) {
  check_frequencies(w);
  const std::complex<double> I(0.0, 1.0);

  const Vec3 k_pump = wavenumber(w.pump, hc) * in_plane(theta_p);
  const Vec3 k_idler = wavenumber(w.idler, hc) * in_plane(theta_i);

  // The signal-frequency part of a product of the pump field with the
  // conjugate idler field varies as exp(i (k_p - k_i).r); gradients of the
  // unperturbed density rho_g exp(i G.r) bring down i G.
  const CVec3 ep = e_pump.cast<std::complex<double>>();
  const CVec3 ei = e_idler.cast<std::complex<double>>();
  const CVec3 grad_field_product = I * (k_pump - k_idler).cast<std::complex<double>>();
  const CVec3 grad_density = I * g_vec.cast<std::complex<double>>();

  const std::complex<double> pi_dot = bdot(ep, ei);
  const CVec3 velocity_gradient = -grad_field_product * pi_dot / (w.signal * w.idler * w.pump);
  const CVec3 density_pump = -bdot(grad_density, ep) * ei / (w.pump * w.pump * w.idler);
  const CVec3 density_idler = bdot(grad_density, ei) * ep / (w.idler * w.idler * w.pump);

  const CVec3 current = I * (velocity_gradient + density_pump + density_idler);
  const std::complex<double> projected = bdot(e_signal.cast<std::complex<double>>(), current);

  // current = -[bracket] / (w_p^2 w_i^2 w_s) in these units.
  return -projected * (w.idler * w.idler * w.signal);
}

bool selection_rule(Pol pump, Pol signal, Pol idler) {
  return pump == Pol::H ? signal == idler : signal != idler;
}

ChannelAmplitudes channel_amplitudes(const PhaseMatchSolution& s, const Frequencies& w, double g) {
  const Vec3 g_vec = lattice_vector3(g);
  ChannelAmplitudes out;
  out.a = bracket_amplitude(kChannelA, s.theta_p, s.theta_s, s.theta_i, w, g_vec);
  out.b = bracket_amplitude(kChannelB, s.theta_p, s.theta_s, s.theta_i, w, g_vec);
  out.c = bracket_amplitude(kChannelC, s.theta_p, s.theta_s, s.theta_i, w, g_vec);
  out.d = bracket_amplitude(kChannelD, s.theta_p, s.theta_s, s.theta_i, w, g_vec);
  out.theta_p = s.theta_p;
  out.solution = s;
  return out;
}

}  // namespace xbell
