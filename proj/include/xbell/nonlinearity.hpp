#ifndef XBELL_NONLINEARITY_HPP
#define XBELL_NONLINEARITY_HPP

#include <complex>
#include <string_view>

#include <Eigen/Core>

#include "xbell/crystal.hpp"
#include "xbell/phasematch.hpp"

// Cold-plasma x-ray nonlinearity. The driving current at the signal
// frequency is proportional to
//
//   w_i w_p (G.e_s)(e_p.e_i) - w_s w_i (G.e_p)(e_i.e_s) + w_s w_p (G.e_i)(e_p.e_s)
//
// times a prefactor that depends only on the frequencies, the electron
// density and the field amplitudes. That prefactor is the same for every
// polarization channel and is dropped; amplitudes here are the bracket
// divided by w_p^2, so they are invariant under a common rescaling of the
// three frequencies and carry units of |G| (1/Angstrom).

namespace xbell {

using Vec3 = Eigen::Vector3d;

// H lies in the scattering plane, V is normal to it.
enum class Pol { H, V };

std::string_view to_string(Pol p);

struct Channel {
  Pol pump;
  Pol signal;
  Pol idler;

  friend bool operator==(const Channel&, const Channel&) = default;
};

inline constexpr Channel kChannelA{Pol::H, Pol::H, Pol::H};  // |H_s H_i>, pump H
inline constexpr Channel kChannelB{Pol::H, Pol::V, Pol::V};  // |V_s V_i>, pump H
inline constexpr Channel kChannelC{Pol::V, Pol::H, Pol::V};  // |H_s V_i>, pump V
inline constexpr Channel kChannelD{Pol::V, Pol::V, Pol::H};  // |V_s H_i>, pump V

struct PolarizationBasis {
  Vec3 h;  // z x k(theta) = (-sin theta, cos theta, 0)
  Vec3 v;  // (0, 0, 1)
};

PolarizationBasis polarization_vectors(double theta);

Vec3 polarization_vector(Pol p, double theta);

// Photon energies standing in for the three angular frequencies.
struct Frequencies {
  double pump = 0.0;
  double signal = 0.0;
  double idler = 0.0;
};

inline Frequencies frequencies(const EnergySplit& s) {
  return {s.pump_energy, s.signal_energy, s.idler_energy};
}

// Reciprocal lattice vector embedded in 3D, (0, -g, 0).
inline Vec3 lattice_vector3(double g) { return {0.0, -g, 0.0}; }

// Bracket for explicit polarization vectors. Throws InvalidInput if the
// frequencies are non-positive or violate w_s + w_i = w_p by more than 1e-9
// relative.
double bracket_amplitude(const Vec3& e_pump, const Vec3& e_signal, const Vec3& e_idler,
                         const Frequencies& w, const Vec3& g_vec);

double bracket_amplitude(const Channel& channel, double theta_p, double theta_s, double theta_i,
                         const Frequencies& w, const Vec3& g_vec);

// Upper bound on |bracket_amplitude| for the given vector norms,
// |G| |e_p| |e_s| |e_i| (w_i w_p + w_s w_i + w_s w_p) / w_p^2. The natural
// magnitude of a channel, used as the reference for relative comparisons
// since individual amplitudes pass through zero.
double bracket_scale(const Vec3& e_pump, const Vec3& e_signal, const Vec3& e_idler,
                     const Frequencies& w, const Vec3& g_vec);

// Independent evaluation of the signal-frequency current from the unprojected
// plasma current: the three terms are built as complex vectors from plane
// wave fields with the gradient acting on exp(i k.r), using the beams' own
// k-vectors (vacuum wavenumbers from the frequencies), then projected on
// e_signal and brought to the bracket_amplitude normalization. Agrees with
// bracket_amplitude only when the beams are phase matched.
std::complex<double> full_current_oracle(double theta_p, double theta_s, double theta_i,
                                         const Frequencies& w, const Vec3& g_vec,
                                         const Vec3& e_pump, const Vec3& e_idler,
                                         const Vec3& e_signal, double hc = kHcKevAngstrom);

// Allowed iff (pump H and signal == idler) or (pump V and signal != idler).
bool selection_rule(Pol pump, Pol signal, Pol idler);

inline bool selection_rule(const Channel& c) { return selection_rule(c.pump, c.signal, c.idler); }

// A, B, C, D at one phase-matched operating point.
struct ChannelAmplitudes {
  double a = 0.0;  // HH, pump H
  double b = 0.0;  // VV, pump H
  double c = 0.0;  // HV, pump V
  double d = 0.0;  // VH, pump V
  double theta_p = 0.0;
  PhaseMatchSolution solution;
};

ChannelAmplitudes channel_amplitudes(const PhaseMatchSolution& solution, const Frequencies& w,
                                     double g);

}  // namespace xbell

#endif  // XBELL_NONLINEARITY_HPP
