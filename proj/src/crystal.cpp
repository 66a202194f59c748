#include "xbell/crystal.hpp"

#include <cmath>
#include <numbers>

namespace xbell {

CrystalReflection make_reflection(double lattice_constant, const Miller& miller) {
  if (!(lattice_constant > 0.0) || !std::isfinite(lattice_constant))
    throw InvalidInput("lattice constant must be positive, got " + std::to_string(lattice_constant));
  if (miller.h == 0 && miller.k == 0 && miller.l == 0)
    throw InvalidInput("Miller indices (0,0,0) do not define a reflection");

  const double norm2 = double(miller.h) * miller.h + double(miller.k) * miller.k +
                       double(miller.l) * miller.l;
  const double d = lattice_constant / std::sqrt(norm2);
  return CrystalReflection(lattice_constant, miller, d, 2.0 * std::numbers::pi / d);
}

double wavenumber(double energy_kev, double hc) {
  if (!(energy_kev > 0.0) || !std::isfinite(energy_kev))
    throw InvalidInput("photon energy must be positive, got " + std::to_string(energy_kev));
  if (!(hc > 0.0))
    throw InvalidInput("hc must be positive");
  return 2.0 * std::numbers::pi * energy_kev / hc;
}

Photon make_photon(double energy_kev, double hc) {
  return Photon{energy_kev, wavenumber(energy_kev, hc)};
}

EnergySplit split(double pump_energy, double signal_fraction) {
  if (!(pump_energy > 0.0) || !std::isfinite(pump_energy))
    throw InvalidInput("pump energy must be positive, got " + std::to_string(pump_energy));
  if (!(signal_fraction > 0.0 && signal_fraction < 1.0))
    throw InvalidInput("signal fraction must lie in (0,1), got " + std::to_string(signal_fraction));

  EnergySplit s;
  s.pump_energy = pump_energy;
  s.signal_fraction = signal_fraction;
  s.signal_energy = pump_energy * signal_fraction;
  // Idler takes the remainder so that signal + idler == pump holds as
  // closely as floating point allows.
  s.idler_energy = pump_energy - s.signal_energy;
  return s;
}

}  // namespace xbell
