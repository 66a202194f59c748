#ifndef XBELL_CRYSTAL_HPP
#define XBELL_CRYSTAL_HPP

#include <stdexcept>
#include <string>

// Units throughout the library: keV for photon energies, Angstrom for
// lengths, inverse Angstrom for wavenumbers, radians for angles.

namespace xbell {

// Photon energy-wavelength conversion, keV * Angstrom.
inline constexpr double kHcKevAngstrom = 12.398419;

// Conventional cubic cell of diamond at room temperature, Angstrom.
inline constexpr double kDiamondLatticeConstant = 3.5668;

class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

struct Miller {
  int h = 1;
  int k = 1;
  int l = 1;

  friend bool operator==(const Miller&, const Miller&) = default;
};

// A single Bragg reflection (h,k,l) of a cubic lattice.
class CrystalReflection {
public:
  double lattice_constant() const { return lattice_constant_; }
  const Miller& miller() const { return miller_; }
  double d_spacing() const { return d_spacing_; }
  // |G| = 2 pi / d
  double g_magnitude() const { return g_magnitude_; }

private:
  friend CrystalReflection make_reflection(double, const Miller&);
  CrystalReflection(double a, const Miller& m, double d, double g)
      : lattice_constant_(a), miller_(m), d_spacing_(d), g_magnitude_(g) {}

  double lattice_constant_;
  Miller miller_;
  double d_spacing_;
  double g_magnitude_;
};

// Throws InvalidInput for a non-positive lattice constant or (0,0,0).
CrystalReflection make_reflection(double lattice_constant, const Miller& miller);

// Vacuum wavenumber 2 pi E / hc. Throws InvalidInput for E <= 0.
double wavenumber(double energy_kev, double hc = kHcKevAngstrom);

struct Photon {
  double energy = 0.0;      // keV
  double wavenumber = 0.0;  // 1/Angstrom
};

Photon make_photon(double energy_kev, double hc = kHcKevAngstrom);

// Pump photon split into signal and idler with signal = fraction * pump.
struct EnergySplit {
  double pump_energy = 0.0;
  double signal_fraction = 0.0;
  double signal_energy = 0.0;
  double idler_energy = 0.0;

  bool degenerate() const { return signal_energy == idler_energy; }
};

// Throws InvalidInput unless pump_energy > 0 and 0 < signal_fraction < 1.
EnergySplit split(double pump_energy, double signal_fraction);

}  // namespace xbell

#endif  // XBELL_CRYSTAL_HPP
