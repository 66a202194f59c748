#ifndef XBELL_PHASEMATCH_HPP
#define XBELL_PHASEMATCH_HPP

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "xbell/crystal.hpp"

// Scattering-plane geometry. The scattering plane is the x-y plane, the
// reciprocal lattice vector is G = (0, -|G|) and the atomic planes run along
// x. Beam angles are signed, measured from +x toward +y, and every beam with
// angle theta propagates along (cos theta, sin theta).

namespace xbell {

using Vec2 = Eigen::Vector2d;

enum class Branch { Plus, Minus };

std::string_view to_string(Branch b);

class DegenerateGeometry : public std::domain_error {
public:
  explicit DegenerateGeometry(const std::string& what) : std::domain_error(what) {}
};

// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

// Smallest absolute difference between two angles modulo 2 pi.
double angle_distance(double a, double b);

inline Vec2 direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline Vec2 lattice_vector(double g) { return {0.0, -g}; }

// Wavenumbers of the three beams together with |G| for one operating point.
struct Kinematics {
  double k_pump = 0.0;
  double k_signal = 0.0;
  double k_idler = 0.0;
  double g = 0.0;
};

Kinematics make_kinematics(const CrystalReflection& reflection, const EnergySplit& energies,
                           double hc = kHcKevAngstrom);

// Q = k_p (cos theta_p, sin theta_p) + G, the momentum the signal-idler pair
// must carry away.
Vec2 momentum_transfer(double theta_p, double k_pump, double g);

// Signal/idler directions closing k_s + k_i = Q, before the pump angle is attached.
struct TriangleSolution {
  double theta_s = 0.0;
  double theta_i = 0.0;
  Branch branch = Branch::Plus;
  double residual = 0.0;
};

// Circle-intersection construction of the momentum triangle. Returns two
// branches (signal rotated by +alpha or -alpha from Q), one when the triangle
// is flat, none when the triangle inequality fails. Throws DegenerateGeometry
// for |Q| == 0 and InvalidInput for non-positive wavenumbers.
std::vector<TriangleSolution> solve_signal_idler(const Vec2& q, double k_signal, double k_idler);

// The flat-triangle solution at a feasibility boundary: signal and idler both
// along Q when |Q| = k_s + k_i, or opposite when |Q| = |k_s - k_i|. The
// caller decides which limit applies; residual reports how far from closed it is.
TriangleSolution touching_solution(const Vec2& q, double k_signal, double k_idler, Branch branch);

// k_s k(theta_s) + k_i k(theta_i) - k_p k(theta_p) - G.
Vec2 phase_mismatch(double theta_p, double theta_s, double theta_i, double k_pump,
                    double k_signal, double k_idler, double g);

struct PhaseMatchSolution {
  double theta_p = 0.0;
  double theta_s = 0.0;
  double theta_i = 0.0;
  Branch branch = Branch::Plus;
  double residual = 0.0;  // |phase_mismatch|, 1/Angstrom
};

// All phase-matched (theta_s, theta_i) for a pump at theta_p.
std::vector<PhaseMatchSolution> phase_match(double theta_p, const Kinematics& kin);

// Feasibility margin of the triangle at theta_p: cos(alpha) of the
// construction. The triangle closes iff |margin| <= 1.
double triangle_cosine(double theta_p, const Kinematics& kin);

}  // namespace xbell

#endif  // XBELL_PHASEMATCH_HPP
