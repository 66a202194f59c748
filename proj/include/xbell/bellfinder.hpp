#ifndef XBELL_BELLFINDER_HPP
#define XBELL_BELLFINDER_HPP

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "xbell/crystal.hpp"
#include "xbell/nonlinearity.hpp"
#include "xbell/phasematch.hpp"

namespace xbell {

struct SourceConfig {
  double pump_energy = 25.0;  // keV
  double signal_fraction = 0.5;
  double lattice_constant = kDiamondLatticeConstant;
  Miller miller{1, 1, 1};
  double theta_min = 0.01;
  double theta_max = std::numbers::pi - 0.01;
  std::size_t samples = 2000;
  double hc = kHcKevAngstrom;
};

// Throws InvalidInput for an unusable configuration.
void validate(const SourceConfig& config);

// Everything derived from a SourceConfig that the evaluators need.
struct SourceModel {
  EnergySplit energies;
  Kinematics kin;
  Frequencies w;
};

SourceModel make_model(const SourceConfig& config);

class FeasibilityError : public std::runtime_error {
public:
  explicit FeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

class InvalidBracket : public std::invalid_argument {
public:
  explicit InvalidBracket(const std::string& what) : std::invalid_argument(what) {}
};

struct ScanSample {
  double theta_p = 0.0;
  bool feasible = false;
  double a2 = 0.0, b2 = 0.0, c2 = 0.0, d2 = 0.0;
  ChannelAmplitudes amplitudes;  // meaningful only when feasible
};

// Flat-triangle point where a branch starts or ends inside the scan range.
// Both branches meet here. `neighbor` indexes the adjacent feasible grid sample.
struct FeasibilityEdge {
  ScanSample sample;
  std::size_t neighbor = 0;
};

struct ScanCurve {
  double signal_fraction = 0.0;
  Branch branch = Branch::Plus;
  std::vector<ScanSample> samples;  // strictly increasing theta_p
  std::vector<FeasibilityEdge> edges;
};

// Evaluates one branch at theta_p; nullopt when phase matching fails there.
std::optional<ChannelAmplitudes> evaluate(const SourceModel& model, double theta_p, Branch branch);

// Amplitudes on the flat-triangle solution at theta_p; used at feasibility edges.
ChannelAmplitudes evaluate_touching(const SourceModel& model, double theta_p, Branch branch);

// Both branch curves, Plus first. Throws FeasibilityError when no grid point
// of either branch phase matches.
std::array<ScanCurve, 2> scan(const SourceConfig& config);

enum class AmplitudePair { AB, CD };

std::string_view to_string(AmplitudePair p);

// |first| - |second| for the pair.
double pair_difference(const ChannelAmplitudes& amps, AmplitudePair pair);

struct Bracket {
  ScanSample lo;
  ScanSample hi;
};

// Consecutive feasible samples (and edge/neighbor pairs) across which
// |first| - |second| changes sign or touches zero.
std::vector<Bracket> find_crossings(const ScanCurve& curve, AmplitudePair pair);

// Largest max(|first|, |second|) over the curve's feasible points.
double pair_maximum(const ScanCurve& curve, AmplitudePair pair);

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

std::string_view to_string(BellState s);

struct BellPoint {
  BellState state = BellState::PhiPlus;
  double theta_p = 0.0;
  double theta_s = 0.0;
  double theta_i = 0.0;
  Branch branch = Branch::Plus;
  double amplitude = 0.0;  // common magnitude |first| = |second|
  Pol pump_polarization = Pol::H;
  double residual = 0.0;
};

struct RefineContext {
  SourceModel model;
  Branch branch = Branch::Plus;
  double pair_max = 0.0;
};

inline constexpr double kZeroAmplitudeFraction = 1e-6;
inline constexpr double kRootTolerance = 1e-12;
inline constexpr double kDuplicateTolerance = 1e-6;

// Bisects the bracket, then classifies the crossing. Returns nullopt when the
// common magnitude is at most kZeroAmplitudeFraction * pair_max. Throws
// InvalidBracket if the endpoints do not straddle a zero.
std::optional<BellPoint> refine_crossing(const Bracket& bracket, AmplitudePair pair,
                                         const RefineContext& context);

struct BellTableOptions {
  // The two branches are mirror images of each other under
  // theta -> pi - theta for all three beams. By default a Plus-branch point
  // whose mirror image is already a Minus-branch point is dropped.
  bool keep_mirror_images = false;
};

std::vector<BellPoint> bell_table(const SourceConfig& config, const BellTableOptions& options = {});

}  // namespace xbell

#endif  // XBELL_BELLFINDER_HPP
