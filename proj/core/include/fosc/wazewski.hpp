#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fosc/dynamics.hpp"
#include "fosc/integrate.hpp"
#include "fosc/parallel.hpp"

namespace fosc
{

/// N_c = {(t, ρ, v) : f(t, ρ) ≥ 0, s(ρ) = 0, T ≤ c} for a given system.
struct Block
{
  std::shared_ptr<const System> system;
  double energyCap = 0.0;

  Block(std::shared_ptr<const System> system, double energyCap);

  /// Speed on the energy face, √(2c/m).
  [[nodiscard]] double speedCap() const;
};

/// Outcome of one sampled check of a quantitative hypothesis.
struct ConditionReport
{
  std::string name;
  bool satisfied = false;
  /// Positive in the safe direction.
  double margin = 0.0;
  State worst;
  std::string resolution;
  /// Named auxiliary quantities (bounds, thresholds, sample counts).
  std::vector<std::pair<std::string, double>> details;
};

/// Horizontal-velocity magnetic bound ([v, B(t)], e_z) < mg for all horizontal
/// v with m|v|²/2 ≤ c. The direction maximum is closed form,
/// √(2c/m)·|B_h(t)|, so only t is gridded (`resolution` samples per period,
/// golden-section refined).
[[nodiscard]] ConditionReport checkMagneticBound(const ForcingBundle& forcing, double energyCap,
                                                 const PendulumParams& params,
                                                 int resolution = kDefaultSupNormSamples);

struct FrictionThreshold
{
  /// √(m/2c)·(sup|F| + mg), using the refined supremum.
  double muMin = 0.0;
  /// Same with the plain grid maximum of |F|.
  double muMinGrid = 0.0;
  double forceSup = 0.0;
};

[[nodiscard]] FrictionThreshold frictionThreshold(const ForcingBundle& forcing, double energyCap,
                                                  const PendulumParams& params);

/// μ > μ_min with margin μ − μ_min.
[[nodiscard]] ConditionReport checkFriction(const ForcingBundle& forcing, double energyCap,
                                            const PendulumParams& params);

/// Sampling density for surface-wide sweeps.
struct SurfaceSampling
{
  int timeSamples = 64;
  int surfacePoints = 4096;
  /// Points per sampled curve f = 0 ∩ s = 0.
  int curvePoints = 256;
};

/// Certified energy cap for the dissipation property dT/dt < 0 on T = c.
struct EnergyCap
{
  /// Certified value: smallest sweep value c with dissipation holding at c/1.1.
  double cap = 0.0;
  /// Refined threshold c* = m A²/(2μ²) of the sampled worst case.
  double threshold = 0.0;
  /// Sampled max over (t, ρ) of the tangential working force |P_tan W|.
  double maxWorkingForce = 0.0;
  /// max dT/dt on T = cap (negative).
  double maxRateAtCap = 0.0;
  State worst;
  int samples = 0;
};

inline constexpr double kEnergyCapSafety = 1.1;

/// Finds the energy cap c for which T = c is crossed inward only.
///
/// dT/dt at speed V in tangent direction e is V (W·e) − μ V² where W is the
/// working force; maximizing over e gives V |P_tan W| − μV². A geometric
/// sweep over c then picks the smallest grid value satisfying the bound
/// with the safety factor. Throws SweepExhausted when μ is too small for
/// the searched range.
[[nodiscard]] EnergyCap findEnergyCap(const System& system, const SurfaceSampling& sampling = {});

/// dT/dt < 0 everywhere on T = c, reported with margin −max dT/dt.
[[nodiscard]] ConditionReport checkDissipation(const System& system, double energyCap,
                                               const SurfaceSampling& sampling = {});

struct TangencySampling
{
  int timeSamples = 48;
  int curvePoints = 96;
  /// Samples along each admissible velocity segment.
  int velocitySamples = 17;
};

/// Samples of the tangency set {s = 0, f = 0, ṡ = 0, ḟ = 0, T ≤ c}.
struct TangencyPoint
{
  State state;
  double planeAccel = 0.0;
};

/// All sampled tangency points at a given resolution (throws EmptySampleSet
/// when none exists).
[[nodiscard]] std::vector<TangencyPoint> sampleTangencySet(const System& system, double energyCap,
                                                           const TangencySampling& sampling);

/// f̈ < 0 on the sampled tangency set, with |ω| < b and |ω̇| < b checked on the
/// rotation signal. Not satisfied is a legal outcome.
[[nodiscard]] ConditionReport checkTangencyLemma(const System& system, double rotationBound,
                                                 double energyCap,
                                                 const TangencySampling& sampling = {});

/// Output of the combined rotating-surface pipeline.
struct SurfaceCertificate
{
  double friction = 0.0;
  double energyCap = 0.0;
  /// Largest verified value of max(sup|ω|, sup|ω̇|) along the rotation law's
  /// amplitude family.
  double rotationBound = 0.0;
  double maxAmplitude = 0.0;
  ConditionReport dissipation;
  ConditionReport tangency;
};

struct SurfacePipelineOptions
{
  SurfaceSampling energySampling{};
  TangencySampling tangencySampling{};
  /// Upper end of the amplitude bisection, as a multiple of the scenario's
  /// amplitude.
  double amplitudeCeiling = 8.0;
  int bisectionSteps = 16;
  /// Starting μ for the doubling search when the scenario has μ = 0.
  double frictionSeed = 1.0;
};

/// Chooses μ (when the scenario's μ is zero) by doubling until
/// find-energy-cap + tangency-lemma pass at the scenario's rotation, then
/// bisects over the rotation amplitude with findEnergyCap inside to find the
/// rotation bound b. Throws SweepExhausted if no μ up to 2²⁰·seed works.
[[nodiscard]] SurfaceCertificate certifySurface(const SurfaceScenario& scenario,
                                                const SurfacePipelineOptions& options = {});

// --------------------------------------------------------------------------
// Boundary classification

enum class Face
{
  plane,
  energy,
  corner
};

enum class Stratum
{
  strictEgress,
  ingress,
  externalTangency,
  internalTangencyViolation
};

[[nodiscard]] const char* toString(Face face);
[[nodiscard]] const char* toString(Stratum stratum);

struct BoundaryStratum
{
  State state;
  Face face = Face::plane;
  Stratum stratum = Stratum::ingress;
  /// The decisive derivative: ḟ or dT/dt, or f̈ (T̈) at tangency.
  double margin = 0.0;
  double firstDerivative = 0.0;
  /// Membership in the analytic egress set {f = 0, ḟ ≤ 0, T ≤ c}.
  bool analyticEgress = false;
  /// |ḟ| within the tangency band.
  bool inBand = false;
};

[[nodiscard]] inline bool isEgress(Stratum s)
{
  return s == Stratum::strictEgress || s == Stratum::externalTangency;
}

struct BoundaryResolution
{
  int timeSamples = 16;
  /// Plane-face positions per time sample (points of f = 0 ∩ s = 0).
  int curvePoints = 48;
  /// Plane-face velocity disk: radial × angular samples, plus explicit
  /// tangency samples along ḟ = 0.
  int diskRadial = 4;
  int diskAngular = 12;
  int tangencySamples = 9;
  /// Energy-face positions per time sample and directions per position.
  int energyPoints = 64;
  int energyDirections = 8;
  /// Relative tolerance bands (velocity scale / acceleration scale).
  double tangencyTol = 1e-8;
  std::uint64_t seed = 0;
  /// Random jitter of sample times, as a fraction of the time spacing.
  double jitter = 0.0;

  /// Scales the sample counts from a single density knob (≥ 1).
  static BoundaryResolution fromDensity(int density, std::uint64_t seed = 0);
};

struct BoundarySummary
{
  std::size_t total = 0;
  std::size_t strictEgress = 0;
  std::size_t ingress = 0;
  std::size_t externalTangency = 0;
  std::size_t violations = 0;
  std::size_t planeFace = 0;
  std::size_t energyFace = 0;
  std::size_t corner = 0;
  /// Fraction of samples whose egress classification equals analytic-set
  /// membership.
  double expectedMatchRate = 0.0;
  /// Mismatches outside the tangency band (should be zero).
  std::size_t mismatchesOutsideBand = 0;
  /// Energy-face samples that were not ingress.
  std::size_t energyFaceNonIngress = 0;
  /// Time slices × curve points whose egress velocity set is empty.
  std::size_t emptyEgressSlices = 0;
  std::size_t slices = 0;
  /// max over the plane face of f̈ at tangency samples.
  double maxTangentPlaneAccel = -std::numeric_limits<double>::infinity();
  /// max dT/dt on the energy face.
  double maxEnergyRate = -std::numeric_limits<double>::infinity();
};

struct BoundaryClassification
{
  std::vector<BoundaryStratum> strata;
  BoundarySummary summary;
};

/// Classifies sampled points of ∂N_c by the first and second derivative of
/// the active face function. Corner points (f = 0 and T = c) are classified
/// by the plane face.
[[nodiscard]] BoundaryClassification classifyBoundary(const Block& block,
                                                      const BoundaryResolution& resolution = {},
                                                      Parallelism par = {});

/// Classification of a single boundary point; the face is inferred from the
/// state.
[[nodiscard]] BoundaryStratum classifyPoint(const Block& block, const State& s,
                                            double tangencyTol = 1e-8);

struct EgressTopology
{
  int blockEuler = 1;
  int egressEuler = 0;
  int difference = 1;
  std::size_t checkedSamples = 0;
  std::size_t checkedSlices = 0;
};

/// Verifies that the sampled egress set is the analytic set, i.e. the product
/// of the curve f = 0 ∩ s = 0 with a non-empty closed velocity half-disk,
/// and that N_c slices are a cap times a disk; returns the Euler
/// characteristics this structure implies. Throws StructureMismatch
/// otherwise.
[[nodiscard]] EgressTopology egressTopology(const Block& block,
                                            const BoundaryClassification& classification);

void writeStrataCsv(std::ostream& out, const std::vector<BoundaryStratum>& strata);

// --------------------------------------------------------------------------
// Non-convexity witness for the frictionless pendulum in a constant field.

struct NonconvexityOptions
{
  double speedCap = 1e3;
  /// Witness speed as a multiple of the minimal required speed.
  double speedFactor = 2.0;
  double arcLength = 0.01;
  double arcStep = 1e-5;
};

struct NonconvexityWitness
{
  State initial;
  /// (m ρ̈(0), e_z) = −mg + ([v₀, B], e_z)
  double verticalForce = 0.0;
  double magneticVertical = 0.0;
  /// mg / |B_h|
  double requiredSpeed = 0.0;
  /// min f over the sampled arc (0, ε].
  double arcMinPlane = 0.0;
  Trajectory arc;
};

/// Tangent initial condition on the equator whose trajectory enters f > 0,
/// or nullopt when no witness exists below the speed cap (e.g. B ∥ e_z).
/// Requires μ = 0 (throws std::invalid_argument otherwise).
[[nodiscard]] std::optional<NonconvexityWitness>
demoNonconvexity(const Vec3& field, const PendulumParams& params,
                 const NonconvexityOptions& options = {});

}  // namespace fosc
