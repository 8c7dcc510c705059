#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fosc/dynamics.hpp"

namespace fosc
{

struct IntegratorSettings
{
  double step = 5e-4;
  double projectionTol = 1e-14;
  int maxProjectionIter = 50;
  /// Bisection width, in time, for event localization.
  double eventTol = 1e-12;
  /// Initial states further than this from the manifold are projected with a
  /// warning.
  double manifoldTol = 1e-10;

  /// Default step τ/2000.
  static IntegratorSettings forPeriod(double period);
  void validate() const;
};

/// One row of a recorded trajectory.
struct Sample
{
  State state;
  double kinetic = 0.0;
  double plane = 0.0;
  double surfaceResidual = 0.0;
  double tangencyResidual = 0.0;
};

class Trajectory
{
public:
  void append(const System& system, const State& s);
  [[nodiscard]] const std::vector<Sample>& samples() const { return samples_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] bool empty() const { return samples_.empty(); }
  [[nodiscard]] const Sample& back() const { return samples_.back(); }

  [[nodiscard]] double minPlane() const;
  [[nodiscard]] double maxKinetic() const;
  [[nodiscard]] double maxSurfaceResidual() const;
  [[nodiscard]] double maxTangencyResidual() const;

  /// Header `t,rx,ry,rz,vx,vy,vz,T,f,s_res,tan_res`, one row per sample.
  void writeCsv(std::ostream& out) const;

private:
  std::vector<Sample> samples_;
};

inline constexpr const char* kTrajectoryCsvHeader = "t,rx,ry,rz,vx,vy,vz,T,f,s_res,tan_res";

enum class EventKind
{
  plane,
  energy
};

enum class Crossing
{
  outward,
  inward
};

[[nodiscard]] const char* toString(EventKind kind);
[[nodiscard]] const char* toString(Crossing dir);

struct Event
{
  double t = 0.0;
  EventKind kind = EventKind::plane;
  Crossing direction = Crossing::outward;
  State state;
};

/// Which block faces to watch and when to stop.
struct EventSpec
{
  bool plane = true;
  /// Watch T = c when set.
  std::optional<double> energyCap;
  enum class Stop
  {
    never,
    firstEvent,
    firstOutward
  } stop = Stop::never;
};

struct IntegrationResult
{
  Trajectory trajectory;
  std::vector<Event> events;
  State final;
  bool stoppedEarly = false;
  std::vector<std::string> warnings;
};

/// Projects ρ onto s = 0 and v onto the tangent plane.
[[nodiscard]] State projectState(const System& system, const State& s,
                                 const IntegratorSettings& settings);

/// One classical RK4 step of size h on (ρ, v) followed by projection.
[[nodiscard]] State step(const State& s, const System& system, double h,
                         const IntegratorSettings& settings);
[[nodiscard]] State step(const State& s, const System& system, const IntegratorSettings& settings);

/// Integrates to t_end on a uniform grid of ⌈(t_end − t₀)/h⌉ steps, recording
/// every step when `record` is set and localizing sign changes of the watched
/// face functions by bisection.
[[nodiscard]] IntegrationResult integrateUntil(const State& start, const System& system,
                                               const IntegratorSettings& settings, double tEnd,
                                               const EventSpec& events = {}, bool record = true);

/// Endpoint only; no events, no recording.
[[nodiscard]] State propagate(const State& start, const System& system,
                              const IntegratorSettings& settings, double tEnd);

/// Writes events as a JSON array of {t, kind, direction}.
void writeEventsJson(std::ostream& out, const std::vector<Event>& events);

}  // namespace fosc
