#include <cmath>
#include <stdexcept>

#include "fosc/wazewski.hpp"

namespace fosc
{

std::optional<NonconvexityWitness> demoNonconvexity(const Vec3& field, const PendulumParams& params,
                                                    const NonconvexityOptions& options)
{
  params.validate();
  if (params.friction != 0.0)
  {
    throw std::invalid_argument{"non-convexity witness is defined for the frictionless pendulum"};
  }
  const double mg = params.mass * params.gravity;
  const double horizontal = std::hypot(field.x(), field.y());
  // On the equator with horizontal tangent v, ([v, B], e_z) = v·(B_y, −B_x, 0)
  // is at most |v| |B_h|.
  if (!(horizontal * options.speedCap > mg))
  {
    return std::nullopt;
  }
  const double required = mg / horizontal;
  double speed = std::min(options.speedFactor * required, options.speedCap);
  if (!(speed * horizontal > mg))
  {
    speed = options.speedCap;
  }

  NonconvexityWitness w;
  w.requiredSpeed = required;
  w.initial.t = 0.0;
  w.initial.rho = Vec3{field.x(), field.y(), 0.0} / horizontal;
  w.initial.v = speed * Vec3{field.y(), -field.x(), 0.0} / horizontal;
  w.magneticVertical = w.initial.v.cross(field).z();

  const ForcingBundle forcing{PeriodicSignal{1.0}, PeriodicSignal::constant(1.0, field)};
  w.verticalForce = params.mass * pendulumAccel(w.initial, params, forcing).z();

  const auto system = PendulumSystem{params, forcing};
  IntegratorSettings settings;
  settings.step = options.arcStep;
  EventSpec none;
  none.plane = false;
  auto arc = integrateUntil(w.initial, system, settings, options.arcLength, none, true);
  w.arcMinPlane = std::numeric_limits<double>::infinity();
  for (const auto& s : arc.trajectory.samples())
  {
    if (s.state.t > 0.0)
    {
      w.arcMinPlane = std::min(w.arcMinPlane, s.plane);
    }
  }
  w.arc = std::move(arc.trajectory);
  return w;
}

}  // namespace fosc
