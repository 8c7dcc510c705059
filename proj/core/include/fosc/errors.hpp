#pragma once

#include <stdexcept>
#include <string>

namespace fosc
{

/// Base class of every recoverable failure raised by the toolkit.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A state was handed to an operation that requires it to lie on the
/// constraint manifold (and in its tangent bundle) but does not.
class ManifoldError : public Error
{
public:
  using Error::Error;
};

/// Newton projection onto s = 0 failed to reach its tolerance.
class ProjectionError : public Error
{
public:
  using Error::Error;
};

/// A chart was evaluated too far from its anchor.
class ChartError : public Error
{
public:
  using Error::Error;
};

/// The energy-cap sweep ran out of range without certifying dissipation.
class SweepExhausted : public Error
{
public:
  using Error::Error;
};

/// The sampled egress set does not have the product structure that the
/// topological count relies on.
class StructureMismatch : public Error
{
public:
  using Error::Error;
};

/// Shooting failed from every seeded guess.
class OrbitNotFound : public Error
{
public:
  using Error::Error;
};

/// No admissible sample exists (e.g. empty tangency set).
class EmptySampleSet : public Error
{
public:
  using Error::Error;
};

}  // namespace fosc
