// Scenario files: a flat key = value text format with dotted sections,
// chosen over positional flags so runs are reproducible from one artifact.
//
//   potential.kind = constant-magnetic   # zero | constant-electric | polynomial
//   potential.phi = 1.0                  # parameter of the named kinds
//   potential.A2 = 1.0 0 0 0 1           # polynomial kind: monomial terms
//   metric.kind = minkowski              # constant | polynomial
//   metric.matrix.row0 = 1 0 0 0         # constant kind, four rows
//   metric.g00 = 1 0 0 0 0               # polynomial kind, entries i <= j
//   particle.mass = 1.0
//   particle.charge = 2.0
//   initial.position = 0 0 0 0 0         # x0 x1 x2 x3 x4
//   initial.velocity = 0 0 0 1           # u0 u1 u2 u3
//   integrator.step = 1e-3
//   integrator.t_end = 1.0
//   integrator.record_every = 10
//
// '#' starts a comment. Unknown keys are rejected. `--set key=value`
// overrides are applied before validation.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "sublorentz/fields.hpp"
#include "sublorentz/geodesic_engine.hpp"

namespace sublorentz {

struct Scenario {
  FramedDistribution dist;
  ParticleParams particle;
  GeodesicState initial;
  IntegratorConfig integrator;
  std::map<std::string, std::string> raw;  // echoed into export metadata
};

// Throws SpecError with a line/field diagnostic on malformed input.
Scenario parse_scenario_text(const std::string& text,
                             const std::vector<std::string>& overrides = {});
Scenario load_scenario_file(const std::string& path,
                            const std::vector<std::string>& overrides = {});

}  // namespace sublorentz
