#include "lapnet/admm.hpp"

#include <cmath>
#include <string>

namespace lapnet {

std::string to_string(PrimalStep step) {
  return step == PrimalStep::kExact ? "exact" : "nare";
}

PrimalStep primal_step_from_string(const std::string& name) {
  if (name == "exact") return PrimalStep::kExact;
  if (name == "nare") return PrimalStep::kNare;
  throw DataError("unknown primal step '" + name + "' (expected exact|nare)");
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw DataError("SolverConfig: " + what);
  };
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be >= 0");
  if (!(rho > 0.0) || !std::isfinite(rho)) fail("rho must be > 0");
  if (!(eps_abs > 0.0)) fail("eps_abs must be > 0");
  if (!(eps_rel > 0.0)) fail("eps_rel must be > 0");
  if (!(newton_tol > 0.0)) fail("newton_tol must be > 0");
  if (max_outer_iters < 1) fail("max_outer_iters must be >= 1");
  if (max_newton_iters < 1) fail("max_newton_iters must be >= 1");
  if (max_step_halvings < 0) fail("max_step_halvings must be >= 0");
}

}  // namespace lapnet
