#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ehz/symplin.hpp"

namespace ehz {

/// A sampled generalized Psi-characteristic realizing a capacity.
struct Carrier {
  std::vector<double> times;    // in [0, period]
  std::vector<Vector> points;   // on the boundary, in the body's own coordinates
  double action = 0.0;
  double period_param = 0.0;    // mu: the carrier runs over [0, mu]
  Vector a0;                    // Lagrange constant in E_1
  Vector fixed_point;           // Psi-fixed interior point the solve was centered at
  double boundary_residual = 0.0; // max |j_D(x(t)) - 1|
  double closure_residual = 0.0;  // |x(T) - Psi x(0)|
};

enum class Method { ClosedForm, RootFind, DualSolver, Oracle2D };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed_form";
    case Method::RootFind: return "root_find";
    case Method::DualSolver: return "dual_solver";
    case Method::Oracle2D: return "oracle_2d";
  }
  return "?";
}

struct CapacityResult {
  double value = 0.0;
  Method method = Method::ClosedForm;
  std::optional<Carrier> carrier;
  std::map<std::string, double> diagnostics;
};

}  // namespace ehz
