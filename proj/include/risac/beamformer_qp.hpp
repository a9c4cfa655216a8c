#pragma once

#include <string>

#include "risac/types.hpp"

namespace risac {

// min_w  w^H gram w - Re{a^H w}
// s.t.   Re{v^H w} >= offset,  |w|^2 <= power
struct QpProblem {
  CMat gram;             // Hermitian PSD
  CVec linear;           // a
  CVec halfspace_normal; // v
  double halfspace_offset = 0.0;
  double power = 1.0;
};

enum class QpCase {
  kInterior,        // no constraint active
  kPower,           // power constraint active
  kHalfspace,       // linear constraint active
  kBoth,            // both active
  kDegenerateMinNorm, // objective constant, min-norm feasible point returned
  kWarmFallback,    // previous iterate retained (better objective)
  kInfeasible,
};

struct QpSolution {
  CVec w;
  QpCase kkt_case = QpCase::kInterior;
  double objective = 0.0;
  double halfspace_residual = 0.0; // Re{v^H w} - offset, >= -tol at success
  double power_residual = 0.0;     // power - |w|^2, >= -tol at success
  double lambda = 0.0;             // multiplier of the linear constraint
  double mu = 0.0;                 // multiplier of the power constraint
  int iterations = 0;
  bool converged = false;
  std::string message;
};

const char* qp_case_name(QpCase c);

double qp_objective(const CMat& gram, const CVec& a, const CVec& w);

/// Dense path: eigendecomposes gram directly. Throws std::invalid_argument
/// when gram is not Hermitian PSD within tolerance. An optional warm start is
/// kept instead of the computed point whenever it is feasible and strictly
/// better, so callers looping on solve_qp never lose ground.
QpSolution solve_qp(const QpProblem& problem, double tol_qp,
                    const CVec* warm = nullptr);

/// Fast path for gram = I_copies (x) block: one M-dimensional eigensolve
/// covers all diagonal blocks. Equivalent to solve_qp on the expanded gram.
QpSolution solve_qp_replicated(const CMat& block, int copies, const CVec& a,
                               const CVec& v, double offset, double power,
                               double tol_qp, const CVec* warm = nullptr);

}  // namespace risac
