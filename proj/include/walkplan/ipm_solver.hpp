#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "walkplan/nlp_problem.hpp"

namespace walkplan {

struct SolverOptions {
  double tolerance = 1e-6;      // KKT residual target
  int max_iterations = 3000;
  double mu_init = 0.1;         // initial barrier parameter
  double mu_factor = 0.2;       // monotone reduction factor
  double backtracking_factor = 0.5;
  double fraction_to_boundary = 0.995;
  double regularization_floor = 1e-9;
  double bound_push = 1e-2;     // relative interior shift for the guess
  int lbfgs_memory = 15;
  double sigma_init = 1.0;      // quasi-Newton scaling before any pair
  int log_level = 0;            // 0 silent, 1 iteration lines
  std::ostream* log = nullptr;  // defaults to stderr when log_level > 0
  bool record_trace = false;    // iterate/merit/mu history, for tests

  void validate() const {
    if (tolerance <= 0 || max_iterations <= 0 || mu_init <= 0 ||
        backtracking_factor <= 0 || backtracking_factor >= 1 ||
        mu_factor <= 0 || mu_factor >= 1 || fraction_to_boundary <= 0 ||
        fraction_to_boundary >= 1 || regularization_floor <= 0)
      throw Error("invalid solver options");
  }
};

enum class SolveStatus {
  kConverged,
  kMaxIterations,
  kInfeasibleDetected,
  kNumericFailure,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIterations: return "max-iter";
    case SolveStatus::kInfeasibleDetected: return "infeasible-detected";
    case SolveStatus::kNumericFailure: return "numeric-failure";
  }
  return "unknown";
}

struct SolveResult {
  VecX solution;  // decision variables (no slacks)
  SolveStatus status = SolveStatus::kNumericFailure;
  double kkt_residual = kInf;
  int iterations = 0;
  double objective = kInf;
  std::map<std::string, double> group_violations;
  double wall_time_s = 0.0;
  std::string message;

  // Populated when record_trace is set.
  std::vector<VecX> iterates;
  std::vector<double> mu_trace;
  std::vector<double> merit_trace;

  bool converged() const { return status == SolveStatus::kConverged; }
};

// Solver backend interface; the bundled primal-dual interior-point method
// implements it, and an external bridge can be slotted in without touching
// the transcription.
class NlpBackend {
 public:
  virtual ~NlpBackend() = default;
  virtual SolveResult solve(const NlpProblem& problem, const VecX& guess,
                            const SolverOptions& options) = 0;
};

// Monotone-barrier primal-dual interior point with damped limited-memory
// BFGS Lagrangian curvature, inertia-guarded LDL' KKT solves, and a
// fraction-to-boundary l1-merit line search.
class IpmSolver final : public NlpBackend {
 public:
  SolveResult solve(const NlpProblem& problem, const VecX& guess,
                    const SolverOptions& options) override;
};

inline SolveResult solve(const NlpProblem& problem, const VecX& initial_guess,
                         const SolverOptions& options = {}) {
  IpmSolver solver;
  return solver.solve(problem, initial_guess, options);
}

}  // namespace walkplan
