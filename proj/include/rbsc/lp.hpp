#ifndef RBSC_LP_HPP
#define RBSC_LP_HPP

#include <Eigen/Core>
#include <limits>
#include <string>
#include <vector>

namespace rbsc {

constexpr double kLpInf = std::numeric_limits<double>::infinity();
// Feasibility/optimality tolerance for accepting solutions.
constexpr double kLpTol = 1e-7;

enum class Sense { Le, Ge, Eq };

struct LinTerm {
  int var;
  double coef;
};

struct LpConstraint {
  std::vector<LinTerm> terms;
  Sense sense = Sense::Le;
  double rhs = 0.0;
  std::string name;
};

// Sparse LP over variables with bounds [0, hi], hi possibly infinite.
// Models are value types; adding a constraint and re-solving is the cutting
// plane loop used throughout.
class LpModel {
 public:
  int add_variable(std::string name, double lo = 0.0, double hi = kLpInf);
  int add_constraint(std::vector<LinTerm> terms, Sense sense, double rhs,
                     std::string name = "");
  void set_objective(bool maximize, std::vector<LinTerm> terms);

  int n_vars() const { return static_cast<int>(var_names_.size()); }
  int n_constraints() const { return static_cast<int>(constraints_.size()); }
  const LpConstraint& constraint(int i) const { return constraints_[i]; }
  const std::string& var_name(int v) const { return var_names_[v]; }
  double var_upper(int v) const { return upper_[v]; }
  bool maximize() const { return maximize_; }
  const std::vector<LinTerm>& objective_terms() const { return objective_; }

  double eval_objective(const Eigen::VectorXd& x) const;
  // Largest constraint/bound violation of a point; <= tau means feasible.
  double max_violation(const Eigen::VectorXd& x) const;

  // CPLEX-style LP text format, for external cross-checking (flag-gated in
  // the CLI).
  std::string to_lp_format() const;

 private:
  std::vector<std::string> var_names_;
  std::vector<double> upper_;
  std::vector<LpConstraint> constraints_;
  std::vector<LinTerm> objective_;
  bool maximize_ = false;

  void check_terms(const std::vector<LinTerm>& terms) const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd values;
  double objective_value = 0.0;
  int iterations = 0;

  double value(int var) const { return values[var]; }
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double feas_tol = kLpTol;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degeneracy_threshold = 120;
  // Hard iteration cap factor; exceeded -> NumericalFailure.
  int max_iter_factor = 60;
};

LpSolution lp_solve(const LpModel& model, const LpOptions& options = {});

}  // namespace rbsc

#endif  // RBSC_LP_HPP
