#include "rbsc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rbsc/errors.hpp"

namespace rbsc {

void LpModel::check_terms(const std::vector<LinTerm>& terms) const {
  for (const LinTerm& t : terms) {
    if (t.var < 0 || t.var >= n_vars())
      throw UnknownVariableError("LP term references undeclared variable " +
                                 std::to_string(t.var));
    if (!std::isfinite(t.coef))
      throw ParameterError("LP coefficient not finite");
  }
}

int LpModel::add_variable(std::string name, double lo, double hi) {
  if (lo != 0.0) throw ParameterError("LP variables must have lower bound 0");
  if (hi < lo) throw ParameterError("LP variable bound lo > hi");
  var_names_.push_back(std::move(name));
  upper_.push_back(hi);
  return n_vars() - 1;
}

int LpModel::add_constraint(std::vector<LinTerm> terms, Sense sense,
                            double rhs, std::string name) {
  check_terms(terms);
  constraints_.push_back({std::move(terms), sense, rhs, std::move(name)});
  return n_constraints() - 1;
}

void LpModel::set_objective(bool maximize, std::vector<LinTerm> terms) {
  check_terms(terms);
  maximize_ = maximize;
  objective_ = std::move(terms);
}

double LpModel::eval_objective(const Eigen::VectorXd& x) const {
  double v = 0;
  for (const LinTerm& t : objective_) v += t.coef * x[t.var];
  return v;
}

double LpModel::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0;
  for (int v = 0; v < n_vars(); ++v) {
    worst = std::max(worst, -x[v]);
    if (upper_[v] < kLpInf) worst = std::max(worst, x[v] - upper_[v]);
  }
  for (const LpConstraint& c : constraints_) {
    double lhs = 0;
    for (const LinTerm& t : c.terms) lhs += t.coef * x[t.var];
    switch (c.sense) {
      case Sense::Le: worst = std::max(worst, lhs - c.rhs); break;
      case Sense::Ge: worst = std::max(worst, c.rhs - lhs); break;
      case Sense::Eq: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

std::string LpModel::to_lp_format() const {
  std::ostringstream out;
  auto emit_terms = [&](const std::vector<LinTerm>& terms) {
    if (terms.empty()) {
      out << "0 " << (var_names_.empty() ? "x0" : var_names_[0]);
      return;
    }
    bool first = true;
    for (const LinTerm& t : terms) {
      double c = t.coef;
      if (first) {
        if (c < 0) out << "- ";
        first = false;
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      out << std::abs(c) << " " << var_names_[t.var];
    }
  };
  out << "\\* rbsc-kit LP dump *\\\n";
  out << (maximize_ ? "Maximize" : "Minimize") << "\n obj: ";
  emit_terms(objective_);
  out << "\nSubject To\n";
  for (int i = 0; i < n_constraints(); ++i) {
    const LpConstraint& c = constraints_[i];
    out << " " << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ": ";
    emit_terms(c.terms);
    switch (c.sense) {
      case Sense::Le: out << " <= "; break;
      case Sense::Ge: out << " >= "; break;
      case Sense::Eq: out << " = "; break;
    }
    out << c.rhs << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < n_vars(); ++v) {
    if (upper_[v] >= kLpInf)
      out << " 0 <= " << var_names_[v] << "\n";
    else
      out << " 0 <= " << var_names_[v] << " <= " << upper_[v] << "\n";
  }
  out << "End\n";
  return out.str();
}

namespace {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class VarState : unsigned char { AtLower, AtUpper, Basic };

// Bounded-variable primal simplex on a dense tableau. Columns are the
// structural variables followed by slacks and artificials; phase 1 minimizes
// the artificial sum from the slack/artificial identity basis.
class Simplex {
 public:
  Simplex(const LpModel& model, const LpOptions& opt)
      : model_(model), opt_(opt) {
    build();
  }

  LpSolution run() {
    LpSolution sol;
    if (n_art_ > 0) {
      Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n_cols_);
      for (int a = 0; a < n_art_; ++a) phase1_cost[art_begin_ + a] = 1.0;
      set_costs(phase1_cost);
      if (!iterate(&sol)) return sol;  // cap exceeded handled by throw
      double art_sum = 0;
      for (int a = 0; a < n_art_; ++a) art_sum += value_of(art_begin_ + a);
      if (art_sum > opt_.feas_tol) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      pin_artificials();
    }
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_cols_);
    double sign = model_.maximize() ? -1.0 : 1.0;
    for (const LinTerm& t : model_.objective_terms())
      cost[t.var] += sign * t.coef;
    set_costs(cost);
    if (!iterate(&sol)) {
      if (sol.status == LpStatus::Unbounded) {
        sol.iterations = iterations_;
        return sol;
      }
      return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.iterations = iterations_;
    sol.values = Eigen::VectorXd::Zero(model_.n_vars());
    for (int v = 0; v < model_.n_vars(); ++v) sol.values[v] = value_of(v);
    // Clamp pivot dust so downstream exact checks see clean numbers.
    for (int v = 0; v < model_.n_vars(); ++v) {
      if (std::abs(sol.values[v]) < 1e-11) sol.values[v] = 0.0;
      double hi = model_.var_upper(v);
      if (hi < kLpInf && sol.values[v] > hi) sol.values[v] = hi;
    }
    double viol = model_.max_violation(sol.values);
    if (viol > kLpTol)
      throw NumericalFailure("simplex returned infeasible point, violation " +
                             std::to_string(viol));
    sol.objective_value = model_.eval_objective(sol.values);
    return sol;
  }

 private:
  const LpModel& model_;
  const LpOptions& opt_;

  int n_rows_ = 0, n_cols_ = 0, slack_begin_ = 0, art_begin_ = 0, n_art_ = 0;
  Matrix tab_;             // n_rows x n_cols, current B^{-1}A
  Eigen::VectorXd x_basic_;
  Eigen::VectorXd upper_;  // per column
  Eigen::VectorXd cost_;
  Eigen::VectorXd reduced_;
  std::vector<int> basis_;
  std::vector<VarState> state_;
  int iterations_ = 0;
  int degenerate_streak_ = 0;

  double value_of(int col) const {
    if (state_[col] == VarState::Basic) {
      for (int i = 0; i < n_rows_; ++i)
        if (basis_[i] == col) return x_basic_[i];
      return 0;
    }
    return state_[col] == VarState::AtUpper ? upper_[col] : 0.0;
  }

  void build() {
    int m = model_.n_constraints();
    int nv = model_.n_vars();
    std::vector<double> rhs(m);
    std::vector<double> row_sign(m, 1.0);
    std::vector<Sense> sense(m);
    for (int i = 0; i < m; ++i) {
      const LpConstraint& c = model_.constraint(i);
      double b = c.rhs;
      Sense s = c.sense;
      if (b < 0) {
        b = -b;
        row_sign[i] = -1.0;
        if (s == Sense::Le) s = Sense::Ge;
        else if (s == Sense::Ge) s = Sense::Le;
      }
      rhs[i] = b;
      sense[i] = s;
    }
    int n_slack = 0, n_art = 0;
    for (int i = 0; i < m; ++i) {
      if (sense[i] != Sense::Eq) ++n_slack;
      if (sense[i] != Sense::Le) ++n_art;
    }
    n_rows_ = m;
    slack_begin_ = nv;
    art_begin_ = nv + n_slack;
    n_art_ = n_art;
    n_cols_ = nv + n_slack + n_art;

    tab_ = Matrix::Zero(n_rows_, n_cols_);
    upper_ = Eigen::VectorXd::Constant(n_cols_, kLpInf);
    for (int v = 0; v < nv; ++v) upper_[v] = model_.var_upper(v);
    x_basic_ = Eigen::VectorXd::Zero(n_rows_);
    basis_.assign(n_rows_, -1);
    state_.assign(n_cols_, VarState::AtLower);

    int slack = slack_begin_, art = art_begin_;
    for (int i = 0; i < m; ++i) {
      const LpConstraint& c = model_.constraint(i);
      for (const LinTerm& t : c.terms) tab_(i, t.var) += row_sign[i] * t.coef;
      x_basic_[i] = rhs[i];
      if (sense[i] == Sense::Le) {
        tab_(i, slack) = 1.0;
        basis_[i] = slack++;
      } else {
        if (sense[i] == Sense::Ge) tab_(i, slack++) = -1.0;
        tab_(i, art) = 1.0;
        basis_[i] = art++;
      }
      // slack column for Ge rows starts nonbasic at 0
    }
    for (int i = 0; i < m; ++i) state_[basis_[i]] = VarState::Basic;
  }

  void set_costs(const Eigen::VectorXd& cost) {
    cost_ = cost;
    reduced_ = cost;
    for (int i = 0; i < n_rows_; ++i) {
      double cb = cost_[basis_[i]];
      if (cb != 0.0) reduced_.noalias() -= cb * tab_.row(i).transpose();
    }
    degenerate_streak_ = 0;
  }

  void pin_artificials() {
    // Drive basic artificials out where possible; pin every artificial at 0.
    for (int i = 0; i < n_rows_; ++i) {
      int b = basis_[i];
      if (b < art_begin_) continue;
      int target = -1;
      for (int j = 0; j < art_begin_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        if (std::abs(tab_(i, j)) > 1e-8) { target = j; break; }
      }
      if (target >= 0) pivot(i, target, value_of(target));
    }
    for (int a = art_begin_; a < n_cols_; ++a) upper_[a] = 0.0;
  }

  void pivot(int row, int col, double entering_value) {
    double piv = tab_(row, col);
    tab_.row(row) /= piv;
    for (int i = 0; i < n_rows_; ++i) {
      if (i == row) continue;
      double f = tab_(i, col);
      if (f != 0.0) tab_.row(i).noalias() -= f * tab_.row(row);
    }
    double rc = reduced_[col];
    if (rc != 0.0) reduced_.noalias() -= rc * tab_.row(row).transpose();
    int leaving = basis_[row];
    state_[leaving] =
        std::abs(value_of_leaving_ - upper_[leaving]) < 1e-9 &&
                upper_[leaving] < kLpInf
            ? VarState::AtUpper
            : VarState::AtLower;
    basis_[row] = col;
    state_[col] = VarState::Basic;
    x_basic_[row] = entering_value;
  }

  double value_of_leaving_ = 0.0;

  // Returns true when optimal; false when Unbounded (status set) and throws
  // NumericalFailure past the iteration cap.
  bool iterate(LpSolution* sol) {
    long long cap =
        std::max(4000LL, static_cast<long long>(opt_.max_iter_factor) *
                             (n_rows_ + n_cols_));
    bool bland = false;
    while (true) {
      if (++iterations_ > cap)
        throw NumericalFailure("simplex iteration cap exceeded (" +
                               std::to_string(cap) + ")");
      int enter = -1;
      int dir = +1;
      if (!bland) {
        double best = opt_.pivot_tol;
        for (int j = 0; j < n_cols_; ++j) {
          if (state_[j] == VarState::Basic) continue;
          if (upper_[j] <= 0.0 && j >= art_begin_) continue;  // pinned
          double d = reduced_[j];
          if (state_[j] == VarState::AtLower) {
            if (-d > best) { best = -d; enter = j; dir = +1; }
          } else {
            if (d > best) { best = d; enter = j; dir = -1; }
          }
        }
      } else {
        for (int j = 0; j < n_cols_; ++j) {
          if (state_[j] == VarState::Basic) continue;
          if (upper_[j] <= 0.0 && j >= art_begin_) continue;
          double d = reduced_[j];
          if (state_[j] == VarState::AtLower && d < -opt_.pivot_tol) {
            enter = j; dir = +1; break;
          }
          if (state_[j] == VarState::AtUpper && d > opt_.pivot_tol) {
            enter = j; dir = -1; break;
          }
        }
      }
      if (enter < 0) return true;  // optimal for current costs

      // Ratio test with bound flips.
      double limit = kLpInf;
      int leave_row = -1;
      bool flip = false;
      if (upper_[enter] < kLpInf) {
        limit = upper_[enter];
        flip = true;
      }
      for (int i = 0; i < n_rows_; ++i) {
        double coef = dir * tab_(i, enter);
        double t;
        if (coef > opt_.pivot_tol) {
          t = x_basic_[i] / coef;
        } else if (coef < -opt_.pivot_tol) {
          double hi = upper_[basis_[i]];
          if (hi >= kLpInf) continue;
          t = (hi - x_basic_[i]) / (-coef);
        } else {
          continue;
        }
        if (t < limit - 1e-12 ||
            (t < limit + 1e-12 &&
             (flip || (leave_row >= 0 && basis_[i] < basis_[leave_row])))) {
          limit = std::max(t, 0.0);
          leave_row = i;
          flip = false;
        }
      }
      if (limit >= kLpInf) {
        sol->status = LpStatus::Unbounded;
        return false;
      }
      degenerate_streak_ = limit <= 1e-11 ? degenerate_streak_ + 1 : 0;
      if (degenerate_streak_ > opt_.degeneracy_threshold) bland = true;

      double start = state_[enter] == VarState::AtUpper ? upper_[enter] : 0.0;
      double step = dir * limit;
      // Move basics along the direction.
      if (limit > 0.0)
        x_basic_.noalias() -= limit * (dir * tab_.col(enter));
      if (leave_row < 0) {
        state_[enter] =
            state_[enter] == VarState::AtLower ? VarState::AtUpper
                                               : VarState::AtLower;
        continue;
      }
      value_of_leaving_ = x_basic_[leave_row];
      pivot(leave_row, enter, start + step);
    }
  }
};

}  // namespace

LpSolution lp_solve(const LpModel& model, const LpOptions& options) {
  if (model.n_constraints() == 0) {
    // Pure bound problem: each variable sits at whichever bound the
    // objective prefers.
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.values = Eigen::VectorXd::Zero(model.n_vars());
    double sign = model.maximize() ? 1.0 : -1.0;
    Eigen::VectorXd pref = Eigen::VectorXd::Zero(model.n_vars());
    for (const LinTerm& t : model.objective_terms()) pref[t.var] += t.coef;
    for (int v = 0; v < model.n_vars(); ++v) {
      if (sign * pref[v] > 0) {
        if (model.var_upper(v) >= kLpInf) {
          sol.status = LpStatus::Unbounded;
          return sol;
        }
        sol.values[v] = model.var_upper(v);
      }
    }
    sol.objective_value = model.eval_objective(sol.values);
    return sol;
  }
  Simplex simplex(model, options);
  return simplex.run();
}

}  // namespace rbsc
