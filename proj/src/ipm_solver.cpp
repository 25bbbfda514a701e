#include "walkplan/ipm_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <iostream>

#include "walkplan/kinematics.hpp"

namespace walkplan {

namespace {

constexpr double kKappaEps = 10.0;    // barrier stage tolerance factor
constexpr double kKappaSigma = 1e10;  // bound-multiplier safeguard
constexpr double kArmijoEta = 1e-4;
constexpr double kPenaltyRho = 0.5;

struct BfgsMemory {
  std::deque<VecX> s_list, y_list;
  double sigma;
  int capacity;

  // Compact representation of B = sigma I + U Cmat U', with Cmat = -Mmid^-1.
  MatX U;     // nz x 2M
  MatX Mmid;  // 2M x 2M, [[sigma S'S, L],[L', -D]]
  Eigen::PartialPivLU<MatX> Mmid_lu;
  bool has_pairs = false;

  explicit BfgsMemory(int cap, double sigma_init)
      : sigma(sigma_init), capacity(cap) {}

  void reset(double sigma_init) {
    s_list.clear();
    y_list.clear();
    sigma = sigma_init;
    has_pairs = false;
  }

  int pairs() const { return static_cast<int>(s_list.size()); }

  VecX multiply(const VecX& v) const {
    VecX out = sigma * v;
    if (has_pairs) out -= U * Mmid_lu.solve(U.transpose() * v);
    return out;
  }

  void rebuild() {
    const int M = pairs();
    has_pairs = M > 0;
    if (!has_pairs) return;
    const int nz = static_cast<int>(s_list[0].size());
    MatX S(nz, M), Y(nz, M);
    for (int i = 0; i < M; ++i) {
      S.col(i) = s_list[i];
      Y.col(i) = y_list[i];
    }
    U.resize(nz, 2 * M);
    U.leftCols(M) = sigma * S;
    U.rightCols(M) = Y;
    MatX StS = S.transpose() * S;
    MatX StY = S.transpose() * Y;
    Mmid.resize(2 * M, 2 * M);
    Mmid.topLeftCorner(M, M) = sigma * StS;
    MatX Lmat = StY.triangularView<Eigen::StrictlyLower>();
    Mmid.topRightCorner(M, M) = Lmat;
    Mmid.bottomLeftCorner(M, M) = Lmat.transpose();
    Mmid.bottomRightCorner(M, M) = -StY.diagonal().asDiagonal();
    Mmid_lu.compute(Mmid);
  }

  // Powell-damped update; keeps B positive definite.
  void update(const VecX& s, const VecX& y_raw) {
    const double s_norm = s.norm();
    if (s_norm < 1e-14) return;
    const VecX Bs = multiply(s);
    const double sBs = s.dot(Bs);
    if (!(sBs > 0)) return;
    double sy = s.dot(y_raw);
    VecX y = y_raw;
    if (sy < 0.2 * sBs) {
      const double theta = 0.8 * sBs / (sBs - sy);
      y = theta * y_raw + (1.0 - theta) * Bs;
      sy = s.dot(y);
    }
    if (sy <= 1e-12 * s_norm * y.norm()) return;
    s_list.push_back(s);
    y_list.push_back(y);
    if (pairs() > capacity) {
      s_list.pop_front();
      y_list.pop_front();
    }
    sigma = std::min(std::max(y.squaredNorm() / sy, 1e-6), 1e8);
    rebuild();
  }
};

struct Ipm {
  const NlpProblem& P;
  SolverOptions opt;

  int nz, me, mi, nx, m;
  VecX xl, xu;  // bounds over x = (z, slacks)
  std::vector<char> has_lb, has_ub;

  VecX x, y, zL, zU;
  double mu;
  double nu = 1.0;  // l1 penalty

  // current evaluation
  double f = 0.0;
  VecX gradf;       // nz
  VecX c;           // m, [c_eq; c_ineq - s]
  SpMat JE, JI;     // over z columns
  bool eval_ok = false;

  // previous-iteration data for the BFGS pair
  bool has_prev = false;
  VecX prev_z, prev_gradf;
  SpMat prev_JE, prev_JI;

  BfgsMemory bfgs;

  // KKT machinery
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt;
  bool analyzed = false;
  double delta_p = 0.0, delta_d = 0.0;
  MatX smw_V;  // K0^-1 Uhat
  MatX smw_G;
  Eigen::PartialPivLU<MatX> smw_G_lu;
  MatX Uhat;
  SpMat K0;

  SolveResult result;

  Ipm(const NlpProblem& problem, const SolverOptions& options)
      : P(problem), opt(options), bfgs(options.lbfgs_memory, options.sigma_init) {
    nz = P.num_vars;
    me = P.num_eq();
    mi = P.num_ineq();
    nx = nz + mi;
    m = me + mi;

    xl = VecX::Constant(nx, -kInf);
    xu = VecX::Constant(nx, kInf);
    xl.head(nz) = P.lb;
    xu.head(nz) = P.ub;
    // slack bounds: c_ineq in [0, upper]
    int row = 0;
    for (const auto& b : P.inequalities) {
      for (int r = 0; r < b.dim; ++r) {
        xl(nz + row) = 0.0;
        xu(nz + row) = b.upper.size() ? b.upper(r) : kInf;
        ++row;
      }
    }
    has_lb.resize(nx);
    has_ub.resize(nx);
    for (int i = 0; i < nx; ++i) {
      has_lb[i] = std::isfinite(xl(i));
      has_ub[i] = std::isfinite(xu(i));
      if (has_lb[i] && has_ub[i] && xl(i) >= xu(i))
        throw Error("fixed or crossed variable bounds are not supported");
    }
  }

  // ---- evaluation -------------------------------------------------------

  bool evaluate(const VecX& xe) {
    const VecX z = xe.head(nz);
    try {
      f = P.eval_objective(z);
      gradf = P.objective_gradient(z);
      VecX ceq = P.eval_equalities(z);
      VecX cin = P.eval_inequalities(z);
      c.resize(m);
      c.head(me) = ceq;
      c.tail(mi) = cin - xe.tail(mi);
      JE = P.equality_jacobian(z);
      JI = P.inequality_jacobian(z);
    } catch (const std::exception&) {
      return false;
    }
    if (!std::isfinite(f) || !c.allFinite() || !gradf.allFinite()) return false;
    return true;
  }

  // Objective plus barrier; +inf on evaluation failure.
  double barrier_value(const VecX& xe, double& constraint_l1) const {
    const VecX z = xe.head(nz);
    double val;
    VecX ceq, cin;
    try {
      val = P.eval_objective(z);
      ceq = P.eval_equalities(z);
      cin = P.eval_inequalities(z);
    } catch (const std::exception&) {
      constraint_l1 = kInf;
      return kInf;
    }
    if (!std::isfinite(val) || !ceq.allFinite() || !cin.allFinite()) {
      constraint_l1 = kInf;
      return kInf;
    }
    for (int i = 0; i < nx; ++i) {
      if (has_lb[i]) {
        const double gap = xe(i) - xl(i);
        if (gap <= 0) return kInf;
        val -= mu * std::log(gap);
      }
      if (has_ub[i]) {
        const double gap = xu(i) - xe(i);
        if (gap <= 0) return kInf;
        val -= mu * std::log(gap);
      }
    }
    constraint_l1 = ceq.lpNorm<1>();
    for (int i = 0; i < mi; ++i)
      constraint_l1 += std::abs(cin(i) - xe(nz + i));
    return val;
  }

  // gradient of the barrier objective w.r.t. x
  VecX barrier_gradient(const VecX& xe) const {
    VecX g = VecX::Zero(nx);
    g.head(nz) = gradf;
    for (int i = 0; i < nx; ++i) {
      if (has_lb[i]) g(i) -= mu / (xe(i) - xl(i));
      if (has_ub[i]) g(i) += mu / (xu(i) - xe(i));
    }
    return g;
  }

  // J' y over x, with J = [JE 0; JI -I]
  VecX jac_t_y(const VecX& ym) const {
    VecX out = VecX::Zero(nx);
    out.head(nz) = JE.transpose() * ym.head(me) + JI.transpose() * ym.tail(mi);
    out.tail(mi) = -ym.tail(mi);
    return out;
  }

  VecX jac_times(const VecX& v) const {
    VecX out(m);
    out.head(me) = JE * v.head(nz);
    out.tail(mi) = JI * v.head(nz) - v.tail(mi);
    return out;
  }

  VecX grad_lagrangian_z(const VecX& grad_f, const SpMat& je, const SpMat& ji,
                         const VecX& ym) const {
    return grad_f + je.transpose() * ym.head(me) +
           ji.transpose() * ym.tail(mi);
  }

  // ---- KKT residuals ----------------------------------------------------

  double kkt_error(double mu_val) const {
    const VecX r_dual = gradf_full() + jac_t_y(y) - zl_masked() + zu_masked();
    double comp = 0.0;
    double dual_scale = 0.0;
    int count = 0;
    for (int i = 0; i < nx; ++i) {
      if (has_lb[i]) {
        comp = std::max(comp, std::abs((x(i) - xl(i)) * zL(i) - mu_val));
        dual_scale += std::abs(zL(i));
        ++count;
      }
      if (has_ub[i]) {
        comp = std::max(comp, std::abs((xu(i) - x(i)) * zU(i) - mu_val));
        dual_scale += std::abs(zU(i));
        ++count;
      }
    }
    const double s_max = 100.0;
    const double sd =
        std::max(s_max, (y.lpNorm<1>() + dual_scale) / std::max(1, m + count)) /
        s_max;
    const double sc =
        std::max(s_max, dual_scale / std::max(1, count)) / s_max;
    const double pri = m ? c.lpNorm<Eigen::Infinity>() : 0.0;
    return std::max({r_dual.lpNorm<Eigen::Infinity>() / sd, pri, comp / sc});
  }

  VecX gradf_full() const {
    VecX g = VecX::Zero(nx);
    g.head(nz) = gradf;
    return g;
  }
  VecX zl_masked() const { return zL; }
  VecX zu_masked() const { return zU; }

  // ---- KKT solve --------------------------------------------------------

  void assemble_kkt() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(JE.nonZeros() + JI.nonZeros() + nx + m + mi);
    // (1,1) diagonal: sigma (z part) + bound Sigma + delta_p
    for (int i = 0; i < nx; ++i) {
      double d = delta_p + (i < nz ? bfgs.sigma : 0.0);
      if (has_lb[i]) d += zL(i) / (x(i) - xl(i));
      if (has_ub[i]) d += zU(i) / (xu(i) - x(i));
      trip.emplace_back(i, i, d);
    }
    // J rows below the diagonal block
    for (int k = 0; k < JE.outerSize(); ++k)
      for (SpMat::InnerIterator it(JE, k); it; ++it)
        trip.emplace_back(nx + static_cast<int>(it.row()),
                          static_cast<int>(it.col()), it.value());
    for (int k = 0; k < JI.outerSize(); ++k)
      for (SpMat::InnerIterator it(JI, k); it; ++it)
        trip.emplace_back(nx + me + static_cast<int>(it.row()),
                          static_cast<int>(it.col()), it.value());
    for (int i = 0; i < mi; ++i)
      trip.emplace_back(nx + me + i, nz + i, -1.0);
    for (int r = 0; r < m; ++r)
      trip.emplace_back(nx + r, nx + r, -delta_d);

    K0.resize(nx + m, nx + m);
    K0.setFromTriplets(trip.begin(), trip.end());
  }

  bool factor_kkt() {
    // Quasi-definiteness makes the signed pivot counts exact; bump the
    // primal regularization until the inertia is (nx, m).
    delta_d = opt.regularization_floor;
    double dp = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      delta_p = dp;
      assemble_kkt();
      if (!analyzed) {
        ldlt.analyzePattern(K0);
        analyzed = true;
      }
      ldlt.factorize(K0);
      if (ldlt.info() == Eigen::Success) {
        int pos = 0, neg = 0;
        const auto& D = ldlt.vectorD();
        for (int i = 0; i < D.size(); ++i) {
          if (D(i) > 0)
            ++pos;
          else if (D(i) < 0)
            ++neg;
        }
        if (pos == nx && neg == m) {
          prepare_smw();
          return true;
        }
      }
      dp = (dp == 0.0) ? opt.regularization_floor * 10 : dp * 100;
    }
    return false;
  }

  void prepare_smw() {
    if (!bfgs.has_pairs) return;
    const int w = static_cast<int>(bfgs.U.cols());
    Uhat = MatX::Zero(nx + m, w);
    Uhat.topRows(nz) = bfgs.U;
    smw_V = ldlt.solve(Uhat);
    // K = K0 + Uhat C Uhat' with C = -Mmid^-1  =>  G = C^-1 + Uhat' V
    smw_G = -bfgs.Mmid + Uhat.transpose() * smw_V;
    smw_G_lu.compute(smw_G);
  }

  VecX solve_kkt(const VecX& rhs) const {
    VecX t = ldlt.solve(rhs);
    if (bfgs.has_pairs)
      t -= smw_V * smw_G_lu.solve(Uhat.transpose() * t);
    return t;
  }

  VecX apply_kkt(const VecX& v) const {
    VecX out = K0.selfadjointView<Eigen::Lower>() * v;
    if (bfgs.has_pairs)
      out -= Uhat * bfgs.Mmid_lu.solve(Uhat.transpose() * v);
    return out;
  }

  // ---- line search helpers ---------------------------------------------

  double max_primal_step(const VecX& dx, double tau) const {
    double alpha = 1.0;
    for (int i = 0; i < nx; ++i) {
      if (has_lb[i] && dx(i) < 0)
        alpha = std::min(alpha, -tau * (x(i) - xl(i)) / dx(i));
      if (has_ub[i] && dx(i) > 0)
        alpha = std::min(alpha, tau * (xu(i) - x(i)) / dx(i));
    }
    return alpha;
  }

  double max_dual_step(const VecX& dzl, const VecX& dzu, double tau) const {
    double alpha = 1.0;
    for (int i = 0; i < nx; ++i) {
      if (has_lb[i] && dzl(i) < 0) alpha = std::min(alpha, -tau * zL(i) / dzl(i));
      if (has_ub[i] && dzu(i) < 0) alpha = std::min(alpha, -tau * zU(i) / dzu(i));
    }
    return alpha;
  }

  void clip_bound_duals() {
    for (int i = 0; i < nx; ++i) {
      if (has_lb[i]) {
        const double gap = x(i) - xl(i);
        zL(i) = std::min(std::max(zL(i), mu / (kKappaSigma * gap)),
                         kKappaSigma * mu / gap);
      }
      if (has_ub[i]) {
        const double gap = xu(i) - x(i);
        zU(i) = std::min(std::max(zU(i), mu / (kKappaSigma * gap)),
                         kKappaSigma * mu / gap);
      }
    }
  }

  // ---- initialization ---------------------------------------------------

  void initialize(const VecX& guess) {
    if (guess.size() != nz) throw Error("initial guess has wrong dimension");
    x = VecX::Zero(nx);
    x.head(nz) = guess;
    // slacks start at the inequality values
    VecX cin = P.eval_inequalities(guess);
    x.tail(mi) = cin;

    // push into the strict interior
    const double kappa = std::max(opt.bound_push, 1e-12);
    for (int i = 0; i < nx; ++i) {
      if (has_lb[i] && has_ub[i]) {
        const double span = xu(i) - xl(i);
        const double pl = std::min(kappa * std::max(1.0, std::abs(xl(i))),
                                   0.25 * span);
        const double pu = std::min(kappa * std::max(1.0, std::abs(xu(i))),
                                   0.25 * span);
        x(i) = std::min(std::max(x(i), xl(i) + pl), xu(i) - pu);
      } else if (has_lb[i]) {
        x(i) = std::max(x(i), xl(i) + kappa * std::max(1.0, std::abs(xl(i))));
      } else if (has_ub[i]) {
        x(i) = std::min(x(i), xu(i) - kappa * std::max(1.0, std::abs(xu(i))));
      }
    }

    mu = opt.mu_init;
    zL = VecX::Zero(nx);
    zU = VecX::Zero(nx);
    for (int i = 0; i < nx; ++i) {
      if (has_lb[i]) zL(i) = std::min(std::max(mu / (x(i) - xl(i)), 1e-8), 1e8);
      if (has_ub[i]) zU(i) = std::min(std::max(mu / (xu(i) - x(i)), 1e-8), 1e8);
    }
    y = VecX::Zero(m);
  }

  void least_squares_multipliers() {
    // one KKT solve with B = sigma I estimates y from the dual residual
    if (m == 0) return;
    if (!factor_kkt()) return;
    VecX rhs = VecX::Zero(nx + m);
    rhs.head(nx) = -(gradf_full() - zl_masked() + zu_masked());
    VecX sol = solve_kkt(rhs);
    VecX y_est = sol.tail(m);
    if (y_est.lpNorm<Eigen::Infinity>() <= 1e3) y = y_est;
  }

  // ---- main loop --------------------------------------------------------

  SolveResult run(const VecX& guess) {
    const auto t_start = std::chrono::steady_clock::now();
    opt.validate();
    P.validate();
    initialize(guess);

    auto fail = [&](SolveStatus st, const std::string& msg, int iter) {
      result.status = st;
      result.message = msg;
      finish(iter, t_start);
      return result;
    };

    if (!evaluate(x))
      return fail(SolveStatus::kNumericFailure,
                  "evaluation failed at the initial point", 0);
    least_squares_multipliers();

    std::ostream* log = opt.log ? opt.log : &std::cerr;
    int consecutive_failures = 0;
    const double mu_floor = std::max(1e-14, opt.tolerance / 100.0);

    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
      // quasi-Newton curvature from the Lagrangian gradient displacement
      if (has_prev) {
        const VecX z_cur = x.head(nz);
        const VecX y_s = bfgs_pair_s(z_cur);
        const VecX y_v = grad_lagrangian_z(gradf, JE, JI, y) -
                         grad_lagrangian_z(prev_gradf, prev_JE, prev_JI, y);
        bfgs.update(y_s, y_v);
      }
      prev_z = x.head(nz);
      prev_gradf = gradf;
      prev_JE = JE;
      prev_JI = JI;
      has_prev = true;

      // convergence / barrier update
      const double e0 = kkt_error(0.0);
      if (opt.record_trace) {
        result.iterates.push_back(x.head(nz));
        result.mu_trace.push_back(mu);
      }
      if (e0 <= opt.tolerance) {
        result.status = SolveStatus::kConverged;
        result.message = "first-order optimality reached";
        finish(iter, t_start);
        return result;
      }
      while (kkt_error(mu) <= kKappaEps * mu && mu > mu_floor) {
        mu = std::max(mu_floor, mu * opt.mu_factor);
        clip_bound_duals();
      }

      if (!factor_kkt())
        return fail(SolveStatus::kNumericFailure,
                    "KKT factorization failed despite regularization", iter);

      // primal-dual step
      VecX rhs(nx + m);
      rhs.head(nx) = -(barrier_gradient(x) + jac_t_y(y));
      rhs.tail(m) = -c;
      VecX step = solve_kkt(rhs);
      // one round of iterative refinement against the updated system
      {
        VecX resid = rhs - apply_kkt(step);
        step += solve_kkt(resid);
      }
      const VecX dx = step.head(nx);
      const VecX dy = step.tail(m);

      VecX dzl = VecX::Zero(nx), dzu = VecX::Zero(nx);
      for (int i = 0; i < nx; ++i) {
        if (has_lb[i]) {
          const double gap = x(i) - xl(i);
          dzl(i) = mu / gap - zL(i) - (zL(i) / gap) * dx(i);
        }
        if (has_ub[i]) {
          const double gap = xu(i) - x(i);
          dzu(i) = mu / gap - zU(i) + (zU(i) / gap) * dx(i);
        }
      }

      const double tau = std::max(opt.fraction_to_boundary, 1.0 - mu);
      const double alpha_max = max_primal_step(dx, tau);
      const double alpha_dual = max_dual_step(dzl, dzu, tau);

      // l1 penalty large enough to make the step a descent direction
      double cl1 = 0.0;
      const double phi0 = barrier_value(x, cl1);
      const VecX grad_phi = barrier_gradient(x);
      const double g_dx = grad_phi.dot(dx);
      if (cl1 > 1e-12) {
        const double nu_req = std::abs(g_dx) / ((1.0 - kPenaltyRho) * cl1);
        const double nu_mult =
            (y + dy).lpNorm<Eigen::Infinity>() * 1.1;
        nu = std::max({nu, nu_req * 1.1, nu_mult});
      }
      const double merit0 = phi0 + nu * cl1;
      const double descent = g_dx - nu * cl1;

      double alpha = alpha_max;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        double cl1_trial = 0.0;
        const double phi_trial = barrier_value(x + alpha * dx, cl1_trial);
        const double merit_trial = phi_trial + nu * cl1_trial;
        if (std::isfinite(merit_trial) &&
            merit_trial <= merit0 + kArmijoEta * alpha * std::min(descent, 0.0)) {
          accepted = true;
          break;
        }
        alpha *= opt.backtracking_factor;
        if (alpha < 1e-14) break;
      }

      if (!accepted) {
        ++consecutive_failures;
        if (consecutive_failures == 1) {
          bfgs.reset(opt.sigma_init);  // curvature may be stale
          continue;
        }
        const double pri_inf = c.lpNorm<Eigen::Infinity>();
        if (pri_inf > 10.0 * opt.tolerance)
          return fail(SolveStatus::kInfeasibleDetected,
                      "line search failed with infeasible constraints "
                      "(restoration failure)",
                      iter);
        return fail(SolveStatus::kNumericFailure,
                    "line search failed near a feasible point", iter);
      }
      consecutive_failures = 0;

      x += alpha * dx;
      y += alpha * dy;
      zL += alpha_dual * dzl;
      zU += alpha_dual * dzu;
      clip_bound_duals();

      if (opt.record_trace) {
        double cl1_acc = 0.0;
        const double phi_acc = barrier_value(x, cl1_acc);
        result.merit_trace.push_back(phi_acc + nu * cl1_acc);
      }

      if (!evaluate(x))
        return fail(SolveStatus::kNumericFailure,
                    "evaluation failed after an accepted step", iter);

      if (opt.log_level >= 1) {
        char line[160];
        std::snprintf(line, sizeof line,
                      "%4d  obj %+.8e  pri %.3e  dual %.3e  mu %.2e  "
                      "alpha %.2e",
                      iter, f, c.lpNorm<Eigen::Infinity>(),
                      (gradf_full() + jac_t_y(y) - zl_masked() + zu_masked())
                          .lpNorm<Eigen::Infinity>(),
                      mu, alpha);
        (*log) << line << "\n";
      }
    }

    result.status = SolveStatus::kMaxIterations;
    result.message = "iteration limit reached";
    finish(iter, t_start);
    return result;
  }

  VecX bfgs_pair_s(const VecX& z_cur) const { return z_cur - prev_z; }

  void finish(int iterations, std::chrono::steady_clock::time_point t0) {
    result.iterations = iterations;
    result.solution = x.head(nz);
    result.objective = f;
    result.kkt_residual = kkt_error(0.0);
    const VecX z = x.head(nz);
    VecX ceq, cin;
    try {
      ceq = P.eval_equalities(z);
      cin = P.eval_inequalities(z);
    } catch (const std::exception&) {
      ceq = VecX::Zero(me);
      cin = VecX::Zero(mi);
    }
    for (const auto& [name, ranges] : P.equality_groups()) {
      double v = 0.0;
      for (auto [lo, hi] : ranges)
        for (int r = lo; r < hi; ++r) v = std::max(v, std::abs(ceq(r)));
      result.group_violations[name] = v;
    }
    int row = 0;
    std::map<std::string, double> ineq_viol;
    for (const auto& b : P.inequalities) {
      double& v = ineq_viol[b.group];
      v = std::max(v, 0.0);
      for (int r = 0; r < b.dim; ++r, ++row) {
        v = std::max(v, -cin(row));
        if (b.upper.size()) v = std::max(v, cin(row) - b.upper(r));
      }
    }
    for (auto& [name, v] : ineq_viol) result.group_violations[name] = v;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }
};

}  // namespace

SolveResult IpmSolver::solve(const NlpProblem& problem, const VecX& guess,
                             const SolverOptions& options) {
  Ipm ipm(problem, options);
  return ipm.run(guess);
}

}  // namespace walkplan
