#include "walkplan/transcription.hpp"

#include <Eigen/Dense>
#include <numeric>

namespace walkplan {

namespace {

std::vector<int> iota_range(int start, int count) {
  std::vector<int> v(count);
  std::iota(v.begin(), v.end(), start);
  return v;
}

// Contact point bookkeeping: which frame carries each point and its offset.
struct PointTable {
  std::vector<int> frame;    // frame index per point
  std::vector<Vec3> offset;  // foot-frame offset per point
  std::vector<int> foot;     // foot index per point

  static PointTable build(const KinematicModel& model) {
    PointTable t;
    for (size_t fi = 0; fi < model.feet.size(); ++fi) {
      const Foot& foot = model.feet[fi];
      const int frame = model.frame_index(foot.frame);
      if (frame < 0) throw Error("foot frame missing: " + foot.frame);
      for (const Vec3& o : foot.contact_offsets) {
        t.frame.push_back(frame);
        t.offset.push_back(o);
        t.foot.push_back(static_cast<int>(fi));
      }
    }
    return t;
  }

  int count() const { return static_cast<int>(frame.size()); }
};

}  // namespace

FullState make_static_stance(const KinematicModel& model,
                             const GroundModel& ground, const VecX& q0) {
  const PointTable table = PointTable::build(model);
  const int P = table.count();
  if (P == 0) throw Error("stance needs a model with contact points");

  VariableLayout layout(P, model.num_joints());
  FullState state(layout);
  VecX q = q0.size() ? q0 : VecX::Zero(model.num_joints());
  if (q.size() != model.num_joints())
    throw Error("stance joint vector has wrong dimension");
  state.joints() = q;

  // Drop the base along the ground normal until the lowest point touches.
  BasePose base;
  auto poses = link_poses<double>(model, base.position, base.quaternion, q);
  double h_min = kInf;
  for (int i = 0; i < P; ++i) {
    const Vec3 p = frame_pose(model, poses, table.frame[i]) * table.offset[i];
    h_min = std::min(h_min, ground.height<double>(p));
  }
  base.position -= h_min * ground.normal;

  state.base_pos() = base.position;
  state.base_quat() = base.quaternion;
  poses = link_poses<double>(model, base.position, base.quaternion, q);
  for (int i = 0; i < P; ++i)
    state.point(i) = frame_pose(model, poses, table.frame[i]) * table.offset[i];
  const Vec3 com = com_position_t(model, poses);
  state.com() = com;
  state.momentum().setZero();

  // Static equilibrium: min ||f - f0||^2 s.t. sum f = W, sum (p-c) x f = 0,
  // with f0 an equal vertical share. Symmetric stances keep f = f0 exactly.
  const double weight = model.total_mass() * kGravity;
  VecX f0 = VecX::Zero(3 * P);
  for (int i = 0; i < P; ++i) f0(3 * i + 2) = weight / P;
  MatX A = MatX::Zero(6, 3 * P);
  for (int i = 0; i < P; ++i) {
    A.block<3, 3>(0, 3 * i) = Mat3::Identity();
    A.block<3, 3>(3, 3 * i) = skew<double>(Vec3(state.point(i)) - com);
  }
  Vec6 b;
  b << 0, 0, weight, 0, 0, 0;
  Vec6 correction = (A * A.transpose()).ldlt().solve(b - A * f0);
  VecX f = f0 + A.transpose() * correction;
  for (int i = 0; i < P; ++i) state.force(i) = f.segment<3>(3 * i);
  return state;
}

Ocp build_ocp(std::shared_ptr<const KinematicModel> model,
              const GroundModel& ground, const ContactParams& params,
              const TaskReferences& refs, const TaskWeights& weights,
              const OcpConfig& config, const FullState& initial_state,
              const KnotSchedule& schedule) {
  config.validate();
  params.validate();
  ground.validate();
  refs.validate();
  weights.validate();
  if (!schedule.empty() &&
      static_cast<int>(schedule.size()) != config.horizon)
    throw Error("weight schedule length does not match the horizon");

  const KinematicModel& m = *model;
  const PointTable table = PointTable::build(m);
  const int P = table.count();
  const int n = m.num_joints();
  VariableLayout L(P, n);
  if (initial_state.layout.num_points != P ||
      initial_state.layout.num_joints != n ||
      initial_state.x.size() != L.dim_x())
    throw Error("initial state layout does not match the model");

  // Consistency preconditions on the pinned knot.
  if (std::abs(initial_state.base_quat().norm() - 1.0) > 1e-6)
    throw Error("initial state quaternion is not unit length");
  for (int i = 0; i < P; ++i)
    if (ground.height<double>(initial_state.point(i)) < -1e-6)
      throw Error("initial contact point below ground: point " +
                  std::to_string(i));

  Ocp ocp;
  ocp.model = model;
  ocp.ground = ground;
  ocp.params = params;
  ocp.config = config;
  ocp.layout = DecisionLayout{L, config.horizon};
  ocp.com_z_min_resolved = std::isnan(config.com_z_min)
                               ? 0.5 * initial_state.com()(2)
                               : config.com_z_min;

  NlpProblem& nlp = ocp.nlp;
  nlp.num_vars = ocp.layout.num_vars();
  nlp.lb = VecX::Constant(nlp.num_vars, -kInf);
  nlp.ub = VecX::Constant(nlp.num_vars, kInf);

  const int N = config.horizon;
  const int kd = ocp.layout.knot_dim();
  const int dim_x = L.dim_x();
  const double dt = config.dt;
  const double gravity = config.gravity;

  // ---- variable bounds -----------------------------------------------
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < P; ++i) {
      for (int c = 0; c < 3; ++c) {
        const int idx = ocp.layout.u_index(k, L.u_point_vel(i) + c);
        nlp.lb(idx) = -params.M_V(c);
        nlp.ub(idx) = params.M_V(c);
      }
    }
    for (int c = 0; c < 3; ++c) {
      const int idx = ocp.layout.x_index(k, L.x_momentum() + 3 + c);
      nlp.lb(idx) = -config.angular_momentum_bound;
      nlp.ub(idx) = config.angular_momentum_bound;
    }
    const int com_z = ocp.layout.x_index(k, L.x_com() + 2);
    nlp.lb(com_z) = ocp.com_z_min_resolved;
  }

  // ---- equality: knot 0 pinned to the initial state -------------------
  {
    ConstraintBlock b;
    b.group = "initial_state";
    b.vars = iota_range(ocp.layout.x_start(0), dim_x);
    b.dim = dim_x;
    const VecX xhat = initial_state.x;
    b.fn = make_function(dim_x, dim_x, [xhat](const auto& loc, auto& out) {
      for (int i = 0; i < xhat.size(); ++i) out(i) = loc(i) - xhat(i);
    });
    b.row_pattern.resize(dim_x);
    for (int r = 0; r < dim_x; ++r) b.row_pattern[r] = {r};
    nlp.equalities.push_back(std::move(b));
  }

  // ---- equality: trapezoidal dynamics defects --------------------------
  for (int k = 0; k + 1 < N; ++k) {
    ConstraintBlock b;
    b.group = "dynamics_defect";
    b.vars = iota_range(ocp.layout.x_start(k), 2 * kd);
    b.dim = dim_x;
    b.fn = make_function(
        2 * kd, dim_x,
        [model, ground, params, L, dim_x, kd, dt, gravity](const auto& loc,
                                                           auto& out) {
          using T = std::decay_t<decltype(loc(0))>;
          const VecXT<T> x0 = loc.segment(0, dim_x);
          const VecXT<T> u0 = loc.segment(dim_x, kd - dim_x);
          const VecXT<T> x1 = loc.segment(kd, dim_x);
          const VecXT<T> u1 = loc.segment(kd + dim_x, kd - dim_x);
          out = trapezoidal_defect_t(*model, ground, params, L, x0, u0, x1, u1,
                                     dt, gravity);
        });

    // Tight per-row dependencies of x1 - x0 - dt/2 (F(x0,u0) + F(x1,u1)).
    b.row_pattern.resize(dim_x);
    auto x0i = [&](int off) { return off; };
    auto u0i = [&](int off) { return dim_x + off; };
    auto x1i = [&](int off) { return kd + off; };
    auto u1i = [&](int off) { return kd + dim_x + off; };
    auto both = [&](std::vector<int>& row, int x_off, bool in_u = false) {
      if (in_u) {
        row.push_back(u0i(x_off));
        row.push_back(u1i(x_off));
      } else {
        row.push_back(x0i(x_off));
        row.push_back(x1i(x_off));
      }
    };
    for (int i = 0; i < P; ++i) {
      for (int c = 0; c < 3; ++c) {
        auto& fr = b.row_pattern[L.x_force(i) + c];
        both(fr, L.x_force(i) + c);
        both(fr, L.u_force_rate(i) + c, true);
        auto& pr = b.row_pattern[L.x_point(i) + c];
        for (int cc = 0; cc < 3; ++cc) {
          both(pr, L.x_point(i) + cc);
          both(pr, L.u_point_vel(i) + cc, true);
        }
      }
    }
    for (int c = 0; c < 6; ++c) {
      auto& hr = b.row_pattern[L.x_momentum() + c];
      both(hr, L.x_momentum() + c);
      if (c < 3) {
        for (int i = 0; i < P; ++i) both(hr, L.x_force(i) + c);
      } else {
        for (int i = 0; i < P; ++i)
          for (int cc = 0; cc < 3; ++cc) {
            both(hr, L.x_force(i) + cc);
            both(hr, L.x_point(i) + cc);
          }
        for (int cc = 0; cc < 3; ++cc) both(hr, L.x_com() + cc);
      }
    }
    for (int c = 0; c < 3; ++c) {
      auto& cr = b.row_pattern[L.x_com() + c];
      both(cr, L.x_com() + c);
      both(cr, L.x_momentum() + c);
      auto& br = b.row_pattern[L.x_base_pos() + c];
      both(br, L.x_base_pos() + c);
      for (int cc = 0; cc < 4; ++cc) both(br, L.x_base_quat() + cc);
      for (int cc = 0; cc < 3; ++cc) both(br, L.u_base_vel() + cc, true);
    }
    for (int c = 0; c < 4; ++c) {
      auto& qr = b.row_pattern[L.x_base_quat() + c];
      both(qr, L.x_base_quat() + c);
      both(qr, L.u_quat_rate() + c, true);
    }
    for (int j = 0; j < n; ++j) {
      auto& sr = b.row_pattern[L.x_joints() + j];
      both(sr, L.x_joints() + j);
      both(sr, L.u_joint_rate() + j, true);
    }
    for (auto& row : b.row_pattern) std::sort(row.begin(), row.end());
    nlp.equalities.push_back(std::move(b));
  }

  // ---- per-knot kinematic consistency (knot 0 is pinned already) -------
  for (int k = 1; k < N; ++k) {
    {
      ConstraintBlock b;
      b.group = "contact_point_consistency";
      b.vars = iota_range(ocp.layout.x_start(k), dim_x);
      b.dim = 3 * P;
      b.fn = make_function(
          dim_x, 3 * P, [model, L, table](const auto& loc, auto& out) {
            using T = std::decay_t<decltype(loc(0))>;
            const Vec3T<T> base_pos = loc.template segment<3>(L.x_base_pos());
            const Vec4T<T> rho = loc.template segment<4>(L.x_base_quat());
            const VecXT<T> q = loc.segment(L.x_joints(), L.num_joints);
            auto poses = link_poses(*model, base_pos, rho, q);
            for (int i = 0; i < L.num_points; ++i) {
              const TransformT<T> foot =
                  frame_pose(*model, poses, table.frame[i]);
              out.template segment<3>(3 * i) =
                  loc.template segment<3>(L.x_point(i)) -
                  foot * Vec3T<T>(table.offset[i].template cast<T>());
            }
          });
      b.row_pattern.resize(3 * P);
      for (int i = 0; i < P; ++i) {
        const auto& support =
            m.supporting_joints(m.frames[table.frame[i]].link);
        for (int c = 0; c < 3; ++c) {
          auto& row = b.row_pattern[3 * i + c];
          row.push_back(L.x_point(i) + c);
          row.push_back(L.x_base_pos() + c);
          for (int cc = 0; cc < 4; ++cc) row.push_back(L.x_base_quat() + cc);
          for (int j : support) row.push_back(L.x_joints() + j);
          std::sort(row.begin(), row.end());
        }
      }
      nlp.equalities.push_back(std::move(b));
    }
    {
      ConstraintBlock b;
      b.group = "com_consistency";
      b.vars = iota_range(ocp.layout.x_start(k), dim_x);
      b.dim = 3;
      b.fn = make_function(dim_x, 3, [model, L](const auto& loc, auto& out) {
        using T = std::decay_t<decltype(loc(0))>;
        const Vec3T<T> base_pos = loc.template segment<3>(L.x_base_pos());
        const Vec4T<T> rho = loc.template segment<4>(L.x_base_quat());
        const VecXT<T> q = loc.segment(L.x_joints(), L.num_joints);
        const Vec3T<T> com = com_position_t(*model, base_pos, rho, q);
        out.template segment<3>(0) =
            loc.template segment<3>(L.x_com()) - com;
      });
      b.row_pattern.resize(3);
      for (int c = 0; c < 3; ++c) {
        auto& row = b.row_pattern[c];
        row.push_back(L.x_com() + c);
        row.push_back(L.x_base_pos() + c);
        for (int cc = 0; cc < 4; ++cc) row.push_back(L.x_base_quat() + cc);
        for (int j = 0; j < n; ++j) row.push_back(L.x_joints() + j);
        std::sort(row.begin(), row.end());
      }
      nlp.equalities.push_back(std::move(b));
    }
    {
      ConstraintBlock b;
      b.group = "quaternion_norm";
      b.vars = iota_range(ocp.layout.x_start(k) + L.x_base_quat(), 4);
      b.dim = 1;
      b.fn = make_function(4, 1, [](const auto& loc, auto& out) {
        out(0) = loc.squaredNorm() - 1.0;
      });
      b.row_pattern = {{0, 1, 2, 3}};
      nlp.equalities.push_back(std::move(b));
    }
  }

  // ---- per-knot angular-momentum / velocity coupling --------------------
  // Applied at knot 0 too: the state side is pinned there but the row still
  // constrains the knot-0 controls.
  for (int k = 0; k < N; ++k) {
    ConstraintBlock b;
    b.group = "angular_momentum_cmm";
    b.vars = iota_range(ocp.layout.x_start(k), kd);
    b.dim = 3;
    b.fn = make_function(kd, 3, [model, L, dim_x](const auto& loc, auto& out) {
      using T = std::decay_t<decltype(loc(0))>;
      const Vec3T<T> base_pos = loc.template segment<3>(L.x_base_pos());
      const Vec4T<T> rho = loc.template segment<4>(L.x_base_quat());
      const VecXT<T> q = loc.segment(L.x_joints(), L.num_joints);
      const MatXT<T> cmm =
          centroidal_momentum_matrix_t(*model, base_pos, rho, q);
      VecXT<T> nu(6 + L.num_joints);
      nu.template segment<3>(0) =
          loc.template segment<3>(dim_x + L.u_base_vel());
      nu.template segment<3>(3) =
          2.0 * (quat::g_map(rho) *
                 Vec4T<T>(loc.template segment<4>(dim_x + L.u_quat_rate())));
      nu.segment(6, L.num_joints) =
          loc.segment(dim_x + L.u_joint_rate(), L.num_joints);
      out.template segment<3>(0) =
          loc.template segment<3>(L.x_momentum() + 3) -
          (cmm * nu).template segment<3>(3);
    });
    b.row_pattern.resize(3);
    for (int c = 0; c < 3; ++c) {
      auto& row = b.row_pattern[c];
      row.push_back(L.x_momentum() + 3 + c);
      for (int cc = 0; cc < 4; ++cc) row.push_back(L.x_base_quat() + cc);
      for (int j = 0; j < n; ++j) row.push_back(L.x_joints() + j);
      for (int cc = 0; cc < 3; ++cc) row.push_back(dim_x + L.u_base_vel() + cc);
      for (int cc = 0; cc < 4; ++cc)
        row.push_back(dim_x + L.u_quat_rate() + cc);
      for (int j = 0; j < n; ++j) row.push_back(dim_x + L.u_joint_rate() + j);
      std::sort(row.begin(), row.end());
    }
    nlp.equalities.push_back(std::move(b));
  }

  // ---- per-knot inequalities -------------------------------------------
  const Vec3 normal = ground.normal;
  const double k_fn = params.K_f.cwiseProduct(normal.cwiseAbs2()).sum();
  const double m_fn = params.M_f.cwiseProduct(normal.cwiseAbs2()).sum();

  for (int k = 0; k < N; ++k) {
    {
      ConstraintBlock b;
      b.group = "normal_force";
      b.vars = iota_range(ocp.layout.x_start(k), dim_x);
      b.dim = P;
      b.fn = make_function(dim_x, P, [L, normal](const auto& loc, auto& out) {
        using T = std::decay_t<decltype(loc(0))>;
        for (int i = 0; i < L.num_points; ++i)
          out(i) = normal.cast<T>().dot(
              Vec3T<T>(loc.template segment<3>(L.x_force(i))));
      });
      b.row_pattern.resize(P);
      for (int i = 0; i < P; ++i)
        b.row_pattern[i] = {L.x_force(i), L.x_force(i) + 1, L.x_force(i) + 2};
      nlp.inequalities.push_back(std::move(b));
    }
    {
      ConstraintBlock b;
      b.group = "friction_cone";
      b.vars = iota_range(ocp.layout.x_start(k), dim_x);
      b.dim = P;
      b.fn = make_function(
          dim_x, P, [L, ground, params](const auto& loc, auto& out) {
            using T = std::decay_t<decltype(loc(0))>;
            for (int i = 0; i < L.num_points; ++i)
              out(i) = friction_cone_residual(
                  ground, params,
                  Vec3T<T>(loc.template segment<3>(L.x_point(i))),
                  Vec3T<T>(loc.template segment<3>(L.x_force(i))));
          });
      b.row_pattern.resize(P);
      for (int i = 0; i < P; ++i)
        b.row_pattern[i] = {L.x_force(i), L.x_force(i) + 1, L.x_force(i) + 2};
      nlp.inequalities.push_back(std::move(b));
    }
    {
      // Normal force-rate gate, two one-sided rows per point.
      ConstraintBlock b;
      b.group = "force_rate";
      b.vars = iota_range(ocp.layout.x_start(k), kd);
      b.dim = 2 * P;
      b.fn = make_function(
          kd, 2 * P,
          [L, ground, params, normal, k_fn, m_fn, dim_x](const auto& loc,
                                                         auto& out) {
            using T = std::decay_t<decltype(loc(0))>;
            for (int i = 0; i < L.num_points; ++i) {
              const Vec3T<T> p = loc.template segment<3>(L.x_point(i));
              const T fn = normal.cast<T>().dot(
                  Vec3T<T>(loc.template segment<3>(L.x_force(i))));
              const T fn_rate = normal.cast<T>().dot(Vec3T<T>(
                  loc.template segment<3>(dim_x + L.u_force_rate(i))));
              const T delta = activation_delta(ground, params, p);
              const T decay = -k_fn * (T(1.0) - delta) * fn;
              out(2 * i) = fn_rate - (decay - delta * m_fn);
              out(2 * i + 1) = (decay + delta * m_fn) - fn_rate;
            }
          });
      b.row_pattern.resize(2 * P);
      for (int i = 0; i < P; ++i) {
        std::vector<int> row;
        for (int c = 0; c < 3; ++c) row.push_back(L.x_force(i) + c);
        for (int c = 0; c < 3; ++c) row.push_back(L.x_point(i) + c);
        for (int c = 0; c < 3; ++c)
          row.push_back(dim_x + L.u_force_rate(i) + c);
        std::sort(row.begin(), row.end());
        b.row_pattern[2 * i] = row;
        b.row_pattern[2 * i + 1] = row;
      }
      nlp.inequalities.push_back(std::move(b));
    }
    {
      ConstraintBlock b;
      b.group = "contact_height";
      b.vars = iota_range(ocp.layout.x_start(k), dim_x);
      b.dim = P;
      b.fn = make_function(dim_x, P, [L, ground](const auto& loc, auto& out) {
        using T = std::decay_t<decltype(loc(0))>;
        for (int i = 0; i < L.num_points; ++i)
          out(i) = ground.height(
              Vec3T<T>(loc.template segment<3>(L.x_point(i))));
      });
      b.row_pattern.resize(P);
      for (int i = 0; i < P; ++i)
        b.row_pattern[i] = {L.x_point(i), L.x_point(i) + 1, L.x_point(i) + 2};
      nlp.inequalities.push_back(std::move(b));
    }
    // Lateral separation: left foot stays on the left of the right foot.
    const int lf = m.frame_index("l_foot");
    const int rf = m.frame_index("r_foot");
    if (lf >= 0 && rf >= 0) {
      ConstraintBlock b;
      b.group = "feet_distance";
      b.vars = iota_range(ocp.layout.x_start(k), dim_x);
      b.dim = 1;
      const double d_min = config.d_min;
      b.fn = make_function(
          dim_x, 1, [model, L, lf, rf, d_min](const auto& loc, auto& out) {
            using T = std::decay_t<decltype(loc(0))>;
            const Vec3T<T> base_pos = loc.template segment<3>(L.x_base_pos());
            const Vec4T<T> rho = loc.template segment<4>(L.x_base_quat());
            const VecXT<T> q = loc.segment(L.x_joints(), L.num_joints);
            auto poses = link_poses(*model, base_pos, rho, q);
            const TransformT<T> right = frame_pose(*model, poses, rf);
            const TransformT<T> left = frame_pose(*model, poses, lf);
            const Vec3T<T> rel = right.R.transpose() * (left.p - right.p);
            out(0) = rel(1) - d_min;
          });
      std::vector<int> row;
      for (int cc = 0; cc < 4; ++cc) row.push_back(L.x_base_quat() + cc);
      for (int j = 0; j < n; ++j) row.push_back(L.x_joints() + j);
      std::sort(row.begin(), row.end());
      b.row_pattern = {row};
      nlp.inequalities.push_back(std::move(b));
    }
  }

  // ---- objective: scheduled task costs per knot --------------------------
  for (int k = 0; k < N; ++k) {
    std::array<double, kNumTasks> eff;
    for (int t = 0; t < kNumTasks; ++t) {
      const double mult = schedule.empty() ? 1.0 : schedule[k][t];
      eff[t] = dt * weights.w[t] * mult;
    }
    CostTerm term;
    term.name = "knot_cost_" + std::to_string(k);
    term.vars = iota_range(ocp.layout.x_start(k), kd);
    term.fn = make_function(
        kd, 1, [model, L, refs, weights, eff, dim_x](const auto& loc,
                                                     auto& out) {
          using T = std::decay_t<decltype(loc(0))>;
          const VecXT<T> x = loc.segment(0, dim_x);
          const VecXT<T> u = loc.segment(dim_x, loc.size() - dim_x);
          auto gamma = task_values(*model, L, refs, weights, x, u);
          T total(0.0);
          for (int t = 0; t < kNumTasks; ++t) total += eff[t] * gamma[t];
          out(0) = total;
        });
    nlp.objective_terms.push_back(std::move(term));
  }

  // Default guess: hold the initial state, zero controls.
  nlp.initial_guess = VecX::Zero(nlp.num_vars);
  for (int k = 0; k < N; ++k)
    nlp.initial_guess.segment(ocp.layout.x_start(k), dim_x) = initial_state.x;

  nlp.validate();
  return ocp;
}

VecX Ocp::pack(const std::vector<VecX>& states,
               const std::vector<VecX>& controls) const {
  if (static_cast<int>(states.size()) != layout.horizon ||
      static_cast<int>(controls.size()) != layout.horizon)
    throw Error("trajectory knot count does not match the horizon");
  VecX z(layout.num_vars());
  for (int k = 0; k < layout.horizon; ++k) {
    z.segment(layout.x_start(k), layout.vars.dim_x()) = states[k];
    z.segment(layout.u_start(k), layout.vars.dim_u()) = controls[k];
  }
  return z;
}

void Ocp::unpack(const VecX& z, std::vector<VecX>& states,
                 std::vector<VecX>& controls) const {
  states.resize(layout.horizon);
  controls.resize(layout.horizon);
  for (int k = 0; k < layout.horizon; ++k) {
    states[k] = z.segment(layout.x_start(k), layout.vars.dim_x());
    controls[k] = z.segment(layout.u_start(k), layout.vars.dim_u());
  }
}

std::pair<VecX, VecX> eval_constraints(const Ocp& ocp, const VecX& z) {
  if (z.size() != ocp.nlp.num_vars)
    throw Error("decision vector has wrong dimension");
  return {ocp.nlp.eval_equalities(z), ocp.nlp.eval_inequalities(z)};
}

std::pair<SparsityPattern, SparsityPattern> sparsity_pattern(const Ocp& ocp) {
  return {ocp.nlp.equality_pattern(), ocp.nlp.inequality_pattern()};
}

}  // namespace walkplan
