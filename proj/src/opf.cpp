#include "qpopf/opf.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpopf {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Box {
    int idx;
    double lo, hi;
};

struct Cone {
    int i_l, i_v, i_p, i_q;  // l * v >= P^2 + Q^2
};

struct DispatchVar {
    int var_idx;
    int bus_idx;
    double sign;  // +1 injection, -1 export at the slack
    bool reactive;
};

/// The conic program assembled from a grid and a scenario.
struct Program {
    int n_lines = 0;
    int n_buses = 0;
    int n_vars = 0;
    VectorXd cost;
    MatrixXd a;  // equality matrix
    VectorXd b;
    std::vector<Box> boxes;
    std::vector<Cone> cones;
    std::vector<DispatchVar> dispatch;
    double nu = 0.0;  // total barrier complexity

    int idx_p(int l) const { return l; }
    int idx_q(int l) const { return n_lines + l; }
    int idx_l(int l) const { return 2 * n_lines + l; }
    int idx_v(int bus) const { return 3 * n_lines + bus; }
};

Program build_program(const GridModel& grid, const InjectionSet& inj0) {
    Program pr;
    pr.n_lines = static_cast<int>(grid.n_lines());
    pr.n_buses = static_cast<int>(grid.n_buses());
    const int nl = pr.n_lines;
    const int nb = pr.n_buses;
    const int slack_idx = grid.bus_index(grid.slack);

    // Dispatch variables. The slack's active power is split into an import
    // and an export variable so buying and selling can carry different
    // prices while the objective stays linear.
    struct UnitSpec {
        int bus_idx;
        double lo, hi, cost;
        double sign;
        bool reactive;
    };
    std::vector<UnitSpec> units;
    for (int bi = 0; bi < nb; ++bi) {
        const GridBus& bus = grid.buses[static_cast<std::size_t>(bi)];
        if (bus.kind == BusKind::slack) {
            if (bus.pmax > 0.0) units.push_back({bi, 0.0, bus.pmax, bus.cost, 1.0, false});
            if (bus.pmin < 0.0) units.push_back({bi, 0.0, -bus.pmin, -grid.export_price, -1.0, false});
            if (bus.qmax > bus.qmin) units.push_back({bi, bus.qmin, bus.qmax, 0.0, 1.0, true});
        } else if (bus.kind == BusKind::dg) {
            if (bus.pmax > bus.pmin) units.push_back({bi, bus.pmin, bus.pmax, bus.cost, 1.0, false});
            if (bus.qmax > bus.qmin) units.push_back({bi, bus.qmin, bus.qmax, 0.0, 1.0, true});
        }
    }

    pr.n_vars = 3 * nl + nb + static_cast<int>(units.size());
    pr.cost = VectorXd::Zero(pr.n_vars);
    for (std::size_t u = 0; u < units.size(); ++u) {
        const int vi = 3 * nl + nb + static_cast<int>(u);
        pr.dispatch.push_back({vi, units[u].bus_idx, units[u].sign, units[u].reactive});
        // Costs are quoted per MW; variables are per-unit.
        pr.cost[vi] = units[u].cost * grid.base_mva * units[u].sign;
        pr.boxes.push_back({vi, units[u].lo, units[u].hi});
    }

    for (int l = 0; l < nl; ++l) {
        pr.boxes.push_back({pr.idx_l(l), 0.0, grid.lines[static_cast<std::size_t>(l)].lmax});
        pr.cones.push_back({pr.idx_l(l), pr.idx_v(grid.line_from_idx[static_cast<std::size_t>(l)]),
                            pr.idx_p(l), pr.idx_q(l)});
    }
    for (int bi = 0; bi < nb; ++bi) {
        const GridBus& bus = grid.buses[static_cast<std::size_t>(bi)];
        if (bus.kind == BusKind::slack)
            pr.boxes.push_back({pr.idx_v(bi), 0.25, 4.0});  // pinned by the equality below
        else
            pr.boxes.push_back({pr.idx_v(bi), bus.vmin, bus.vmax});
    }

    pr.nu = 2.0 * static_cast<double>(pr.boxes.size()) + 2.0 * static_cast<double>(pr.cones.size());

    // Equalities: P balance and Q balance per bus, voltage drop per line,
    // slack voltage pin.
    const int n_eq = 2 * nb + nl + 1;
    pr.a = MatrixXd::Zero(n_eq, pr.n_vars);
    pr.b = VectorXd::Zero(n_eq);
    // Balance at bus k: (parent inflow - loss) + injections - child outflows = 0.
    for (int bi = 0; bi < nb; ++bi) {
        const int row_p = 2 * bi;
        const int row_q = 2 * bi + 1;
        const int lu = grid.parent_line[static_cast<std::size_t>(bi)];
        if (lu >= 0) {
            const GridLine& ln = grid.lines[static_cast<std::size_t>(lu)];
            pr.a(row_p, pr.idx_p(lu)) = 1.0;
            pr.a(row_p, pr.idx_l(lu)) = -ln.r;
            pr.a(row_q, pr.idx_q(lu)) = 1.0;
            pr.a(row_q, pr.idx_l(lu)) = -ln.x;
        }
        for (int lc : grid.children[static_cast<std::size_t>(bi)]) {
            pr.a(row_p, pr.idx_p(lc)) = -1.0;
            pr.a(row_q, pr.idx_q(lc)) = -1.0;
        }
        pr.b[row_p] = -inj0.p[static_cast<std::size_t>(bi)];
        pr.b[row_q] = -inj0.q[static_cast<std::size_t>(bi)];
    }
    for (const DispatchVar& d : pr.dispatch) {
        const int row = 2 * d.bus_idx + (d.reactive ? 1 : 0);
        pr.a(row, d.var_idx) = d.sign;
    }
    for (int l = 0; l < nl; ++l) {
        const GridLine& ln = grid.lines[static_cast<std::size_t>(l)];
        const int row = 2 * nb + l;
        pr.a(row, pr.idx_v(grid.line_to_idx[static_cast<std::size_t>(l)])) = 1.0;
        pr.a(row, pr.idx_v(grid.line_from_idx[static_cast<std::size_t>(l)])) = -1.0;
        pr.a(row, pr.idx_p(l)) = 2.0 * ln.r;
        pr.a(row, pr.idx_q(l)) = 2.0 * ln.x;
        pr.a(row, pr.idx_l(l)) = -(ln.r * ln.r + ln.x * ln.x);
    }
    pr.a(2 * nb + nl, pr.idx_v(slack_idx)) = 1.0;
    pr.b[2 * nb + nl] = grid.slack_v;
    return pr;
}

VectorXd initial_point(const Program& pr, const GridModel& grid) {
    VectorXd x = VectorXd::Zero(pr.n_vars);
    for (int bi = 0; bi < pr.n_buses; ++bi) {
        const GridBus& bus = grid.buses[static_cast<std::size_t>(bi)];
        double v0 = grid.slack_v;
        if (bus.kind != BusKind::slack)
            v0 = std::clamp(grid.slack_v, bus.vmin + 0.05 * (bus.vmax - bus.vmin),
                            bus.vmax - 0.05 * (bus.vmax - bus.vmin));
        x[pr.idx_v(bi)] = v0;
    }
    for (int l = 0; l < pr.n_lines; ++l)
        x[pr.idx_l(l)] = std::min(0.1, 0.5 * grid.lines[static_cast<std::size_t>(l)].lmax);
    for (const Box& box : pr.boxes)
        if (box.idx >= 3 * pr.n_lines + pr.n_buses)
            x[box.idx] = box.lo + 0.1 * (box.hi - box.lo);
    return x;
}

struct BarrierEval {
    VectorXd grad;
    MatrixXd hess;
};

/// Gradient and Hessian of the log barrier over boxes and cones.
void eval_barrier(const Program& pr, const VectorXd& x, BarrierEval& out) {
    out.grad.setZero(pr.n_vars);
    out.hess.setZero(pr.n_vars, pr.n_vars);
    for (const Box& box : pr.boxes) {
        const double dl = x[box.idx] - box.lo;
        const double dh = box.hi - x[box.idx];
        out.grad[box.idx] += -1.0 / dl + 1.0 / dh;
        out.hess(box.idx, box.idx) += 1.0 / (dl * dl) + 1.0 / (dh * dh);
    }
    for (const Cone& cn : pr.cones) {
        const double lv = x[cn.i_l];
        const double vv = x[cn.i_v];
        const double pv = x[cn.i_p];
        const double qv = x[cn.i_q];
        const double s = lv * vv - pv * pv - qv * qv;
        // grad of s over (l, v, P, Q)
        const double gs[4] = {vv, lv, -2.0 * pv, -2.0 * qv};
        const int id[4] = {cn.i_l, cn.i_v, cn.i_p, cn.i_q};
        for (int i = 0; i < 4; ++i) out.grad[id[i]] += -gs[i] / s;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out.hess(id[i], id[j]) += gs[i] * gs[j] / (s * s);
        // -hess(s)/s : d2s/dl dv = 1, d2s/dP2 = d2s/dQ2 = -2
        out.hess(cn.i_l, cn.i_v) += -1.0 / s;
        out.hess(cn.i_v, cn.i_l) += -1.0 / s;
        out.hess(cn.i_p, cn.i_p) += 2.0 / s;
        out.hess(cn.i_q, cn.i_q) += 2.0 / s;
    }
}

double cone_slack(const Cone& cn, const VectorXd& x) {
    return x[cn.i_l] * x[cn.i_v] - x[cn.i_p] * x[cn.i_p] - x[cn.i_q] * x[cn.i_q];
}

bool strictly_interior(const Program& pr, const VectorXd& x) {
    for (const Box& box : pr.boxes)
        if (!(x[box.idx] > box.lo && x[box.idx] < box.hi)) return false;
    for (const Cone& cn : pr.cones)
        if (!(cone_slack(cn, x) > 0.0)) return false;
    return true;
}

/// Largest step keeping x + alpha d strictly inside boxes and cones.
double max_feasible_step(const Program& pr, const VectorXd& x, const VectorXd& d) {
    double alpha = std::numeric_limits<double>::infinity();
    for (const Box& box : pr.boxes) {
        const double di = d[box.idx];
        if (di > 0.0) alpha = std::min(alpha, (box.hi - x[box.idx]) / di);
        else if (di < 0.0) alpha = std::min(alpha, (x[box.idx] - box.lo) / (-di));
    }
    for (const Cone& cn : pr.cones) {
        // s(alpha) = s0 + a alpha + b alpha^2
        const double s0 = cone_slack(cn, x);
        const double a = x[cn.i_l] * d[cn.i_v] + x[cn.i_v] * d[cn.i_l] - 2.0 * x[cn.i_p] * d[cn.i_p] -
                         2.0 * x[cn.i_q] * d[cn.i_q];
        const double b = d[cn.i_l] * d[cn.i_v] - d[cn.i_p] * d[cn.i_p] - d[cn.i_q] * d[cn.i_q];
        double bound = std::numeric_limits<double>::infinity();
        if (std::abs(b) < 1e-300) {
            if (a < 0.0) bound = -s0 / a;
        } else {
            const double disc = a * a - 4.0 * b * s0;
            if (b > 0.0) {
                if (disc >= 0.0) {
                    const double r1 = (-a - std::sqrt(disc)) / (2.0 * b);
                    if (r1 > 0.0) bound = r1;
                }
            } else {
                // Opens downward and s(0) > 0: the positive root bounds the step.
                const double r2 = (-a - std::sqrt(disc)) / (2.0 * b);  // b < 0: this is the larger root
                if (r2 > 0.0) bound = r2;
            }
        }
        alpha = std::min(alpha, bound);
    }
    return alpha;
}

struct SolveStats {
    int newton_iterations = 0;
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

/// Infeasible-start Newton barrier path following. Throws on stall.
VectorXd solve_barrier(const Program& pr, const GridModel& grid, const OPFOptions& opt,
                       SolveStats& stats) {
    const int n = pr.n_vars;
    const int m = static_cast<int>(pr.a.rows());
    VectorXd x = initial_point(pr, grid);
    if (!strictly_interior(pr, x)) throw ConvergenceError("opf: initial point not interior", 0, 0);
    VectorXd y = VectorXd::Zero(m);

    double t = opt.t_initial;
    double t_centered = opt.t_initial;  // last barrier weight we actually centered at
    BarrierEval be;
    MatrixXd kkt = MatrixXd::Zero(n + m, n + m);
    kkt.block(n, 0, m, n) = pr.a;
    kkt.topRightCorner(n, m) = pr.a.transpose();

    const double b_scale = std::max(1.0, pr.b.lpNorm<Eigen::Infinity>());
    const double c_inf = std::max(1.0, pr.cost.lpNorm<Eigen::Infinity>());

    for (int outer = 0; outer < opt.max_outer; ++outer) {
        bool progressed = false;
        for (int inner = 0; inner < opt.max_inner; ++inner) {
            eval_barrier(pr, x, be);
            VectorXd r_dual = t * pr.cost + be.grad + pr.a.transpose() * y;
            VectorXd r_pri = pr.a * x - pr.b;
            const double res_norm = std::sqrt(r_dual.squaredNorm() + r_pri.squaredNorm());
            stats.primal_residual = r_pri.lpNorm<Eigen::Infinity>();
            stats.dual_residual = r_dual.lpNorm<Eigen::Infinity>();

            kkt.topLeftCorner(n, n) = be.hess;
            VectorXd rhs(n + m);
            rhs.head(n) = -r_dual;
            rhs.tail(m) = -r_pri;
            const VectorXd step = kkt.partialPivLu().solve(rhs);
            const VectorXd dx = step.head(n);
            const VectorXd dy = step.tail(m);
            ++stats.newton_iterations;

            const double decrement_sq = dx.dot(be.hess * dx);
            const bool primal_ok = stats.primal_residual <= 1e-11 * b_scale;
            if (primal_ok && decrement_sq <= 1e-14 * std::max(1.0, t * c_inf)) {
                progressed = true;
                break;
            }

            double alpha = std::min(1.0, 0.99 * max_feasible_step(pr, x, dx));
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                const VectorXd x_new = x + alpha * dx;
                const VectorXd y_new = y + alpha * dy;
                if (strictly_interior(pr, x_new)) {
                    eval_barrier(pr, x_new, be);
                    const VectorXd rd_new = t * pr.cost + be.grad + pr.a.transpose() * y_new;
                    const VectorXd rp_new = pr.a * x_new - pr.b;
                    const double new_norm = std::sqrt(rd_new.squaredNorm() + rp_new.squaredNorm());
                    if (new_norm <= (1.0 - 0.01 * alpha) * res_norm) {
                        x = x_new;
                        y = y_new;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted) {
                if (stats.primal_residual > 1e-7 * b_scale)
                    throw InfeasibleError("opf: no feasible point found (primal residual " +
                                              std::to_string(stats.primal_residual) + ")",
                                          {"primal residual stalled above tolerance"});
                break;  // centered as far as double precision allows
            }
            progressed = true;
        }
        if (progressed) t_centered = t;
        stats.gap = pr.nu / t_centered;
        const double obj = pr.cost.dot(x);
        if (stats.gap <= opt.gap_tol_rel * std::max(1.0, std::abs(obj))) return x;
        t *= opt.t_growth;
    }
    throw ConvergenceError("opf: barrier method did not reach the gap tolerance", stats.primal_residual,
                           stats.dual_residual);
}

void capacity_screen(const GridModel& grid, const InjectionSet& inj0) {
    double fixed_net = 0.0;  // renewables minus loads
    for (double p : inj0.p) fixed_net += p;
    double supply = 0.0;
    double absorb = 0.0;
    for (const GridBus& bus : grid.buses) {
        if (bus.kind == BusKind::slack || bus.kind == BusKind::dg) {
            supply += bus.pmax;
            absorb += -std::min(bus.pmin, 0.0);
        }
    }
    std::vector<std::string> violated;
    if (fixed_net + supply < 0.0)
        violated.push_back("total active generation capacity below total net load");
    if (fixed_net > absorb)
        violated.push_back("fixed injections exceed total absorption capacity");
    if (!violated.empty()) throw InfeasibleError("opf: infeasible by capacity screen", violated);
}

}  // namespace

double OPFSolution::voltage_kv(const GridModel& grid, int bus_id) const {
    return std::sqrt(bus_v[static_cast<std::size_t>(grid.bus_index(bus_id))]) * grid.base_kv;
}

OPFResiduals evaluate_residuals(const GridModel& grid, const UncertainSample& sample,
                                const OPFSolution& sol) {
    const std::size_t nb = grid.n_buses();
    std::vector<double> dp(nb, 0.0);
    std::vector<double> dq(nb, 0.0);
    for (std::size_t bi = 0; bi < nb; ++bi) {
        dp[bi] = sol.pg_mw[bi] / grid.base_mva;
        dq[bi] = sol.qg_mvar[bi] / grid.base_mva;
    }
    const InjectionSet inj = build_injections(grid, sample, dp, dq);
    OPFResiduals res;
    res.relaxation_gap = grid.n_lines() > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t bi = 0; bi < nb; ++bi) {
        const int lu = grid.parent_line[bi];
        double p = inj.p[bi];
        double q = inj.q[bi];
        if (lu >= 0) {
            const GridLine& ln = grid.lines[static_cast<std::size_t>(lu)];
            p += sol.line_p[static_cast<std::size_t>(lu)] - ln.r * sol.line_l[static_cast<std::size_t>(lu)];
            q += sol.line_q[static_cast<std::size_t>(lu)] - ln.x * sol.line_l[static_cast<std::size_t>(lu)];
        }
        for (int lc : grid.children[bi]) {
            p -= sol.line_p[static_cast<std::size_t>(lc)];
            q -= sol.line_q[static_cast<std::size_t>(lc)];
        }
        res.balance_p = std::max(res.balance_p, std::abs(p));
        res.balance_q = std::max(res.balance_q, std::abs(q));
    }
    for (std::size_t l = 0; l < grid.n_lines(); ++l) {
        const GridLine& ln = grid.lines[l];
        const double vj = sol.bus_v[static_cast<std::size_t>(grid.line_from_idx[l])];
        const double vk = sol.bus_v[static_cast<std::size_t>(grid.line_to_idx[l])];
        const double drop = vk - vj + 2.0 * (ln.r * sol.line_p[l] + ln.x * sol.line_q[l]) -
                            (ln.r * ln.r + ln.x * ln.x) * sol.line_l[l];
        res.voltage_drop = std::max(res.voltage_drop, std::abs(drop));
        const double gap = sol.line_l[l] * vj - sol.line_p[l] * sol.line_p[l] - sol.line_q[l] * sol.line_q[l];
        res.relaxation_gap = std::max(res.relaxation_gap, gap);
    }
    return res;
}

OPFSolution solve_opf(const GridModel& grid, const UncertainSample& sample, const OPFOptions& options) {
    const std::size_t nb = grid.n_buses();
    std::vector<double> zero(nb, 0.0);
    const InjectionSet inj0 = build_injections(grid, sample, zero, zero);
    capacity_screen(grid, inj0);

    const Program pr = build_program(grid, inj0);
    SolveStats stats;
    const VectorXd x = solve_barrier(pr, grid, options, stats);

    OPFSolution sol;
    sol.line_p.resize(grid.n_lines());
    sol.line_q.resize(grid.n_lines());
    sol.line_l.resize(grid.n_lines());
    sol.bus_v.resize(nb);
    sol.pg_mw.assign(nb, 0.0);
    sol.qg_mvar.assign(nb, 0.0);
    for (std::size_t l = 0; l < grid.n_lines(); ++l) {
        sol.line_p[l] = x[pr.idx_p(static_cast<int>(l))];
        sol.line_q[l] = x[pr.idx_q(static_cast<int>(l))];
        sol.line_l[l] = x[pr.idx_l(static_cast<int>(l))];
    }
    for (std::size_t bi = 0; bi < nb; ++bi) sol.bus_v[bi] = x[pr.idx_v(static_cast<int>(bi))];
    const int slack_idx = grid.bus_index(grid.slack);
    for (const DispatchVar& d : pr.dispatch) {
        const double value = x[d.var_idx];
        if (d.reactive) {
            sol.qg_mvar[static_cast<std::size_t>(d.bus_idx)] += d.sign * value * grid.base_mva;
        } else if (d.bus_idx == slack_idx) {
            if (d.sign > 0.0) sol.slack_import_mw += value * grid.base_mva;
            else sol.slack_export_mw += value * grid.base_mva;
        } else {
            sol.pg_mw[static_cast<std::size_t>(d.bus_idx)] += d.sign * value * grid.base_mva;
        }
    }
    sol.pg_mw[static_cast<std::size_t>(slack_idx)] = sol.slack_import_mw - sol.slack_export_mw;
    sol.duality_gap = stats.gap;
    sol.newton_iterations = stats.newton_iterations;

    if (options.refine) {
        // Fix the optimal dispatch and replace the conic state with the
        // exact physical flow, provided it stays within the operating box.
        std::vector<double> dp(nb, 0.0);
        std::vector<double> dq(nb, 0.0);
        for (std::size_t bi = 0; bi < nb; ++bi) {
            if (static_cast<int>(bi) == slack_idx) continue;
            dp[bi] = sol.pg_mw[bi] / grid.base_mva;
            dq[bi] = sol.qg_mvar[bi] / grid.base_mva;
        }
        const InjectionSet inj = build_injections(grid, sample, dp, dq);
        const SweepResult sw = sweep_power_flow(grid, inj);
        if (sw.converged) {
            bool within = true;
            for (std::size_t bi = 0; bi < nb && within; ++bi) {
                if (static_cast<int>(bi) == slack_idx) continue;
                const GridBus& bus = grid.buses[bi];
                if (sw.bus_v[bi] < bus.vmin - 1e-9 || sw.bus_v[bi] > bus.vmax + 1e-9) within = false;
            }
            for (std::size_t l = 0; l < grid.n_lines() && within; ++l)
                if (sw.line_l[l] > grid.lines[l].lmax + 1e-9) within = false;
            // Slack injection implied by the swept flows.
            double root_p = 0.0;
            double root_q = 0.0;
            for (int lc : grid.children[static_cast<std::size_t>(slack_idx)]) {
                root_p += sw.line_p[static_cast<std::size_t>(lc)];
                root_q += sw.line_q[static_cast<std::size_t>(lc)];
            }
            // inj at the slack excludes dispatch (zeroed above), so the
            // implied dispatch is whatever balances the root flows.
            const double slack_p = root_p - inj.p[static_cast<std::size_t>(slack_idx)];
            const double slack_q = root_q - inj.q[static_cast<std::size_t>(slack_idx)];
            const GridBus& sb = grid.buses[static_cast<std::size_t>(slack_idx)];
            if (slack_p > sb.pmax + 1e-9 || slack_p < sb.pmin - 1e-9 || slack_q > sb.qmax + 1e-9 ||
                slack_q < sb.qmin - 1e-9)
                within = false;
            if (within) {
                sol.line_p = sw.line_p;
                sol.line_q = sw.line_q;
                sol.line_l = sw.line_l;
                sol.bus_v = sw.bus_v;
                sol.slack_import_mw = std::max(slack_p, 0.0) * grid.base_mva;
                sol.slack_export_mw = std::max(-slack_p, 0.0) * grid.base_mva;
                sol.pg_mw[static_cast<std::size_t>(slack_idx)] = slack_p * grid.base_mva;
                sol.qg_mvar[static_cast<std::size_t>(slack_idx)] = slack_q * grid.base_mva;
                sol.refined = true;
            }
        }
    }

    // Objective in cost units from the final dispatch.
    double obj = 0.0;
    for (std::size_t bi = 0; bi < nb; ++bi) {
        const GridBus& bus = grid.buses[bi];
        if (bus.kind == BusKind::dg) obj += bus.cost * sol.pg_mw[bi];
    }
    obj += grid.buses[static_cast<std::size_t>(slack_idx)].cost * sol.slack_import_mw;
    obj -= grid.export_price * sol.slack_export_mw;
    sol.objective = obj;

    sol.residuals = evaluate_residuals(grid, sample, sol);
    return sol;
}

}  // namespace qpopf
