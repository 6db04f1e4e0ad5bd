#pragma once

// Bounded-variable primal simplex with a dense explicit basis inverse.
// Two-phase (artificial variables), Dantzig pricing with a Bland's-rule
// fallback against cycling, and a two-pass Harris-style ratio test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "zome/model.hpp"

namespace zome {

struct LpProblem {
  int n = 0;  // structural variables
  std::vector<double> obj;
  std::vector<double> lb, ub;
  struct Col {
    std::vector<int> idx;
    std::vector<double> val;
  };
  std::vector<Col> cols;
  std::vector<Sense> sense;
  std::vector<double> rhs;

  int m() const { return static_cast<int>(rhs.size()); }
};

inline LpProblem to_lp(const MipModel& model) {
  LpProblem p;
  p.n = static_cast<int>(model.vars.size());
  p.obj = model.objective;
  p.lb.reserve(model.vars.size());
  p.ub.reserve(model.vars.size());
  for (const MipVar& v : model.vars) {
    p.lb.push_back(v.lb);
    p.ub.push_back(v.ub);
  }
  p.cols.resize(static_cast<std::size_t>(p.n));
  p.sense.reserve(model.rows.size());
  p.rhs.reserve(model.rows.size());
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const MipRow& row = model.rows[r];
    p.sense.push_back(row.sense);
    p.rhs.push_back(row.rhs);
    for (const MipTerm& t : row.terms) {
      p.cols[static_cast<std::size_t>(t.var)].idx.push_back(static_cast<int>(r));
      p.cols[static_cast<std::size_t>(t.var)].val.push_back(t.coef);
    }
  }
  return p;
}

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<double> x;  // structural variables
  int iterations = 0;
};

namespace detail {

class Simplex {
 public:
  Simplex(const LpProblem& p, const std::vector<double>& lb_struct,
          const std::vector<double>& ub_struct, double feas_tol, bool bland)
      : p_(p), m_(p.m()), feas_tol_(feas_tol), bland_(bland) {
    n_total_ = p.n + 2 * m_;  // structurals, slacks, artificials
    lb_.assign(static_cast<std::size_t>(n_total_), 0.0);
    ub_.assign(static_cast<std::size_t>(n_total_), 0.0);
    for (int j = 0; j < p.n; ++j) {
      lb_[static_cast<std::size_t>(j)] = lb_struct[static_cast<std::size_t>(j)];
      ub_[static_cast<std::size_t>(j)] = ub_struct[static_cast<std::size_t>(j)];
    }
    for (int r = 0; r < m_; ++r) {
      const int s = p.n + r;
      switch (p.sense[static_cast<std::size_t>(r)]) {
        case Sense::Le: lb_[s] = 0.0; ub_[s] = kInf; break;
        case Sense::Ge: lb_[s] = -kInf; ub_[s] = 0.0; break;
        case Sense::Eq: lb_[s] = 0.0; ub_[s] = 0.0; break;
      }
      lb_[static_cast<std::size_t>(p.n + m_ + r)] = 0.0;  // artificials
      ub_[static_cast<std::size_t>(p.n + m_ + r)] = kInf;
    }
    art_sign_.assign(static_cast<std::size_t>(m_), 1.0);
    art_used_.assign(static_cast<std::size_t>(m_), false);
  }

  LpResult run() {
    LpResult res;
    if (!setup()) {
      res.status = LpStatus::Infeasible;  // a fixed variable with lb > ub
      return res;
    }
    // phase 1: drive artificial variables to zero
    std::vector<double> cost(static_cast<std::size_t>(n_total_), 0.0);
    bool need_phase1 = false;
    for (int r = 0; r < m_; ++r)
      if (art_used_[static_cast<std::size_t>(r)]) {
        cost[static_cast<std::size_t>(p_.n + m_ + r)] = 1.0;
        need_phase1 = true;
      }
    if (need_phase1) {
      const Outcome o = primal(cost, /*phase1=*/true);
      if (o == Outcome::IterationLimit || o == Outcome::Singular || o == Outcome::Unbounded) {
        res.status = LpStatus::NumericalFailure;
        res.iterations = iters_;
        return res;
      }
      double infeas = 0.0;
      for (int r = 0; r < m_; ++r) {
        const int j = basic_[static_cast<std::size_t>(r)];
        if (j >= p_.n + m_) infeas += std::max(0.0, xb_[static_cast<std::size_t>(r)]);
      }
      double scale = 1.0;
      for (double b : p_.rhs) scale = std::max(scale, std::fabs(b));
      if (infeas > 16.0 * feas_tol_ * scale) {
        res.status = LpStatus::Infeasible;
        res.iterations = iters_;
        return res;
      }
      for (int r = 0; r < m_; ++r) ub_[static_cast<std::size_t>(p_.n + m_ + r)] = 0.0;
    }
    // phase 2
    std::fill(cost.begin(), cost.end(), 0.0);
    for (int j = 0; j < p_.n; ++j) cost[static_cast<std::size_t>(j)] = p_.obj[static_cast<std::size_t>(j)];
    Outcome o = primal(cost, /*phase1=*/false);
    res.iterations = iters_;
    if (o == Outcome::Unbounded) {
      res.status = LpStatus::Unbounded;
      return res;
    }
    if (o == Outcome::Optimal && !audit()) {
      // basis-inverse drift: rebuild and polish once
      if (!refactorize()) {
        res.status = LpStatus::NumericalFailure;
        return res;
      }
      o = primal(cost, /*phase1=*/false);
      res.iterations = iters_;
      if (o == Outcome::Optimal && !audit()) o = Outcome::Singular;
    }
    if (o != Outcome::Optimal) {
      res.status = o == Outcome::Unbounded ? LpStatus::Unbounded : LpStatus::NumericalFailure;
      return res;
    }
    res.status = LpStatus::Optimal;
    res.x.assign(static_cast<std::size_t>(p_.n), 0.0);
    for (int j = 0; j < p_.n; ++j) res.x[static_cast<std::size_t>(j)] = value_of(j);
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[static_cast<std::size_t>(r)];
      if (j < p_.n) res.x[static_cast<std::size_t>(j)] = xb_[static_cast<std::size_t>(r)];
    }
    res.objective = 0.0;
    for (int j = 0; j < p_.n; ++j)
      res.objective += p_.obj[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
    return res;
  }

 private:
  enum class Status : unsigned char { Basic, AtLower, AtUpper, FreeZero };
  enum class Outcome { Optimal, Unbounded, IterationLimit, Singular };

  const LpProblem& p_;
  int m_;
  int n_total_ = 0;
  double feas_tol_;
  bool bland_;
  std::vector<double> lb_, ub_;
  std::vector<double> art_sign_;
  std::vector<bool> art_used_;
  std::vector<Status> status_;
  std::vector<int> basic_;
  std::vector<double> xb_;
  std::vector<double> binv_;  // m x m row-major
  int iters_ = 0;
  int pivots_since_refactor_ = 0;
  int degen_run_ = 0;

  static constexpr double kPivTol = 1e-9;
  static constexpr double kDualTol = 1e-9;

  double& binv(int i, int j) { return binv_[static_cast<std::size_t>(i) * m_ + j]; }
  double binv(int i, int j) const { return binv_[static_cast<std::size_t>(i) * m_ + j]; }

  double value_of(int j) const {
    switch (status_[static_cast<std::size_t>(j)]) {
      case Status::AtLower: return lb_[static_cast<std::size_t>(j)];
      case Status::AtUpper: return ub_[static_cast<std::size_t>(j)];
      case Status::FreeZero: return 0.0;
      default: return 0.0;  // basic values live in xb_
    }
  }

  // column j of the full system (structural | slack | artificial)
  template <typename F>
  void for_col(int j, F&& f) const {
    if (j < p_.n) {
      const LpProblem::Col& c = p_.cols[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < c.idx.size(); ++k) f(c.idx[k], c.val[k]);
    } else if (j < p_.n + m_) {
      f(j - p_.n, 1.0);
    } else {
      f(j - p_.n - m_, art_sign_[static_cast<std::size_t>(j - p_.n - m_)]);
    }
  }

  bool setup() {
    for (int j = 0; j < n_total_; ++j)
      if (lb_[static_cast<std::size_t>(j)] > ub_[static_cast<std::size_t>(j)] + 1e-12) return false;
    status_.assign(static_cast<std::size_t>(n_total_), Status::AtLower);
    for (int j = 0; j < p_.n; ++j) {
      const double lo = lb_[static_cast<std::size_t>(j)], hi = ub_[static_cast<std::size_t>(j)];
      if (lo == -kInf && hi == kInf)
        status_[static_cast<std::size_t>(j)] = Status::FreeZero;
      else if (lo == -kInf)
        status_[static_cast<std::size_t>(j)] = Status::AtUpper;
      else if (hi == kInf)
        status_[static_cast<std::size_t>(j)] = Status::AtLower;
      else
        status_[static_cast<std::size_t>(j)] =
            std::fabs(lo) <= std::fabs(hi) ? Status::AtLower : Status::AtUpper;
    }
    std::vector<double> act(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < p_.n; ++j) {
      const double v = value_of(j);
      if (v == 0.0) continue;
      for_col(j, [&act, v](int r, double a) { act[static_cast<std::size_t>(r)] += a * v; });
    }
    basic_.assign(static_cast<std::size_t>(m_), -1);
    xb_.assign(static_cast<std::size_t>(m_), 0.0);
    binv_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    for (int r = 0; r < m_; ++r) binv(r, r) = 1.0;
    for (int r = 0; r < m_; ++r) {
      const int s = p_.n + r;
      const double sval = p_.rhs[static_cast<std::size_t>(r)] - act[static_cast<std::size_t>(r)];
      if (sval >= lb_[static_cast<std::size_t>(s)] - 1e-11 &&
          sval <= ub_[static_cast<std::size_t>(s)] + 1e-11) {
        basic_[static_cast<std::size_t>(r)] = s;
        status_[static_cast<std::size_t>(s)] = Status::Basic;
        xb_[static_cast<std::size_t>(r)] = sval;
      } else {
        const double clamped =
            std::clamp(sval, lb_[static_cast<std::size_t>(s)], ub_[static_cast<std::size_t>(s)]);
        status_[static_cast<std::size_t>(s)] =
            clamped == lb_[static_cast<std::size_t>(s)] ? Status::AtLower : Status::AtUpper;
        const double resid = sval - clamped;
        const int a = p_.n + m_ + r;
        art_sign_[static_cast<std::size_t>(r)] = resid >= 0.0 ? 1.0 : -1.0;
        art_used_[static_cast<std::size_t>(r)] = true;
        basic_[static_cast<std::size_t>(r)] = a;
        status_[static_cast<std::size_t>(a)] = Status::Basic;
        xb_[static_cast<std::size_t>(r)] = std::fabs(resid);
        binv(r, r) = art_sign_[static_cast<std::size_t>(r)];  // basis column is sign*e_r
      }
    }
    return true;
  }

  // row residuals and bound violations of the current point, against a scaled
  // tolerance
  bool audit() const {
    double scale = 1.0;
    for (double b : p_.rhs) scale = std::max(scale, std::fabs(b));
    const double tol = 64.0 * feas_tol_ * scale;
    std::vector<double> act(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < n_total_; ++j) {
      if (j >= p_.n + m_ && !art_used_[static_cast<std::size_t>(j - p_.n - m_)]) continue;
      double v;
      if (status_[static_cast<std::size_t>(j)] == Status::Basic) {
        v = 0.0;  // collected from xb_ below
      } else {
        v = value_of(j);
      }
      if (v != 0.0)
        for_col(j, [&act, v](int r, double a) { act[static_cast<std::size_t>(r)] += a * v; });
    }
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[static_cast<std::size_t>(r)];
      const double v = xb_[static_cast<std::size_t>(r)];
      if (v < lb_[static_cast<std::size_t>(j)] - tol || v > ub_[static_cast<std::size_t>(j)] + tol)
        return false;
      if (v != 0.0)
        for_col(j, [&act, v](int rr, double a) { act[static_cast<std::size_t>(rr)] += a * v; });
    }
    for (int r = 0; r < m_; ++r)
      if (std::fabs(act[static_cast<std::size_t>(r)] - p_.rhs[static_cast<std::size_t>(r)]) > tol)
        return false;
    return true;
  }

  // rebuild the inverse from the basis columns; false when numerically singular
  bool refactorize() {
    std::vector<double> bmat(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    for (int r = 0; r < m_; ++r) {
      for_col(basic_[static_cast<std::size_t>(r)], [&bmat, r, this](int i, double a) {
        bmat[static_cast<std::size_t>(i) * m_ + r] = a;
      });
    }
    std::vector<double> inv(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    for (int c = 0; c < m_; ++c) {
      int piv = -1;
      double best = 1e-11;
      for (int i = c; i < m_; ++i) {
        const double a = std::fabs(bmat[static_cast<std::size_t>(i) * m_ + c]);
        if (a > best) {
          best = a;
          piv = i;
        }
      }
      if (piv < 0) return false;
      if (piv != c) {
        for (int j = 0; j < m_; ++j) {
          std::swap(bmat[static_cast<std::size_t>(piv) * m_ + j],
                    bmat[static_cast<std::size_t>(c) * m_ + j]);
          std::swap(inv[static_cast<std::size_t>(piv) * m_ + j],
                    inv[static_cast<std::size_t>(c) * m_ + j]);
        }
      }
      const double d = bmat[static_cast<std::size_t>(c) * m_ + c];
      for (int j = 0; j < m_; ++j) {
        bmat[static_cast<std::size_t>(c) * m_ + j] /= d;
        inv[static_cast<std::size_t>(c) * m_ + j] /= d;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == c) continue;
        const double f = bmat[static_cast<std::size_t>(i) * m_ + c];
        if (f == 0.0) continue;
        for (int j = 0; j < m_; ++j) {
          bmat[static_cast<std::size_t>(i) * m_ + j] -= f * bmat[static_cast<std::size_t>(c) * m_ + j];
          inv[static_cast<std::size_t>(i) * m_ + j] -= f * inv[static_cast<std::size_t>(c) * m_ + j];
        }
      }
    }
    binv_ = std::move(inv);
    recompute_basics();
    return true;
  }

  void recompute_basics() {
    std::vector<double> beff(p_.rhs.begin(), p_.rhs.end());
    for (int j = 0; j < n_total_; ++j) {
      if (status_[static_cast<std::size_t>(j)] == Status::Basic) continue;
      if (j >= p_.n + m_ && !art_used_[static_cast<std::size_t>(j - p_.n - m_)]) continue;
      const double v = value_of(j);
      if (v == 0.0) continue;
      for_col(j, [&beff, v](int r, double a) { beff[static_cast<std::size_t>(r)] -= a * v; });
    }
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int r = 0; r < m_; ++r) s += binv(i, r) * beff[static_cast<std::size_t>(r)];
      xb_[static_cast<std::size_t>(i)] = s;
    }
  }

  Outcome primal(const std::vector<double>& cost, bool phase1) {
    const int max_iters = 2000 + 60 * (m_ + p_.n);
    std::vector<double> y(static_cast<std::size_t>(m_));
    std::vector<double> w(static_cast<std::size_t>(m_));
    bool bland = bland_;
    for (int it = 0; it < max_iters; ++it, ++iters_) {
      // duals y = cB^T B^-1
      std::fill(y.begin(), y.end(), 0.0);
      for (int r = 0; r < m_; ++r) {
        const double cb = cost[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])];
        if (cb == 0.0) continue;
        for (int i = 0; i < m_; ++i) y[static_cast<std::size_t>(i)] += cb * binv(r, i);
      }
      // pricing
      int q = -1, dir = 0;
      double best_score = 0.0;
      for (int j = 0; j < n_total_; ++j) {
        const Status st = status_[static_cast<std::size_t>(j)];
        if (st == Status::Basic) continue;
        if (j >= p_.n + m_) {
          if (!art_used_[static_cast<std::size_t>(j - p_.n - m_)]) continue;
        }
        if (lb_[static_cast<std::size_t>(j)] == ub_[static_cast<std::size_t>(j)]) continue;
        double d = cost[static_cast<std::size_t>(j)];
        for_col(j, [&d, &y](int r, double a) { d -= y[static_cast<std::size_t>(r)] * a; });
        int cand_dir = 0;
        if ((st == Status::AtLower || st == Status::FreeZero) && d < -kDualTol)
          cand_dir = +1;
        else if ((st == Status::AtUpper || st == Status::FreeZero) && d > kDualTol)
          cand_dir = -1;
        if (cand_dir == 0) continue;
        const double score = std::fabs(d);
        if (bland) {
          q = j;
          dir = cand_dir;
          break;
        }
        if (score > best_score + 1e-15) {
          best_score = score;
          q = j;
          dir = cand_dir;
        }
      }
      if (q < 0) return Outcome::Optimal;

      // FTRAN: w = B^-1 a_q
      std::fill(w.begin(), w.end(), 0.0);
      for_col(q, [this, &w](int r, double a) {
        for (int i = 0; i < m_; ++i) w[static_cast<std::size_t>(i)] += a * binv(i, r);
      });

      const double vq = value_of(q);
      double t_own = kInf;
      if (dir > 0 && ub_[static_cast<std::size_t>(q)] < kInf)
        t_own = ub_[static_cast<std::size_t>(q)] - vq;
      if (dir < 0 && lb_[static_cast<std::size_t>(q)] > -kInf)
        t_own = vq - lb_[static_cast<std::size_t>(q)];

      // pass 1: relaxed minimum ratio
      double t_relax = t_own;
      for (int r = 0; r < m_; ++r) {
        const double delta = -dir * w[static_cast<std::size_t>(r)];
        if (delta > kPivTol) {
          const double hi = ub_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])];
          if (hi < kInf)
            t_relax = std::min(t_relax, (hi + feas_tol_ - xb_[static_cast<std::size_t>(r)]) / delta);
        } else if (delta < -kPivTol) {
          const double lo = lb_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])];
          if (lo > -kInf)
            t_relax = std::min(t_relax, (lo - feas_tol_ - xb_[static_cast<std::size_t>(r)]) / delta);
        }
      }
      if (t_relax == kInf) {
        return phase1 ? Outcome::Singular : Outcome::Unbounded;
      }
      // pass 2: among ratios within the relaxed bound, largest pivot wins
      int r_leave = -1;
      double t = kInf, best_piv = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double delta = -dir * w[static_cast<std::size_t>(r)];
        double ratio;
        if (delta > kPivTol) {
          const double hi = ub_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])];
          if (hi == kInf) continue;
          ratio = (hi - xb_[static_cast<std::size_t>(r)]) / delta;
        } else if (delta < -kPivTol) {
          const double lo = lb_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])];
          if (lo == -kInf) continue;
          ratio = (lo - xb_[static_cast<std::size_t>(r)]) / delta;
        } else {
          continue;
        }
        if (ratio <= t_relax + 1e-15) {
          const double piv = std::fabs(w[static_cast<std::size_t>(r)]);
          if (piv > best_piv + 1e-15 || (r_leave < 0)) {
            best_piv = piv;
            r_leave = r;
            t = std::max(0.0, ratio);
          }
        }
      }
      if (r_leave < 0 || t_own <= t) {
        // bound flip of the entering variable
        const double step = t_own;
        for (int r = 0; r < m_; ++r) {
          const double delta = -dir * w[static_cast<std::size_t>(r)];
          if (delta != 0.0) xb_[static_cast<std::size_t>(r)] += delta * step;
        }
        status_[static_cast<std::size_t>(q)] =
            dir > 0 ? Status::AtUpper : Status::AtLower;
        continue;
      }

      // pivot
      for (int r = 0; r < m_; ++r) {
        const double delta = -dir * w[static_cast<std::size_t>(r)];
        if (delta != 0.0) xb_[static_cast<std::size_t>(r)] += delta * t;
      }
      const int jl = basic_[static_cast<std::size_t>(r_leave)];
      const double delta_leave = -dir * w[static_cast<std::size_t>(r_leave)];
      status_[static_cast<std::size_t>(jl)] =
          delta_leave > 0.0 ? Status::AtUpper : Status::AtLower;
      if (lb_[static_cast<std::size_t>(jl)] == -kInf && ub_[static_cast<std::size_t>(jl)] == kInf)
        status_[static_cast<std::size_t>(jl)] = Status::FreeZero;  // defensive; cannot leave
      basic_[static_cast<std::size_t>(r_leave)] = q;
      status_[static_cast<std::size_t>(q)] = Status::Basic;
      xb_[static_cast<std::size_t>(r_leave)] = vq + dir * t;

      const double piv = w[static_cast<std::size_t>(r_leave)];
      for (int i = 0; i < m_; ++i) {
        if (i == r_leave) continue;
        const double f = w[static_cast<std::size_t>(i)] / piv;
        if (f == 0.0) continue;
        for (int jj = 0; jj < m_; ++jj) binv(i, jj) -= f * binv(r_leave, jj);
      }
      for (int jj = 0; jj < m_; ++jj) binv(r_leave, jj) /= piv;

      degen_run_ = t < 1e-11 ? degen_run_ + 1 : 0;
      if (degen_run_ > 60) bland = true;
      if (++pivots_since_refactor_ >= 120) {
        pivots_since_refactor_ = 0;
        if (!refactorize()) return Outcome::Singular;
      }
    }
    return Outcome::IterationLimit;
  }
};

}  // namespace detail

inline LpResult solve_lp(const LpProblem& p, const std::vector<double>& lb,
                         const std::vector<double>& ub, double feas_tol = 1e-7) {
  detail::Simplex s1(p, lb, ub, feas_tol, /*bland=*/false);
  LpResult r = s1.run();
  if (r.status == LpStatus::NumericalFailure) {
    detail::Simplex s2(p, lb, ub, feas_tol, /*bland=*/true);
    r = s2.run();
  }
  return r;
}

inline LpResult solve_lp(const LpProblem& p, double feas_tol = 1e-7) {
  return solve_lp(p, p.lb, p.ub, feas_tol);
}

// Continuous relaxation of a MIP under the given branching bounds.
inline LpResult lp_relax(const MipModel& model, const std::vector<double>& lb,
                         const std::vector<double>& ub, double feas_tol = 1e-7) {
  return solve_lp(to_lp(model), lb, ub, feas_tol);
}

inline LpResult lp_relax(const MipModel& model, double feas_tol = 1e-7) {
  return solve_lp(to_lp(model), feas_tol);
}

}  // namespace zome
