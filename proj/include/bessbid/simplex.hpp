// Bounded-variable revised simplex over sparse columns, with iterative
// scaling, a composite (long-step) phase 1, product-form updates between LU
// refactorizations, and a Bland's-rule fallback against cycling. Pivoting is
// fully deterministic: every tie breaks on the smallest index.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bessbid/lp.hpp"
#include "bessbid/lu.hpp"

namespace bessbid {

struct SimplexOptions {
  long maxIterations = 2000000;
  double feasTol = 1e-7;
  double dualTol = 1e-9;
  double pivotTol = 1e-9;
  int refactorEvery = 64;
  int blandAfterDegenerate = 300;
  bool scale = true;
};

// Basis snapshot for warm starts (states cover structurals then slacks).
struct SimplexBasis {
  std::vector<char> state;     // VS values
  std::vector<int> basicIdx;   // basis position -> column
  bool valid() const { return !basicIdx.empty() || state.empty(); }
};

class SimplexSolver {
 public:
  LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts = {},
                   const SimplexBasis* warm = nullptr) {
    opts_ = opts;
    loadProblem(lp);
    LpSolution sol;
    if (m_ == 0 && n_ == 0) {
      sol.status = SolveStatus::Optimal;
      return sol;
    }
    initBasis(warm);
    if (!refactorize()) {
      sol.status = SolveStatus::IterLimit;
      return sol;
    }

    long iters = 0;
    int degenRun = 0;
    bool bland = false;
    phase1_ = currentInfeasibility() > m_ * opts_.feasTol;

    while (iters < opts_.maxIterations) {
      ++iters;
      if (phase1_ && currentInfeasibility() <= opts_.feasTol * std::max(1, m_)) {
        phase1_ = false;
        if (!refactorize()) break;
      }
      computeDuals();
      int j = -1, dir = 0;
      priceEntering(bland, &j, &dir);
      if (j < 0) {
        if (phase1_) {
          finishInfeasible(lp, sol, iters);
          return sol;
        }
        finishOptimal(lp, sol, iters);
        return sol;
      }
      columnFtran(j);
      double theta = 0;
      int leavePos = -1;
      char leaveState = 0;
      RatioOutcome rc = ratioTest(j, dir, &theta, &leavePos, &leaveState);
      if (rc == RatioOutcome::Unbounded) {
        if (phase1_) {  // cannot happen with bounded infeasibility; guard
          finishInfeasible(lp, sol, iters);
          return sol;
        }
        sol.status = SolveStatus::Unbounded;
        sol.iterations = iters;
        return sol;
      }
      if (rc == RatioOutcome::BoundFlip) {
        applyBoundFlip(j, dir, theta);
        degenRun = 0;
        continue;
      }
      if (std::fabs(alpha_[leavePos]) < 1e-7) {
        // stale factorization or bad pivot; refresh and retry once
        if (etaSinceRefactor_ > 0) {
          if (!refactorize()) break;
          --iters;
          continue;
        }
        banned_.push_back(j);
        --iters;
        continue;
      }
      applyPivot(j, dir, theta, leavePos, leaveState);
      banned_.clear();
      if (theta <= 1e-10) {
        if (++degenRun >= opts_.blandAfterDegenerate) bland = true;
      } else {
        degenRun = 0;
        bland = false;
      }
      if (++etaSinceRefactor_ >= opts_.refactorEvery)
        if (!refactorize()) break;
    }
    // iteration or numerical limit
    finishOptimal(lp, sol, iters);
    sol.status = SolveStatus::IterLimit;
    return sol;
  }

  const SimplexBasis& basis() const { return basisOut_; }

 private:
  enum VS : char { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeZero = 3 };
  enum class RatioOutcome { Pivot, BoundFlip, Unbounded };

  SimplexOptions opts_;
  int n_ = 0, m_ = 0, nTot_ = 0;
  // column-wise matrix including slack identity
  std::vector<int> colStart_;
  std::vector<int> colRow_;
  std::vector<double> colVal_;
  std::vector<double> lo_, up_, cost_;  // scaled bounds/objective, size nTot
  std::vector<double> rhs_;             // scaled rhs
  std::vector<double> rowScale_, colScale_;
  bool maximize_ = false;

  std::vector<char> state_;
  std::vector<int> basicIdx_;    // position -> column
  std::vector<int> posOfCol_;    // column -> position or -1
  std::vector<double> beta_;     // basic values
  std::vector<double> y_;        // duals of current phase costs
  std::vector<double> alpha_;    // ftran of entering column
  std::vector<double> workRhs_;
  std::vector<int> banned_;
  LuFactor lu_;
  int etaSinceRefactor_ = 0;
  bool phase1_ = false;
  SimplexBasis basisOut_;

  double nbValue(int j) const {
    switch (state_[j]) {
      case kAtLower: return lo_[j];
      case kAtUpper: return up_[j];
      default: return 0.0;
    }
  }

  void loadProblem(const LinearProgram& lp) {
    n_ = lp.numCols();
    m_ = lp.numRows();
    nTot_ = n_ + m_;
    maximize_ = lp.sense == ObjSense::Maximize;

    // column-wise structural matrix
    std::vector<int> count(n_, 0);
    for (int k = 0; k < lp.nnz(); ++k) ++count[lp.rowCol[k]];
    colStart_.assign(nTot_ + 1, 0);
    for (int j = 0; j < n_; ++j) colStart_[j + 1] = colStart_[j] + count[j];
    for (int j = n_; j < nTot_; ++j) colStart_[j + 1] = colStart_[j] + 1;
    colRow_.assign(colStart_[nTot_], 0);
    colVal_.assign(colStart_[nTot_], 0.0);
    std::vector<int> fill(n_, 0);
    for (int r = 0; r < m_; ++r)
      for (int k = lp.rowStart[r]; k < lp.rowStart[r + 1]; ++k) {
        int j = lp.rowCol[k];
        int at = colStart_[j] + fill[j]++;
        colRow_[at] = r;
        colVal_[at] = lp.rowVal[k];
      }
    for (int r = 0; r < m_; ++r) {
      colRow_[colStart_[n_ + r]] = r;
      colVal_[colStart_[n_ + r]] = 1.0;
    }

    // scaling (geometric, a few sweeps over structural entries)
    rowScale_.assign(m_, 1.0);
    colScale_.assign(n_, 1.0);
    if (opts_.scale && lp.nnz() > 0) {
      for (int pass = 0; pass < 3; ++pass) {
        std::vector<double> rmax(m_, 0.0), rmin(m_, kInf);
        for (int j = 0; j < n_; ++j)
          for (int k = colStart_[j]; k < colStart_[j + 1]; ++k) {
            double a = std::fabs(colVal_[k]) * colScale_[j] * rowScale_[colRow_[k]];
            if (a > 0) {
              rmax[colRow_[k]] = std::max(rmax[colRow_[k]], a);
              rmin[colRow_[k]] = std::min(rmin[colRow_[k]], a);
            }
          }
        for (int r = 0; r < m_; ++r)
          if (rmax[r] > 0) rowScale_[r] /= std::sqrt(rmax[r] * rmin[r]);
        std::vector<double> cmax(n_, 0.0), cmin(n_, kInf);
        for (int j = 0; j < n_; ++j)
          for (int k = colStart_[j]; k < colStart_[j + 1]; ++k) {
            double a = std::fabs(colVal_[k]) * colScale_[j] * rowScale_[colRow_[k]];
            if (a > 0) {
              cmax[j] = std::max(cmax[j], a);
              cmin[j] = std::min(cmin[j], a);
            }
          }
        for (int j = 0; j < n_; ++j)
          if (cmax[j] > 0) colScale_[j] /= std::sqrt(cmax[j] * cmin[j]);
      }
    }
    for (int j = 0; j < n_; ++j)
      for (int k = colStart_[j]; k < colStart_[j + 1]; ++k)
        colVal_[k] *= colScale_[j] * rowScale_[colRow_[k]];

    lo_.assign(nTot_, 0.0);
    up_.assign(nTot_, 0.0);
    cost_.assign(nTot_, 0.0);
    const double sgn = maximize_ ? -1.0 : 1.0;
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.colLower[j] / colScale_[j];
      up_[j] = lp.colUpper[j] / colScale_[j];
      cost_[j] = sgn * lp.objCoef[j] * colScale_[j];
    }
    rhs_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      rhs_[r] = lp.rhs[r] * rowScale_[r];
      int s = n_ + r;
      switch (lp.rowSense[r]) {
        case RowSense::LE: lo_[s] = 0; up_[s] = kInf; break;
        case RowSense::GE: lo_[s] = -kInf; up_[s] = 0; break;
        case RowSense::EQ: lo_[s] = 0; up_[s] = 0; break;
      }
    }
    beta_.assign(m_, 0.0);
    y_.assign(m_, 0.0);
    alpha_.assign(m_, 0.0);
    workRhs_.assign(m_, 0.0);
    banned_.clear();
  }

  void initBasis(const SimplexBasis* warm) {
    state_.assign(nTot_, kAtLower);
    basicIdx_.assign(m_, 0);
    posOfCol_.assign(nTot_, -1);
    bool warmOk = warm && warm->valid() &&
                  static_cast<int>(warm->state.size()) == nTot_ &&
                  static_cast<int>(warm->basicIdx.size()) == m_;
    if (warmOk) {
      state_ = warm->state;
      basicIdx_ = warm->basicIdx;
      // sanity: every basic column marked basic exactly once
      std::vector<char> seen(nTot_, 0);
      for (int p = 0; p < m_ && warmOk; ++p) {
        int c = basicIdx_[p];
        if (c < 0 || c >= nTot_ || seen[c] || state_[c] != kBasic) warmOk = false;
        else seen[c] = 1;
      }
      if (warmOk)
        for (int j = 0; j < nTot_ && warmOk; ++j)
          if (state_[j] == kBasic && !seen[j]) warmOk = false;
      if (warmOk) {
        // nonbasic states must respect finite bounds
        for (int j = 0; j < nTot_; ++j) {
          if (state_[j] == kAtLower && lo_[j] == -kInf)
            state_[j] = up_[j] < kInf ? kAtUpper : kFreeZero;
          else if (state_[j] == kAtUpper && up_[j] == kInf)
            state_[j] = lo_[j] > -kInf ? kAtLower : kFreeZero;
        }
      }
    }
    if (!warmOk) {
      for (int j = 0; j < n_; ++j) {
        if (lo_[j] > -kInf)
          state_[j] = kAtLower;
        else if (up_[j] < kInf)
          state_[j] = kAtUpper;
        else
          state_[j] = kFreeZero;
      }
      for (int r = 0; r < m_; ++r) {
        basicIdx_[r] = n_ + r;
        state_[n_ + r] = kBasic;
      }
    }
    for (int p = 0; p < m_; ++p) posOfCol_[basicIdx_[p]] = p;
  }

  bool refactorize() {
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::vector<SparseVec> cols(m_);
      for (int p = 0; p < m_; ++p) {
        int j = basicIdx_[p];
        for (int k = colStart_[j]; k < colStart_[j + 1]; ++k)
          cols[p].push_back({colRow_[k], colVal_[k]});
      }
      std::vector<int> failed = lu_.factorize(m_, cols);
      if (failed.empty()) {
        etaSinceRefactor_ = 0;
        recomputeBeta();
        return true;
      }
      // repair: swap dependent basics for slacks of uncovered rows
      std::vector<char> rowCovered(m_, 0);
      for (int p = 0; p < m_; ++p) {
        if (std::find(failed.begin(), failed.end(), p) != failed.end()) continue;
        // covered rows tracked loosely; slack replacement below checks usage
      }
      std::vector<char> slackBasic(m_, 0);
      for (int p = 0; p < m_; ++p)
        if (basicIdx_[p] >= n_) slackBasic[basicIdx_[p] - n_] = 1;
      size_t fi = 0;
      for (int r = 0; r < m_ && fi < failed.size(); ++r) {
        if (slackBasic[r]) continue;
        int p = failed[fi++];
        int old = basicIdx_[p];
        posOfCol_[old] = -1;
        state_[old] = lo_[old] > -kInf ? kAtLower
                      : up_[old] < kInf ? kAtUpper
                                        : kFreeZero;
        basicIdx_[p] = n_ + r;
        state_[n_ + r] = kBasic;
        posOfCol_[n_ + r] = p;
        slackBasic[r] = 1;
      }
      if (fi < failed.size()) return false;  // cannot repair
    }
    return false;
  }

  void recomputeBeta() {
    workRhs_ = rhs_;
    for (int j = 0; j < nTot_; ++j) {
      if (state_[j] == kBasic) continue;
      double v = nbValue(j);
      if (v == 0.0) continue;
      for (int k = colStart_[j]; k < colStart_[j + 1]; ++k)
        workRhs_[colRow_[k]] -= colVal_[k] * v;
    }
    lu_.ftran(workRhs_);
    beta_ = workRhs_;
  }

  double currentInfeasibility() const {
    double s = 0;
    for (int p = 0; p < m_; ++p) {
      int j = basicIdx_[p];
      if (beta_[p] < lo_[j]) s += lo_[j] - beta_[p];
      else if (beta_[p] > up_[j]) s += beta_[p] - up_[j];
    }
    return s;
  }

  void computeDuals() {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (int p = 0; p < m_; ++p) {
      int j = basicIdx_[p];
      if (phase1_) {
        if (beta_[p] > up_[j] + opts_.feasTol) y_[p] = 1.0;
        else if (beta_[p] < lo_[j] - opts_.feasTol) y_[p] = -1.0;
      } else {
        y_[p] = cost_[j];
      }
    }
    lu_.btran(y_);
  }

  double reducedCost(int j) const {
    double d = phase1_ ? 0.0 : cost_[j];
    for (int k = colStart_[j]; k < colStart_[j + 1]; ++k)
      d -= y_[colRow_[k]] * colVal_[k];
    return d;
  }

  void priceEntering(bool bland, int* jOut, int* dirOut) {
    *jOut = -1;
    *dirOut = 0;
    double best = opts_.dualTol;
    for (int j = 0; j < nTot_; ++j) {
      if (state_[j] == kBasic) continue;
      if (lo_[j] == up_[j]) continue;  // fixed / parameter column
      if (!banned_.empty() &&
          std::find(banned_.begin(), banned_.end(), j) != banned_.end())
        continue;
      double d = reducedCost(j);
      int dir = 0;
      double score = 0;
      if (state_[j] == kAtLower && d < -opts_.dualTol) {
        dir = 1;
        score = -d;
      } else if (state_[j] == kAtUpper && d > opts_.dualTol) {
        dir = -1;
        score = d;
      } else if (state_[j] == kFreeZero && std::fabs(d) > opts_.dualTol) {
        dir = d < 0 ? 1 : -1;
        score = std::fabs(d);
      }
      if (dir == 0) continue;
      if (bland) {
        *jOut = j;
        *dirOut = dir;
        return;
      }
      if (score > best) {
        best = score;
        *jOut = j;
        *dirOut = dir;
      }
    }
  }

  void columnFtran(int j) {
    std::fill(alpha_.begin(), alpha_.end(), 0.0);
    for (int k = colStart_[j]; k < colStart_[j + 1]; ++k)
      alpha_[colRow_[k]] = colVal_[k];
    lu_.ftran(alpha_);
  }

  RatioOutcome ratioTest(int j, int dir, double* thetaOut, int* leavePos,
                         char* leaveState) {
    const double enterRange =
        (lo_[j] > -kInf && up_[j] < kInf) ? up_[j] - lo_[j] : kInf;
    if (phase1_) return ratioTestPhase1(dir, enterRange, thetaOut, leavePos, leaveState);

    double bestTheta = enterRange;
    int bestPos = -1;
    char bestBound = 0;
    double bestPivot = 0;
    for (int p = 0; p < m_; ++p) {
      double a = alpha_[p];
      if (std::fabs(a) < opts_.pivotTol) continue;
      int bj = basicIdx_[p];
      double rho = -dir * a;  // d beta / d theta
      double th;
      char bound;
      if (rho < 0) {
        if (lo_[bj] == -kInf) continue;
        th = (beta_[p] - lo_[bj]) / (-rho);
        bound = kAtLower;
      } else {
        if (up_[bj] == kInf) continue;
        th = (up_[bj] - beta_[p]) / rho;
        bound = kAtUpper;
      }
      if (th < 0) th = 0;
      if (th < bestTheta - 1e-12 ||
          (th < bestTheta + 1e-12 &&
           (bestPos < 0 || std::fabs(a) > std::fabs(bestPivot) + 1e-12))) {
        bestTheta = th;
        bestPos = p;
        bestBound = bound;
        bestPivot = a;
      }
    }
    if (bestPos < 0) {
      if (enterRange == kInf) return RatioOutcome::Unbounded;
      *thetaOut = enterRange;
      return RatioOutcome::BoundFlip;
    }
    if (enterRange < bestTheta) {
      *thetaOut = enterRange;
      return RatioOutcome::BoundFlip;
    }
    *thetaOut = bestTheta;
    *leavePos = bestPos;
    *leaveState = bestBound;
    return RatioOutcome::Pivot;
  }

  // Long-step composite ratio test: walk the breakpoints of the piecewise
  // linear infeasibility sum until its slope turns nonnegative.
  RatioOutcome ratioTestPhase1(int dir, double enterRange, double* thetaOut,
                               int* leavePos, char* leaveState) {
    struct Ev {
      double theta;
      double dslope;
      int pos;
      char bound;
    };
    std::vector<Ev> evs;
    double slope = 0;
    for (int p = 0; p < m_; ++p) {
      double a = alpha_[p];
      if (std::fabs(a) < opts_.pivotTol) continue;
      int bj = basicIdx_[p];
      double rho = -dir * a;
      double b = beta_[p], l = lo_[bj], u = up_[bj];
      if (b < l - opts_.feasTol) slope -= rho;       // below, improving if rho>0
      else if (b > u + opts_.feasTol) slope += rho;  // above
      if (rho > 0) {
        if (b < l) {
          evs.push_back({(l - b) / rho, rho, p, kAtLower});
          if (u < kInf) evs.push_back({(u - b) / rho, rho, p, kAtUpper});
        } else if (b <= u) {
          if (u < kInf) evs.push_back({std::max(0.0, (u - b) / rho), rho, p, kAtUpper});
        }
      } else {
        if (b > u) {
          evs.push_back({(u - b) / rho, -rho, p, kAtUpper});
          if (l > -kInf) evs.push_back({(l - b) / rho, -rho, p, kAtLower});
        } else if (b >= l) {
          if (l > -kInf) evs.push_back({std::max(0.0, (l - b) / rho), -rho, p, kAtLower});
        }
      }
    }
    std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
      if (a.theta != b.theta) return a.theta < b.theta;
      return a.pos < b.pos;
    });
    for (const Ev& e : evs) {
      if (enterRange < e.theta) {
        *thetaOut = enterRange;
        return RatioOutcome::BoundFlip;
      }
      slope += e.dslope;
      if (slope >= -1e-12) {
        *thetaOut = e.theta;
        *leavePos = e.pos;
        *leaveState = e.bound;
        return RatioOutcome::Pivot;
      }
    }
    if (enterRange < kInf) {
      *thetaOut = enterRange;
      return RatioOutcome::BoundFlip;
    }
    if (!evs.empty()) {  // numerical guard: stop at the last breakpoint
      *thetaOut = evs.back().theta;
      *leavePos = evs.back().pos;
      *leaveState = evs.back().bound;
      return RatioOutcome::Pivot;
    }
    return RatioOutcome::Unbounded;
  }

  void applyBoundFlip(int j, int dir, double theta) {
    if (theta != 0.0)
      for (int p = 0; p < m_; ++p)
        if (alpha_[p] != 0.0) beta_[p] -= dir * theta * alpha_[p];
    state_[j] = state_[j] == kAtLower ? kAtUpper : kAtLower;
  }

  void applyPivot(int j, int dir, double theta, int leavePos, char leaveState) {
    const double enterVal = nbValue(j) + dir * theta;
    if (theta != 0.0)
      for (int p = 0; p < m_; ++p)
        if (alpha_[p] != 0.0) beta_[p] -= dir * theta * alpha_[p];
    int leaveCol = basicIdx_[leavePos];
    state_[leaveCol] = leaveState;
    posOfCol_[leaveCol] = -1;
    basicIdx_[leavePos] = j;
    state_[j] = kBasic;
    posOfCol_[j] = leavePos;
    beta_[leavePos] = enterVal;
    lu_.pushEta(leavePos, alpha_);
  }

  void finishOptimal(const LinearProgram& lp, LpSolution& sol, long iters) {
    refactorize();  // fresh numbers for the certificate
    phase1_ = false;
    computeDuals();
    sol.status = SolveStatus::Optimal;
    sol.iterations = iters;
    sol.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      double v = state_[j] == kBasic ? beta_[posOfCol_[j]] : nbValue(j);
      sol.x[j] = v * colScale_[j];
    }
    const double sgn = maximize_ ? -1.0 : 1.0;
    sol.objective = 0;
    for (int j = 0; j < n_; ++j) sol.objective += lp.objCoef[j] * sol.x[j];
    sol.rowDual.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) sol.rowDual[r] = sgn * y_[r] * rowScale_[r];
    sol.colReducedCost.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j)
      sol.colReducedCost[j] = sgn * reducedCost(j) / colScale_[j];
    // degeneracy that can produce non-unique duals/primal: a non-fixed basic
    // sitting on a bound, or a non-fixed nonbasic with zero reduced cost
    sol.degenerate = false;
    for (int p = 0; p < m_ && !sol.degenerate; ++p) {
      int j = basicIdx_[p];
      if (lo_[j] == up_[j]) continue;
      if ((lo_[j] > -kInf && std::fabs(beta_[p] - lo_[j]) < 1e-7) ||
          (up_[j] < kInf && std::fabs(beta_[p] - up_[j]) < 1e-7))
        sol.degenerate = true;
    }
    for (int j = 0; j < nTot_ && !sol.degenerate; ++j)
      if (state_[j] != kBasic && lo_[j] != up_[j] &&
          std::fabs(reducedCost(j)) < opts_.dualTol)
        sol.degenerate = true;
    basisOut_.state = state_;
    basisOut_.basicIdx = basicIdx_;
  }

  void finishInfeasible(const LinearProgram& lp, LpSolution& sol, long iters) {
    (void)lp;
    sol.status = SolveStatus::Infeasible;
    sol.iterations = iters;
    sol.infeasibleRows.clear();
    for (int p = 0; p < m_; ++p) {
      int j = basicIdx_[p];
      if (j < n_) continue;
      if (beta_[p] < lo_[j] - opts_.feasTol || beta_[p] > up_[j] + opts_.feasTol)
        sol.infeasibleRows.push_back(j - n_);
    }
    // also nonbasic slack rows cannot be violated; violated structural basics
    // indicate bound conflicts, reported via their covering rows
    for (int p = 0; p < m_; ++p) {
      int j = basicIdx_[p];
      if (j >= n_) continue;
      if (beta_[p] < lo_[j] - opts_.feasTol || beta_[p] > up_[j] + opts_.feasTol)
        for (int k = colStart_[j]; k < colStart_[j + 1]; ++k)
          sol.infeasibleRows.push_back(colRow_[k]);
    }
    std::sort(sol.infeasibleRows.begin(), sol.infeasibleRows.end());
    sol.infeasibleRows.erase(
        std::unique(sol.infeasibleRows.begin(), sol.infeasibleRows.end()),
        sol.infeasibleRows.end());
    basisOut_.state = state_;
    basisOut_.basicIdx = basicIdx_;
  }
};

// Optimality certificate in the original (unscaled) space.
struct LpCertificate {
  double maxPrimalResidual = 0;   // row/bound violation
  double maxDualResidual = 0;     // dual feasibility violation
  double maxComplementarity = 0;  // |slack * dual| style products
  double dualityGapRel = 0;       // |primal - dual| / max(1, |primal|)
  double dualObjective = 0;
};

inline LpCertificate certify(const LinearProgram& lp, const LpSolution& sol) {
  LpCertificate c;
  if (sol.status != SolveStatus::Optimal) return c;
  const int n = lp.numCols(), m = lp.numRows();
  const double sgn = lp.sense == ObjSense::Maximize ? -1.0 : 1.0;
  // primal feasibility
  for (int j = 0; j < n; ++j) {
    c.maxPrimalResidual = std::max(c.maxPrimalResidual, lp.colLower[j] - sol.x[j]);
    c.maxPrimalResidual = std::max(c.maxPrimalResidual, sol.x[j] - lp.colUpper[j]);
  }
  std::vector<double> act(m, 0.0);
  for (int r = 0; r < m; ++r) {
    act[r] = lp.rowActivity(r, sol.x);
    double lo = lp.rowSense[r] == RowSense::LE ? -kInf : lp.rhs[r];
    double hi = lp.rowSense[r] == RowSense::GE ? kInf : lp.rhs[r];
    c.maxPrimalResidual = std::max(c.maxPrimalResidual, lo - act[r]);
    c.maxPrimalResidual = std::max(c.maxPrimalResidual, act[r] - hi);
  }
  // dual feasibility in min convention
  std::vector<double> d(n, 0.0);
  for (int j = 0; j < n; ++j) d[j] = sgn * lp.objCoef[j];
  for (int r = 0; r < m; ++r)
    for (int k = lp.rowStart[r]; k < lp.rowStart[r + 1]; ++k)
      d[lp.rowCol[k]] -= sgn * sol.rowDual[r] * lp.rowVal[k];
  for (int r = 0; r < m; ++r) {
    double y = sgn * sol.rowDual[r];
    if (lp.rowSense[r] == RowSense::GE) c.maxDualResidual = std::max(c.maxDualResidual, -y);
    if (lp.rowSense[r] == RowSense::LE) c.maxDualResidual = std::max(c.maxDualResidual, y);
    double slack = act[r] - lp.rhs[r];
    if (lp.rowSense[r] != RowSense::EQ)
      c.maxComplementarity = std::max(c.maxComplementarity, std::fabs(y * slack));
  }
  double dualObj = 0;
  for (int r = 0; r < m; ++r) dualObj += sgn * sol.rowDual[r] * lp.rhs[r];
  for (int j = 0; j < n; ++j) {
    double dj = d[j];
    bool atLo = std::fabs(sol.x[j] - lp.colLower[j]) < 1e-6;
    bool atUp = std::fabs(sol.x[j] - lp.colUpper[j]) < 1e-6;
    if (!atLo && !atUp) c.maxDualResidual = std::max(c.maxDualResidual, std::fabs(dj));
    else if (atLo && !atUp) c.maxDualResidual = std::max(c.maxDualResidual, -dj);
    else if (atUp && !atLo) c.maxDualResidual = std::max(c.maxDualResidual, dj);
    if (dj > 0 && lp.colLower[j] > -kInf) dualObj += dj * lp.colLower[j];
    else if (dj < 0 && lp.colUpper[j] < kInf) dualObj += dj * lp.colUpper[j];
    if (lp.colLower[j] > -kInf)
      c.maxComplementarity =
          std::max(c.maxComplementarity, std::max(0.0, dj) * (sol.x[j] - lp.colLower[j]));
    if (lp.colUpper[j] < kInf)
      c.maxComplementarity =
          std::max(c.maxComplementarity, std::max(0.0, -dj) * (lp.colUpper[j] - sol.x[j]));
  }
  double primal = sgn * sol.objective;
  c.dualObjective = lp.sense == ObjSense::Maximize ? -dualObj : dualObj;
  c.dualityGapRel = std::fabs(primal - dualObj) / std::max(1.0, std::fabs(primal));
  return c;
}

}  // namespace bessbid
