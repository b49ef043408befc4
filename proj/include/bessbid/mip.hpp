// Best-bound branch and bound over binary variables with most-fractional
// branching, deterministic node ordering, warm-started node LPs, and a
// deterministic effort budget so identical configurations reproduce identical
// incumbents.
#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <vector>

#include "bessbid/lp.hpp"
#include "bessbid/simplex.hpp"

namespace bessbid {

struct MipOptions {
  double gapTarget = 1e-4;
  double intTol = 1e-6;
  long nodeLimit = 200000;
  long simplexIterationBudget = 20000000;  // across all node LPs
  SimplexOptions lpOpts;
};

struct MipResult {
  SolveStatus status = SolveStatus::Infeasible;  // Optimal = proven to gapTarget
  bool hasIncumbent = false;
  std::vector<double> x;
  double objective = 0;   // incumbent, in the program's own sense
  double bestBound = 0;   // valid bound, same sense
  double gap = kInf;      // (bound - incumbent)/max(1,|incumbent|), sense-adjusted
  long nodes = 0;
  long simplexIterations = 0;
  double boundMonotonicityViolation = 0;  // max (parent - child) bound slip
};

class BranchAndBound {
 public:
  BranchAndBound(const LinearProgram& lp, std::vector<int> binaries)
      : base_(lp), binaries_(std::move(binaries)) {
    minimize_ = base_.sense == ObjSense::Minimize;
  }

  // Candidate solutions (full x vectors) checked and installed as incumbents.
  void addWarmSolution(const std::vector<double>& x) { warm_.push_back(x); }

  MipResult solve(const MipOptions& opts = {}) {
    opts_ = opts;
    MipResult res;
    droppedBound_ = kInf;

    for (const auto& w : warm_) tryInstallIncumbent(w, res);

    nodes_.clear();
    nodes_.push_back(Node{});  // root: no fixing, bound starts at -inf
    nodes_[0].bound = -kInf;
    std::priority_queue<QEnt, std::vector<QEnt>, QCmp> open;
    open.push({-kInf, 0});

    LinearProgram lp = base_;
    while (!open.empty()) {
      if (res.nodes >= opts_.nodeLimit ||
          res.simplexIterations >= opts_.simplexIterationBudget) {
        res.status = SolveStatus::IterLimit;
        finalizeBound(res, std::min(open.top().bound, droppedBound_));
        return res;
      }
      QEnt top = open.top();
      open.pop();
      Node& node = nodes_[top.id];
      if (res.hasIncumbent && top.bound >= senseVal(incumbentObj_) - 1e-9) continue;

      applyFixings(top.id, lp);
      SimplexSolver solver;
      const SimplexBasis* warm = node.basis.valid() && !node.basis.state.empty()
                                     ? &node.basis
                                 : node.parent >= 0 && !nodes_[node.parent].basis.state.empty()
                                     ? &nodes_[node.parent].basis
                                     : nullptr;
      LpSolution sol = solver.solve(lp, opts_.lpOpts, warm);
      res.simplexIterations += sol.iterations;
      ++res.nodes;
      restoreBounds(lp);

      if (sol.status == SolveStatus::Unbounded && top.id == 0) {
        res.status = SolveStatus::Unbounded;
        return res;
      }
      if (sol.status == SolveStatus::Infeasible ||
          sol.status == SolveStatus::Unbounded)
        continue;
      if (sol.status != SolveStatus::Optimal) {
        // node LP hit its own iteration limit; completeness is lost, so the
        // final answer can only be reported as budget-limited
        droppedBound_ = std::min(droppedBound_, top.bound);
        continue;
      }

      node.basis = solver.basis();
      double nb = senseVal(sol.objective);
      if (node.parent >= 0 && nodes_[node.parent].bound > -kInf)
        res.boundMonotonicityViolation = std::max(
            res.boundMonotonicityViolation, nodes_[node.parent].bound - nb - 1e-7);
      node.bound = std::max(node.bound, nb);
      if (res.hasIncumbent && node.bound >= senseVal(incumbentObj_) - 1e-9) continue;

      // true best-bound order: defer if another open node now looks better
      if (!open.empty() && node.bound > open.top().bound + 1e-12) {
        open.push({node.bound, top.id});
        continue;
      }

      int branchCol = pickBranch(sol.x);
      if (branchCol < 0) {
        double obj = sol.objective;
        if (!res.hasIncumbent || senseVal(obj) < senseVal(incumbentObj_) - 1e-12) {
          incumbentObj_ = obj;
          incumbentX_ = sol.x;
          res.hasIncumbent = true;
        }
        continue;
      }
      double frac = sol.x[branchCol];
      int firstVal = frac >= 0.5 ? 1 : 0;
      for (int k = 0; k < 2; ++k) {
        int v = k == 0 ? firstVal : 1 - firstVal;
        Node child;
        child.parent = top.id;
        child.fixCol = branchCol;
        child.fixVal = v;
        child.bound = node.bound;
        nodes_.push_back(std::move(child));
        open.push({node.bound, static_cast<int>(nodes_.size()) - 1});
      }
    }

    // queue exhausted; if any node was dropped the proof is incomplete
    if (res.hasIncumbent) {
      finalizeBound(res, std::min(senseVal(incumbentObj_), droppedBound_));
      res.status = droppedBound_ < senseVal(incumbentObj_) - 1e-9
                       ? SolveStatus::IterLimit
                       : SolveStatus::Optimal;
    } else {
      res.status = droppedBound_ < kInf ? SolveStatus::IterLimit : SolveStatus::Infeasible;
    }
    return res;
  }

 private:
  struct Node {
    int parent = -1;
    int fixCol = -1;
    int fixVal = 0;
    double bound = -kInf;  // sense-adjusted (internal min)
    SimplexBasis basis;
  };
  struct QEnt {
    double bound;
    int id;
  };
  struct QCmp {
    bool operator()(const QEnt& a, const QEnt& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;  // smallest bound first
      return a.id > b.id;                                // then oldest node
    }
  };

  LinearProgram base_;
  std::vector<int> binaries_;
  std::vector<std::vector<double>> warm_;
  std::deque<Node> nodes_;
  MipOptions opts_;
  bool minimize_ = true;
  double incumbentObj_ = 0;
  double droppedBound_ = kInf;
  std::vector<double> incumbentX_;
  std::vector<std::pair<int, std::pair<double, double>>> savedBounds_;

  double senseVal(double obj) const { return minimize_ ? obj : -obj; }

  void finalizeBound(MipResult& res, double internalBound) {
    res.bestBound = minimize_ ? internalBound : -internalBound;
    if (res.hasIncumbent) {
      res.objective = incumbentObj_;
      res.x = incumbentX_;
      double inc = senseVal(incumbentObj_);
      res.gap = (inc - internalBound) / std::max(1.0, std::fabs(inc));
      if (res.gap < 0) res.gap = 0;
      if (res.gap <= opts_.gapTarget) res.status = SolveStatus::Optimal;
    }
  }

  void applyFixings(int nodeId, LinearProgram& lp) {
    savedBounds_.clear();
    for (int id = nodeId; id >= 0; id = nodes_[id].parent) {
      const Node& nd = nodes_[id];
      if (nd.fixCol < 0) continue;
      savedBounds_.push_back({nd.fixCol, {lp.colLower[nd.fixCol], lp.colUpper[nd.fixCol]}});
      lp.colLower[nd.fixCol] = nd.fixVal;
      lp.colUpper[nd.fixCol] = nd.fixVal;
    }
  }

  void restoreBounds(LinearProgram& lp) {
    for (auto it = savedBounds_.rbegin(); it != savedBounds_.rend(); ++it) {
      lp.colLower[it->first] = base_.colLower[it->first];
      lp.colUpper[it->first] = base_.colUpper[it->first];
    }
    savedBounds_.clear();
  }

  int pickBranch(const std::vector<double>& x) const {
    int best = -1;
    double bestScore = 0.5 - opts_.intTol;
    for (int j : binaries_) {
      double f = x[j] - std::floor(x[j]);
      double dist = std::fabs(f - 0.5);
      if (dist < bestScore - 1e-15) {
        bestScore = dist;
        best = j;
      }
    }
    return best;
  }

  void tryInstallIncumbent(const std::vector<double>& x, MipResult& res) {
    if (static_cast<int>(x.size()) != base_.numCols()) return;
    const double ftol = 1e-5;
    for (int j = 0; j < base_.numCols(); ++j)
      if (x[j] < base_.colLower[j] - ftol || x[j] > base_.colUpper[j] + ftol) return;
    for (int j : binaries_)
      if (std::fabs(x[j] - std::round(x[j])) > opts_.intTol) return;
    for (int r = 0; r < base_.numRows(); ++r) {
      double a = base_.rowActivity(r, x);
      double scale = std::max(1.0, std::fabs(base_.rhs[r]));
      switch (base_.rowSense[r]) {
        case RowSense::LE:
          if (a > base_.rhs[r] + ftol * scale) return;
          break;
        case RowSense::GE:
          if (a < base_.rhs[r] - ftol * scale) return;
          break;
        case RowSense::EQ:
          if (std::fabs(a - base_.rhs[r]) > ftol * scale) return;
          break;
      }
    }
    double obj = 0;
    for (int j = 0; j < base_.numCols(); ++j) obj += base_.objCoef[j] * x[j];
    if (!res.hasIncumbent || senseVal(obj) < senseVal(incumbentObj_) - 1e-12) {
      incumbentObj_ = obj;
      incumbentX_ = x;
      res.hasIncumbent = true;
    }
  }
};

}  // namespace bessbid
