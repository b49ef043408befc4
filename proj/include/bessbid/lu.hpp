// Sparse LU factorization of a simplex basis with singleton peeling and
// Markowitz-style pivoting, plus a product-form eta file for cheap basis
// updates between refactorizations.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bessbid {

using SparseVec = std::vector<std::pair<int, double>>;  // (index, value), sorted

class LuFactor {
 public:
  // Factorize the m x m matrix whose columns are cols[0..m-1], entries sorted
  // by row. Returns the list of column positions that could not be pivoted
  // (empty on success); the caller repairs the basis for those.
  std::vector<int> factorize(int m, const std::vector<SparseVec>& cols) {
    m_ = m;
    pivRow_.clear();
    pivCol_.clear();
    pivVal_.clear();
    lEnt_.assign(m, {});
    uEnt_.assign(m, {});
    etas_.clear();
    if (m == 0) return {};

    // Working copy, column-wise; rowCols is a stale-tolerant row index.
    work_ = cols;
    rowCols_.assign(m, {});
    rowCount_.assign(m, 0);
    colCount_.assign(m, 0);
    rowDone_.assign(m, 0);
    colDone_.assign(m, 0);
    rowPivOrder_.assign(m, -1);
    colPivOrder_.assign(m, -1);
    for (int j = 0; j < m; ++j) {
      colCount_[j] = static_cast<int>(work_[j].size());
      for (auto& [r, v] : work_[j]) {
        (void)v;
        rowCols_[r].push_back(j);
        ++rowCount_[r];
      }
    }
    ensureScratch();

    int pivots = 0;
    std::vector<int> colQueue, rowQueue;
    for (int j = 0; j < m; ++j)
      if (colCount_[j] == 1) colQueue.push_back(j);
    for (int r = 0; r < m; ++r)
      if (rowCount_[r] == 1) rowQueue.push_back(r);

    auto noteCol = [&](int j) {
      if (!colDone_[j] && colCount_[j] == 1) colQueue.push_back(j);
    };
    auto noteRow = [&](int r) {
      if (!rowDone_[r] && rowCount_[r] == 1) rowQueue.push_back(r);
    };

    while (pivots < m) {
      // 1) fill-free singleton peeling
      bool peeled = false;
      while (!colQueue.empty() || !rowQueue.empty()) {
        if (!colQueue.empty()) {
          int j = colQueue.back();
          colQueue.pop_back();
          if (colDone_[j] || colCount_[j] != 1) continue;
          int pr = -1;
          double pv = 0;
          for (auto& [r, v] : work_[j])
            if (!rowDone_[r]) {
              pr = r;
              pv = v;
              break;
            }
          if (pr < 0 || std::fabs(pv) < kAbsPivotTol) {
            colDone_[j] = 1;  // structurally/numerically dead column
            continue;
          }
          recordPivot(pr, j, pv, pivots);
          // U row: remaining active entries of row pr
          for (int c : rowCols_[pr]) {
            if (colDone_[c]) continue;
            double v;
            if (activeValue(c, pr, &v)) {
              uEnt_[pivots].push_back({c, v});
              if (--colCount_[c] == 1) noteCol(c);
            }
          }
          rowDone_[pr] = 1;
          colDone_[j] = 1;
          ++pivots;
          peeled = true;
          continue;
        }
        int r = rowQueue.back();
        rowQueue.pop_back();
        if (rowDone_[r] || rowCount_[r] != 1) continue;
        int pc = -1;
        double pv = 0;
        for (int c : rowCols_[r]) {
          if (colDone_[c]) continue;
          double v;
          if (activeValue(c, r, &v)) {
            pc = c;
            pv = v;
            break;
          }
        }
        if (pc < 0) {
          rowDone_[r] = 1;
          continue;
        }
        if (std::fabs(pv) < kAbsPivotTol) {
          // treat as dead; the column may still pivot elsewhere
          rowDone_[r] = 1;
          continue;
        }
        recordPivot(r, pc, pv, pivots);
        rowDone_[r] = 1;
        colDone_[pc] = 1;
        for (auto& [i, v] : work_[pc]) {
          if (rowDone_[i]) continue;
          lEnt_[pivots].push_back({i, v / pv});
          if (--rowCount_[i] == 1) noteRow(i);
        }
        ++pivots;
        peeled = true;
      }
      if (pivots == m) break;
      if (peeled) continue;

      // 2) general pivot on the bump
      int bj = pickBumpColumn();
      if (bj < 0) break;  // nothing left with usable entries
      int pr = -1;
      double pv = 0, colMax = 0;
      for (auto& [r, v] : work_[bj])
        if (!rowDone_[r]) colMax = std::max(colMax, std::fabs(v));
      if (colMax < kAbsPivotTol) {
        colDone_[bj] = 1;
        continue;
      }
      int bestCount = 1 << 30;
      for (auto& [r, v] : work_[bj]) {
        if (rowDone_[r] || std::fabs(v) < 0.05 * colMax) continue;
        if (rowCount_[r] < bestCount ||
            (rowCount_[r] == bestCount && r < pr)) {
          bestCount = rowCount_[r];
          pr = r;
          pv = v;
        }
      }
      if (pr < 0) {
        colDone_[bj] = 1;
        continue;
      }
      recordPivot(pr, bj, pv, pivots);
      rowDone_[pr] = 1;
      colDone_[bj] = 1;

      // multipliers for rows below the pivot
      SparseVec mults;
      for (auto& [i, v] : work_[bj])
        if (!rowDone_[i]) {
          mults.push_back({i, v / pv});
          --rowCount_[i];  // entry in pivot column retires
        }
      lEnt_[pivots] = mults;

      // pivot row's surviving entries become the U row; update those columns
      std::vector<std::pair<int, double>> urow;
      for (int c : rowCols_[pr]) {
        if (colDone_[c]) continue;
        double v;
        if (activeValue(c, pr, &v)) urow.push_back({c, v});
      }
      std::sort(urow.begin(), urow.end());
      urow.erase(std::unique(urow.begin(), urow.end(),
                             [](auto& a, auto& b) { return a.first == b.first; }),
                 urow.end());
      uEnt_[pivots] = urow;
      for (auto& [c, u] : urow) updateColumn(c, pr, u, mults);
      for (auto& [i, mi] : mults) {
        (void)mi;
        if (rowCount_[i] == 1) noteRow(i);
      }
      ++pivots;
    }

    std::vector<int> failed;
    if (pivots < m)
      for (int j = 0; j < m; ++j)
        if (colPivOrder_[j] < 0) failed.push_back(j);
    releaseWork();
    return failed;
  }

  int etaCount() const { return static_cast<int>(etas_.size()); }

  // Append a product-form update: basis position p replaced, alpha = B^-1 a.
  void pushEta(int p, const std::vector<double>& alpha, double dropTol = 1e-13) {
    Eta e;
    e.pos = p;
    e.pivot = alpha[p];
    for (int i = 0; i < m_; ++i)
      if (i != p && std::fabs(alpha[i]) > dropTol) e.col.push_back({i, alpha[i]});
    etas_.push_back(std::move(e));
  }

  // Solve B x = b in place (b has size m).
  void ftran(std::vector<double>& x) const {
    ftranBase(x);
    for (const auto& e : etas_) {
      double xp = x[e.pos] / e.pivot;
      if (xp != 0.0)
        for (auto& [i, a] : e.col) x[i] -= a * xp;
      x[e.pos] = xp;
    }
  }

  // Solve B^T y = c in place. For each eta (I with column p set to alpha),
  // (E^T)^-1 y sets y_p to (y_p - sum_{i != p} alpha_i y_i) / alpha_p.
  void btran(std::vector<double>& y) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = y[it->pos];
      for (auto& [i, a] : it->col) s -= a * y[i];
      y[it->pos] = s / it->pivot;
    }
    btranBase(y);
  }

 private:
  static constexpr double kAbsPivotTol = 1e-11;

  struct Eta {
    int pos = 0;
    double pivot = 1;
    SparseVec col;
  };

  int m_ = 0;
  std::vector<int> pivRow_, pivCol_;
  std::vector<double> pivVal_;
  std::vector<SparseVec> lEnt_;  // per pivot k: rows below with multipliers
  std::vector<SparseVec> uEnt_;  // per pivot k: (column, value) right of pivot
  std::vector<Eta> etas_;
  std::vector<int> rowPivOrder_, colPivOrder_;

  // scratch used only during factorize()
  std::vector<SparseVec> work_;
  std::vector<std::vector<int>> rowCols_;
  std::vector<int> rowCount_, colCount_;
  std::vector<char> rowDone_, colDone_;
  std::vector<double> scatVal_;
  std::vector<int> scatMark_;
  int scatEpoch_ = 0;

  void ensureScratch() {
    if (static_cast<int>(scatVal_.size()) < m_) {
      scatVal_.assign(m_, 0.0);
      scatMark_.assign(m_, 0);
      scatEpoch_ = 0;
    }
  }

  void releaseWork() {
    work_.clear();
    work_.shrink_to_fit();
    rowCols_.clear();
    rowCols_.shrink_to_fit();
  }

  void recordPivot(int r, int c, double v, int k) {
    pivRow_.push_back(r);
    pivCol_.push_back(c);
    pivVal_.push_back(v);
    rowPivOrder_[r] = k;
    colPivOrder_[c] = k;
  }

  bool activeValue(int col, int row, double* out) const {
    const auto& v = work_[col];
    auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(row, -kInfV()),
                               [](auto& a, auto& b) { return a.first < b.first; });
    if (it != v.end() && it->first == row) {
      *out = it->second;
      return true;
    }
    return false;
  }

  static double kInfV() { return 1e308; }

  int pickBumpColumn() {
    // smallest active column count wins; ties to the smallest index
    int best = -1, bestCount = 1 << 30;
    for (int j = 0; j < m_; ++j) {
      if (colDone_[j]) continue;
      if (colCount_[j] < bestCount) {
        bestCount = colCount_[j];
        best = j;
        if (bestCount <= 2) break;
      }
    }
    return best;
  }

  void updateColumn(int c, int pivotRow, double u, const SparseVec& mults) {
    (void)pivotRow;
    ++scatEpoch_;
    // scatter surviving entries
    for (auto& [r, v] : work_[c]) {
      if (rowDone_[r]) continue;
      scatVal_[r] = v;
      scatMark_[r] = scatEpoch_;
    }
    for (auto& [i, mi] : mults) {
      if (scatMark_[i] == scatEpoch_) {
        scatVal_[i] -= mi * u;
      } else {
        scatVal_[i] = -mi * u;
        scatMark_[i] = scatEpoch_;
        rowCols_[i].push_back(c);  // fill-in
      }
    }
    // gather; track count changes per row
    SparseVec fresh;
    fresh.reserve(work_[c].size() + mults.size());
    int newCount = 0;
    std::vector<int> rows;
    rows.reserve(work_[c].size() + mults.size());
    for (auto& [r, v] : work_[c]) {
      (void)v;
      if (!rowDone_[r]) rows.push_back(r);
    }
    for (auto& [i, mi] : mults) {
      (void)mi;
      rows.push_back(i);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (int r : rows) {
      if (scatMark_[r] != scatEpoch_) continue;
      double v = scatVal_[r];
      bool wasPresent = false;
      {
        double tmp;
        wasPresent = activeValue(c, r, &tmp);
      }
      if (std::fabs(v) > 1e-13) {
        fresh.push_back({r, v});
        ++newCount;
        if (!wasPresent) ++rowCount_[r];
      } else {
        if (wasPresent) --rowCount_[r];
      }
    }
    work_[c] = std::move(fresh);
    colCount_[c] = newCount;
  }

  void ftranBase(std::vector<double>& x) const {
    const int np = static_cast<int>(pivRow_.size());
    for (int k = 0; k < np; ++k) {
      double xp = x[pivRow_[k]];
      if (xp != 0.0)
        for (auto& [i, mlt] : lEnt_[k]) x[i] -= mlt * xp;
    }
    std::vector<double> z(np, 0.0);
    for (int k = np - 1; k >= 0; --k) {
      double s = x[pivRow_[k]];
      for (auto& [c, v] : uEnt_[k]) {
        int kc = colPivOrder_[c];
        if (kc >= 0) s -= v * z[kc];
      }
      z[k] = s / pivVal_[k];
    }
    std::fill(x.begin(), x.end(), 0.0);
    for (int k = 0; k < np; ++k) x[pivCol_[k]] = z[k];
  }

  void btranBase(std::vector<double>& y) const {
    const int np = static_cast<int>(pivRow_.size());
    // solve U^T z = c (forward over pivot order), c indexed by pivot column
    std::vector<double> z(np, 0.0);
    std::vector<double> acc(m_, 0.0);
    for (int k = 0; k < np; ++k) {
      double s = y[pivCol_[k]] - acc[pivCol_[k]];
      z[k] = s / pivVal_[k];
      if (z[k] != 0.0)
        for (auto& [c, v] : uEnt_[k]) acc[c] += v * z[k];
    }
    // apply L^T in reverse: t[r_k] -= sum m_i t[i]
    std::fill(y.begin(), y.end(), 0.0);
    for (int k = 0; k < np; ++k) y[pivRow_[k]] = z[k];
    for (int k = np - 1; k >= 0; --k) {
      double s = y[pivRow_[k]];
      for (auto& [i, mlt] : lEnt_[k]) s -= mlt * y[i];
      y[pivRow_[k]] = s;
    }
  }
};

}  // namespace bessbid
