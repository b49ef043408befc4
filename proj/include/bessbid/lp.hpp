// Linear program container: bounded columns, sensed rows, sparse row storage.
// Also writes the CPLEX LP text format for cross-checking against external
// solvers.
#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bessbid/csv.hpp"

namespace bessbid {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : char { LE, GE, EQ };
enum class ObjSense : char { Minimize, Maximize };

enum class SolveStatus : char { Optimal, Infeasible, Unbounded, IterLimit };

inline const char* toString(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterLimit: return "iteration-limit";
  }
  return "?";
}

// Rows are stored CSR-style. Columns carry bounds and objective coefficients;
// a fixed column (lb == ub) acts as a parameter of the program.
struct LinearProgram {
  ObjSense sense = ObjSense::Minimize;

  std::vector<double> colLower, colUpper, objCoef;
  std::vector<std::string> colName;

  std::vector<RowSense> rowSense;
  std::vector<double> rhs;
  std::vector<std::string> rowName;
  std::vector<int> rowStart{0};
  std::vector<int> rowCol;
  std::vector<double> rowVal;

  int numCols() const { return static_cast<int>(colLower.size()); }
  int numRows() const { return static_cast<int>(rhs.size()); }
  int nnz() const { return static_cast<int>(rowCol.size()); }

  int addColumn(const std::string& name, double lb, double ub, double obj) {
    if (lb > ub) throw std::invalid_argument("column bounds crossed: " + name);
    colLower.push_back(lb);
    colUpper.push_back(ub);
    objCoef.push_back(obj);
    colName.push_back(name);
    return numCols() - 1;
  }

  int addRow(const std::string& name, RowSense s, double b,
             const std::vector<std::pair<int, double>>& entries) {
    for (auto& [c, v] : entries) {
      if (c < 0 || c >= numCols())
        throw std::out_of_range("row entry column out of range: " + name);
      if (!std::isfinite(v))
        throw std::invalid_argument("non-finite coefficient in row " + name);
      rowCol.push_back(c);
      rowVal.push_back(v);
    }
    rowSense.push_back(s);
    rhs.push_back(b);
    rowName.push_back(name);
    rowStart.push_back(nnz());
    return numRows() - 1;
  }

  double rowActivity(int r, const std::vector<double>& x) const {
    double a = 0;
    for (int k = rowStart[r]; k < rowStart[r + 1]; ++k) a += rowVal[k] * x[rowCol[k]];
    return a;
  }

  // Empty string when well-formed, else the first problem found.
  std::string validate() const {
    for (int j = 0; j < numCols(); ++j) {
      if (std::isnan(colLower[j]) || std::isnan(colUpper[j]))
        return "NaN bound on column " + colName[j];
      if (!std::isfinite(objCoef[j])) return "non-finite objective on " + colName[j];
      if (colLower[j] > colUpper[j]) return "crossed bounds on " + colName[j];
    }
    for (int r = 0; r < numRows(); ++r)
      if (!std::isfinite(rhs[r])) return "non-finite rhs on row " + rowName[r];
    return {};
  }

  // CPLEX LP text format; `binaries` marks integer columns for MILP export.
  void writeLpText(std::ostream& os, const std::vector<int>* binaries = nullptr) const {
    os << (sense == ObjSense::Minimize ? "Minimize\n" : "Maximize\n");
    os << " obj:";
    int emitted = 0;
    for (int j = 0; j < numCols(); ++j) {
      if (objCoef[j] == 0.0) continue;
      os << (objCoef[j] >= 0 ? " + " : " - ") << fmtDouble(std::fabs(objCoef[j])) << ' '
         << colName[j];
      if (++emitted % 8 == 0) os << '\n' << "     ";
    }
    if (emitted == 0) os << " 0 " << (numCols() ? colName[0] : "x0");
    os << "\nSubject To\n";
    for (int r = 0; r < numRows(); ++r) {
      os << ' ' << rowName[r] << ':';
      int n = 0;
      for (int k = rowStart[r]; k < rowStart[r + 1]; ++k) {
        os << (rowVal[k] >= 0 ? " + " : " - ") << fmtDouble(std::fabs(rowVal[k])) << ' '
           << colName[rowCol[k]];
        if (++n % 8 == 0) os << '\n' << "     ";
      }
      const char* op = rowSense[r] == RowSense::LE   ? "<="
                       : rowSense[r] == RowSense::GE ? ">="
                                                     : "=";
      os << ' ' << op << ' ' << fmtDouble(rhs[r]) << '\n';
    }
    os << "Bounds\n";
    for (int j = 0; j < numCols(); ++j) {
      const double lb = colLower[j], ub = colUpper[j];
      if (lb == 0.0 && ub == kInf) continue;  // default
      if (lb == -kInf && ub == kInf) {
        os << ' ' << colName[j] << " free\n";
      } else if (lb == ub) {
        os << ' ' << colName[j] << " = " << fmtDouble(lb) << '\n';
      } else {
        if (lb == -kInf)
          os << " -inf <= " << colName[j];
        else
          os << ' ' << fmtDouble(lb) << " <= " << colName[j];
        if (ub == kInf)
          os << '\n';
        else
          os << " <= " << fmtDouble(ub) << '\n';
      }
    }
    if (binaries && !binaries->empty()) {
      os << "Binary\n";
      int n = 0;
      for (int j : *binaries) {
        os << ' ' << colName[j];
        if (++n % 10 == 0) os << '\n';
      }
      os << '\n';
    }
    os << "End\n";
  }
};

// Solution of a LinearProgram in the program's own objective sense.
// rowDual[r] is dObjective/dRhs[r]; for a minimization this means GE rows have
// nonnegative duals and LE rows nonpositive ones. colReducedCost follows the
// same sensitivity convention for the column bounds.
struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0;
  std::vector<double> x;
  std::vector<double> rowDual;
  std::vector<double> colReducedCost;
  long iterations = 0;
  bool degenerate = false;
  std::vector<int> infeasibleRows;  // populated when status == Infeasible
};

}  // namespace bessbid
