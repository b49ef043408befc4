#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bessbid/lu.hpp"
#include "bessbid/simplex.hpp"
#include "support/dense_simplex.hpp"

using namespace bessbid;

namespace {

// dense Gaussian solve for LU cross-checks
std::vector<double> denseSolve(std::vector<std::vector<double>> M,
                               std::vector<double> b) {
  int m = static_cast<int>(b.size());
  for (int k = 0; k < m; ++k) {
    int piv = k;
    for (int i = k + 1; i < m; ++i)
      if (std::fabs(M[i][k]) > std::fabs(M[piv][k])) piv = i;
    std::swap(M[k], M[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < m; ++i) {
      double f = M[i][k] / M[k][k];
      if (f == 0.0) continue;
      for (int j = k; j < m; ++j) M[i][j] -= f * M[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(m, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < m; ++j) s -= M[i][j] * x[j];
    x[i] = s / M[i][i];
  }
  return x;
}

}  // namespace

TEST_CASE("LU factorization solves against dense Gaussian elimination", "[lu]") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 2 + static_cast<int>(rng() % 40);
    std::vector<std::vector<double>> D(m, std::vector<double>(m, 0.0));
    std::vector<SparseVec> cols(m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i)
        if (i == j || unit(rng) < 0.2) {
          double v = val(rng);
          if (i == j && std::fabs(v) < 0.5) v = v < 0 ? v - 1.0 : v + 1.0;
          D[i][j] = v;
          cols[j].push_back({i, v});
        }
    }
    LuFactor lu;
    auto failed = lu.factorize(m, cols);
    REQUIRE(failed.empty());

    std::vector<double> b(m);
    for (auto& v : b) v = val(rng);
    auto x = b;
    lu.ftran(x);
    std::vector<double> check = denseSolve(D, b);
    for (int i = 0; i < m; ++i) REQUIRE(x[i] == Catch::Approx(check[i]).margin(1e-8));

    // btran: B^T y = c
    auto y = b;
    lu.btran(y);
    std::vector<std::vector<double>> Dt(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) Dt[i][j] = D[j][i];
    check = denseSolve(Dt, b);
    for (int i = 0; i < m; ++i) REQUIRE(y[i] == Catch::Approx(check[i]).margin(1e-8));

    // product-form update: replace a column and compare again
    int p = static_cast<int>(rng() % m);
    std::vector<double> newCol(m, 0.0);
    for (int i = 0; i < m; ++i)
      if (i == p || unit(rng) < 0.3) newCol[i] = val(rng);
    if (std::fabs(newCol[p]) < 0.5) newCol[p] += 2.0;
    auto alpha = newCol;
    lu.ftran(alpha);
    if (std::fabs(alpha[p]) > 1e-6) {
      lu.pushEta(p, alpha);
      for (int i = 0; i < m; ++i) D[i][p] = newCol[i];
      auto x2 = b;
      lu.ftran(x2);
      check = denseSolve(D, b);
      for (int i = 0; i < m; ++i)
        REQUIRE(x2[i] == Catch::Approx(check[i]).margin(1e-7));
    }
  }
}

TEST_CASE("max x subject to x <= 3 gives x=3 with dual 1", "[simplex]") {
  LinearProgram lp;
  lp.sense = ObjSense::Maximize;
  int x = lp.addColumn("x", 0, kInf, 1.0);
  lp.addRow("cap", RowSense::LE, 3.0, {{x, 1.0}});
  SimplexSolver s;
  auto sol = s.solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(sol.x[0] == Catch::Approx(3.0));
  REQUIRE(sol.objective == Catch::Approx(3.0));
  REQUIRE(sol.rowDual[0] == Catch::Approx(1.0));
}

TEST_CASE("infeasible bound pair is reported infeasible", "[simplex]") {
  LinearProgram lp;
  int x = lp.addColumn("x", -kInf, kInf, 0.0);
  lp.addRow("le", RowSense::LE, 1.0, {{x, 1.0}});
  lp.addRow("ge", RowSense::GE, 2.0, {{x, 1.0}});
  auto sol = SimplexSolver().solve(lp);
  REQUIRE(sol.status == SolveStatus::Infeasible);
  REQUIRE_FALSE(sol.infeasibleRows.empty());
}

TEST_CASE("unbounded maximization detected", "[simplex]") {
  LinearProgram lp;
  lp.sense = ObjSense::Maximize;
  int x = lp.addColumn("x", 0, kInf, 1.0);
  lp.addRow("ge", RowSense::GE, 0.0, {{x, 1.0}});
  auto sol = SimplexSolver().solve(lp);
  REQUIRE(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("equality rows and bounded variables", "[simplex]") {
  // min 2a + 3b  s.t. a + b = 10, a <= 6, b <= 7
  LinearProgram lp;
  int a = lp.addColumn("a", 0, 6, 2.0);
  int b = lp.addColumn("b", 0, 7, 3.0);
  lp.addRow("sum", RowSense::EQ, 10.0, {{a, 1.0}, {b, 1.0}});
  auto sol = SimplexSolver().solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(sol.x[a] == Catch::Approx(6.0));
  REQUIRE(sol.x[b] == Catch::Approx(4.0));
  REQUIRE(sol.objective == Catch::Approx(24.0));
  REQUIRE(sol.rowDual[0] == Catch::Approx(3.0));  // marginal unit is b
  auto cert = certify(lp, sol);
  REQUIRE(cert.dualityGapRel < 1e-9);
  REQUIRE(cert.maxPrimalResidual < 1e-9);
  REQUIRE(cert.maxDualResidual < 1e-9);
}

TEST_CASE("random dense LPs match the textbook tableau oracle", "[simplex]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> aval(0.0, 2.0);
  std::uniform_real_distribution<double> cval(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 20, m = 20;
    std::vector<std::vector<double>> A(m, std::vector<double>(n, 0.0));
    std::vector<double> b(m), c(n), u(n, 4.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j)
        if (unit(rng) < 0.5) A[i][j] = aval(rng);
      b[i] = 5.0 + 10.0 * unit(rng);
    }
    for (int j = 0; j < n; ++j) c[j] = cval(rng);

    auto expect = oracle::denseSimplex(A, b, c, u);
    REQUIRE(expect.optimal);

    LinearProgram lp;
    for (int j = 0; j < n; ++j) lp.addColumn("x" + std::to_string(j), 0, u[j], c[j]);
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> ents;
      for (int j = 0; j < n; ++j)
        if (A[i][j] != 0.0) ents.push_back({j, A[i][j]});
      lp.addRow("r" + std::to_string(i), RowSense::LE, b[i], ents);
    }
    auto sol = SimplexSolver().solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    REQUIRE(sol.objective == Catch::Approx(expect.objective).epsilon(1e-6).margin(1e-6));
    auto cert = certify(lp, sol);
    REQUIRE(cert.dualityGapRel < 1e-6);
    REQUIRE(cert.maxPrimalResidual < 1e-6);
    REQUIRE(cert.maxDualResidual < 1e-6);
    REQUIRE(cert.maxComplementarity < 1e-5);
    ++solved;
  }
  REQUIRE(solved == 60);
}

TEST_CASE("warm start resumes from a prior basis", "[simplex]") {
  LinearProgram lp;
  int a = lp.addColumn("a", 0, 10, 1.0);
  int b = lp.addColumn("b", 0, 10, 2.0);
  lp.addRow("demand", RowSense::GE, 8.0, {{a, 1.0}, {b, 1.0}});
  SimplexSolver s1;
  auto sol1 = s1.solve(lp);
  REQUIRE(sol1.status == SolveStatus::Optimal);
  SimplexBasis basis = s1.basis();

  lp.rhs[0] = 9.0;  // small perturbation
  SimplexSolver s2;
  auto sol2 = s2.solve(lp, {}, &basis);
  REQUIRE(sol2.status == SolveStatus::Optimal);
  REQUIRE(sol2.objective == Catch::Approx(9.0));
  REQUIRE(sol2.iterations <= sol1.iterations + 2);
}

TEST_CASE("fixed columns act as parameters and never enter", "[simplex]") {
  LinearProgram lp;
  int q = lp.addColumn("q", 5.0, 5.0, 0.0);  // parameter
  int x = lp.addColumn("x", 0, kInf, -1.0);  // min -x == max x
  lp.addRow("cap", RowSense::LE, 0.0, {{x, 1.0}, {q, -1.0}});
  auto sol = SimplexSolver().solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(sol.x[x] == Catch::Approx(5.0));
  REQUIRE(sol.x[q] == Catch::Approx(5.0));
}
