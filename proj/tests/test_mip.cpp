#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bessbid/mip.hpp"

using namespace bessbid;

namespace {

// exact 0/1 knapsack by dynamic programming (integer weights)
double knapsackDp(const std::vector<int>& w, const std::vector<double>& v, int cap) {
  std::vector<double> best(cap + 1, 0.0);
  for (size_t i = 0; i < w.size(); ++i)
    for (int c = cap; c >= w[i]; --c)
      best[c] = std::max(best[c], best[c - w[i]] + v[i]);
  return best[cap];
}

BranchAndBound makeKnapsack(const std::vector<int>& w, const std::vector<double>& v,
                            int cap) {
  LinearProgram lp;
  lp.sense = ObjSense::Maximize;
  std::vector<std::pair<int, double>> ents;
  std::vector<int> bins;
  for (size_t i = 0; i < w.size(); ++i) {
    int c = lp.addColumn("z" + std::to_string(i), 0, 1, v[i]);
    bins.push_back(c);
    ents.push_back({c, static_cast<double>(w[i])});
  }
  lp.addRow("cap", RowSense::LE, cap, ents);
  return BranchAndBound(lp, bins);
}

}  // namespace

TEST_CASE("0/1 knapsack matches the DP oracle", "[mip]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 10;
    std::vector<int> w(n);
    std::vector<double> v(n);
    int cap = 0;
    for (int i = 0; i < n; ++i) {
      w[i] = 1 + static_cast<int>(rng() % 15);
      v[i] = 1.0 + static_cast<double>(rng() % 100) / 7.0;
      cap += w[i];
    }
    cap /= 2;
    double expect = knapsackDp(w, v, cap);
    auto bnb = makeKnapsack(w, v, cap);
    auto res = bnb.solve();
    REQUIRE(res.status == SolveStatus::Optimal);
    REQUIRE(res.hasIncumbent);
    REQUIRE(res.objective == Catch::Approx(expect).margin(1e-6));
    REQUIRE(res.boundMonotonicityViolation <= 0.0);
    REQUIRE(res.gap <= 1e-4);
  }
}

TEST_CASE("LP-integral instance solves at the root node", "[mip]") {
  // totally unimodular: two binaries, disjoint caps, integral LP optimum
  LinearProgram lp;
  lp.sense = ObjSense::Maximize;
  int a = lp.addColumn("a", 0, 1, 3.0);
  int b = lp.addColumn("b", 0, 1, 2.0);
  lp.addRow("ca", RowSense::LE, 1.0, {{a, 1.0}});
  lp.addRow("cb", RowSense::LE, 1.0, {{b, 1.0}});
  BranchAndBound bnb(lp, {a, b});
  auto res = bnb.solve();
  REQUIRE(res.status == SolveStatus::Optimal);
  REQUIRE(res.objective == Catch::Approx(5.0));
  REQUIRE(res.nodes == 1);
}

TEST_CASE("identical instances give identical incumbents", "[mip]") {
  std::vector<int> w = {4, 7, 3, 9, 5, 6, 2, 8, 4, 7};
  std::vector<double> v = {4.2, 7.7, 2.9, 10.1, 5.5, 6.8, 1.9, 9.0, 4.6, 7.2};
  auto r1 = makeKnapsack(w, v, 28).solve();
  auto r2 = makeKnapsack(w, v, 28).solve();
  REQUIRE(r1.status == SolveStatus::Optimal);
  REQUIRE(r1.objective == r2.objective);
  REQUIRE(r1.nodes == r2.nodes);
  REQUIRE(r1.x == r2.x);
}

TEST_CASE("warm solution is validated and used as incumbent", "[mip]") {
  std::vector<int> w = {5, 5, 5};
  std::vector<double> v = {1.0, 2.0, 3.0};
  auto bnb = makeKnapsack(w, v, 10);
  bnb.addWarmSolution({0.0, 1.0, 1.0});  // feasible, value 5
  auto res = bnb.solve();
  REQUIRE(res.status == SolveStatus::Optimal);
  REQUIRE(res.objective == Catch::Approx(5.0));
}

TEST_CASE("infeasible MIP reported", "[mip]") {
  LinearProgram lp;
  int z = lp.addColumn("z", 0, 1, 1.0);
  lp.addRow("need", RowSense::GE, 2.0, {{z, 1.0}});
  BranchAndBound bnb(lp, {z});
  auto res = bnb.solve();
  REQUIRE(res.status == SolveStatus::Infeasible);
}
