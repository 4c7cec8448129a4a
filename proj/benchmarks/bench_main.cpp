#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "alab/controllability.hpp"
#include "alab/dynamics.hpp"
#include "alab/model.hpp"

namespace alab {
namespace {

// A chain of products and transcendentals in two coordinates. Each level
// uses the previous one three times, so the tree grows like 3^depth while
// the graph stays linear. Values stay bounded at any depth.
Expr chain(int depth) {
  Expr e = Expr::coord(0);
  for (int i = 0; i < depth; ++i) {
    e = sin(e * Expr::coord(1) + Expr(0.1 * i)) + e / (Expr(2.0) + e * e);
  }
  return e;
}

void BM_Eval(benchmark::State& state) {
  Expr e = chain(static_cast<int>(state.range(0)));
  const double p[] = {0.3, -0.7};
  for (auto _ : state) benchmark::DoNotOptimize(eval(e, p));
  state.counters["nodes"] = static_cast<double>(node_count(e));
}
BENCHMARK(BM_Eval)->Arg(4)->Arg(8);

void BM_EvalShared(benchmark::State& state) {
  Expr e = chain(static_cast<int>(state.range(0)));
  const double p[] = {0.3, -0.7};
  for (auto _ : state) {
    PointEvaluator ev(p);
    benchmark::DoNotOptimize(ev(e));
  }
}
BENCHMARK(BM_EvalShared)->Arg(4)->Arg(8)->Arg(64);

void BM_Diff(benchmark::State& state) {
  Expr e = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diff(e, 0));
}
BENCHMARK(BM_Diff)->Arg(4)->Arg(16)->Arg(64);

void BM_Parse(benchmark::State& state) {
  const std::vector<std::string> xy{"x1", "x2"};
  std::string text = to_string(chain(4), xy);
  for (auto _ : state) benchmark::DoNotOptimize(parse(text, xy));
}
BENCHMARK(BM_Parse);

void BM_Bracket(benchmark::State& state) {
  Model m = zoo_model("rigid_body");
  Section s(3), t(3);
  for (std::size_t a = 0; a < 3; ++a) {
    s[a] = sin(Expr::coord(a)) * Expr::coord((a + 1) % 3);
    t[a] = Expr::coord(a) * Expr::coord(a) + cos(Expr::coord((a + 2) % 3));
  }
  for (auto _ : state) benchmark::DoNotOptimize(lie_bracket(m.algebroid, s, t));
}
BENCHMARK(BM_Bracket);

void BM_ZeroAccess(benchmark::State& state) {
  Model m = zoo_model(state.range(0) == 0 ? "rigid_body" : "reduction_pair");
  MechSystem s = m.mech();
  for (auto _ : state) {
    benchmark::DoNotOptimize(accessibility_mech(s, m.points.front(), Mode::kZero));
  }
  state.SetLabel(m.name);
}
BENCHMARK(BM_ZeroAccess)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CverChor(benchmark::State& state) {
  Model m = zoo_model("constrained_cart");
  MechSystem s = m.mech();
  const int cap = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cver_chor(s, m.points.front(), cap));
}
BENCHMARK(BM_CverChor)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Integrate(benchmark::State& state) {
  Model m = zoo_model("rigid_body");
  MechSystem s = m.mech();
  Vector y0 = Vector::Constant(3, 0.3);
  ControlSchedule sched = ControlSchedule::zero(m.inputs.size(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(s, m.points.front(), y0, sched, 1e-3));
  }
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace alab

BENCHMARK_MAIN();
