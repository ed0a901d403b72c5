#include <memory>

#include <benchmark/benchmark.h>

#include <mirrorforge/acycle.hpp>
#include <mirrorforge/dual.hpp>
#include <mirrorforge/expression.hpp>
#include <mirrorforge/forms.hpp>
#include <mirrorforge/functionals.hpp>
#include <mirrorforge/semiflat.hpp>
#include <mirrorforge/transform.hpp>

using namespace mirrorforge;

namespace {

const char* kPerturbed = "(x1^2 + x2^2)/2 + 0.05*(sin(2*pi*x1)*sin(2*pi*x2) + 0.5*cos(2*pi*x1))/(4*pi^2)";

DifferentialForm trig_one_form(const Grid& g) {
  return DifferentialForm::one_form({sample(parse_expression("sin(2*pi*x3)"), g), sample(parse_expression("cos(2*pi*x1)"), g),
                                     sample(parse_expression("sin(2*pi*(x1 + x2))"), g)},
                                    3);
}

}  // namespace

static void BM_SampleExpression(benchmark::State& state) {
  const Grid g(Domain::torus(2), static_cast<int>(state.range(0)));
  const Expression e = parse_expression(kPerturbed);
  for (auto _ : state) benchmark::DoNotOptimize(sample(e, g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_SampleExpression)->Arg(32)->Arg(64)->Arg(128);

static void BM_ExteriorDerivative(benchmark::State& state) {
  const Grid g(Domain::torus(3), static_cast<int>(state.range(0)));
  const DifferentialForm a = trig_one_form(g);
  for (auto _ : state) benchmark::DoNotOptimize(exterior_derivative(a));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_ExteriorDerivative)->Arg(8)->Arg(16)->Arg(24);

static void BM_Wedge(benchmark::State& state) {
  const Grid g(Domain::torus(3), static_cast<int>(state.range(0)));
  const DifferentialForm a = trig_one_form(g), da = exterior_derivative(a);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, da));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_Wedge)->Arg(8)->Arg(16)->Arg(24);

static void BM_MongeAmperePeriodic(benchmark::State& state) {
  const Grid g(Domain::torus(2), static_cast<int>(state.range(0)));
  const KahlerPotential init = KahlerPotential::from_expression(parse_expression(kPerturbed), g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_monge_ampere(init, 1.0, 1e-11));
}
BENCHMARK(BM_MongeAmperePeriodic)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_MongeAmpereBox3(benchmark::State& state) {
  const Grid g(Domain::box({0.6, 0.4, 0.0}, {1.6, 1.4, 1.0}), static_cast<int>(state.range(0)));
  const KahlerPotential init = KahlerPotential::from_expression(
      parse_expression("0.5*(sqrt(x1^2+x2^2)*sqrt(x1^2+x2^2+1) + log(sqrt(x1^2+x2^2) + sqrt(x1^2+x2^2+1))) + x3^2/2"
                       " + 0.02*sin(pi*(x1-0.6))*sin(pi*(x2-0.4))*sin(pi*x3)"),
      g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_monge_ampere(init, 1.0, 1e-11));
}
BENCHMARK(BM_MongeAmpereBox3)->Arg(12)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_DualBuild(benchmark::State& state) {
  const Grid g(Domain::torus(2), static_cast<int>(state.range(0)));
  const SemiFlatGeometry geo(KahlerPotential::from_expression(
      parse_expression("(x1^2 + x2^2)/2 + 0.005*cos(2*pi*x1)*cos(2*pi*x2) + 0.004*sin(2*pi*x2)"), g));
  for (auto _ : state) benchmark::DoNotOptimize(DualGeometry::build(geo));
}
BENCHMARK(BM_DualBuild)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_TransformAndResiduals(benchmark::State& state) {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), static_cast<int>(state.range(0)));
  auto geo = std::make_shared<const SemiFlatGeometry>(
      KahlerPotential::from_expression(parse_expression("(x1^2 + x2^2)/2 + x1^3/30"), g));
  auto dual = std::make_shared<const DualGeometry>(DualGeometry::build(*geo));
  const SectionCycle c(geo, LiftedField::from_expression(parse_expression("0.2*x1^2 - 0.1*x1*x2"), g), 0.1);
  const ConnectionOnC a = ConnectionOnC::zero(g, 1);
  for (auto _ : state) {
    const MirrorConnection mc = fm_transform(c, a, dual);
    benchmark::DoNotOptimize(f02_residual(mc));
    benchmark::DoNotOptimize(dhym_residual(mc));
  }
}
BENCHMARK(BM_TransformAndResiduals)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ChernSimonsEquality(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), rank = static_cast<int>(state.range(1));
  const Grid g(Domain::torus(3), n);
  auto geo = std::make_shared<const SemiFlatGeometry>(
      KahlerPotential::from_expression(parse_expression("(x1^2 + x2^2 + x3^2)/2"), g));
  auto dual = std::make_shared<const DualGeometry>(DualGeometry::build(*geo));
  const SectionCycle c(geo, LiftedField::from_expression(parse_expression("0"), g), 0.0);
  const ConnectionOnC a = ConnectionOnC::random(g, rank, 11);
  for (auto _ : state) benchmark::DoNotOptimize(cs_equality_report(c, a, dual));
}
BENCHMARK(BM_ChernSimonsEquality)->Args({12, 1})->Args({24, 1})->Args({12, 2})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
