#include "pushsim/collection.hpp"
#include "pushsim/dynamics.hpp"

#include <benchmark/benchmark.h>

using namespace pushsim;

namespace {

ModelParams plywood_model()
{
  return ModelParams::with_defaults(RigidBody{},
                                    LimitEllipse{0.2545, 0.2346, 0.0325, 0.0082, 2.6175});
}

void BM_IntegrationStep(benchmark::State& state)
{
  const ModelParams model = plywood_model();
  const SimParams sim;
  BodyState st;
  st.twist = {{0.02, 0.001}, 0.1};
  for (auto _ : state) {
    const Wrench w =
        patch_friction_wrench(model.patch, model.ellipse, st.pose, st.twist, sim.v_eps);
    st = step(st, model.body, w, sim.dt);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_IntegrationStep);

void BM_FullPush(benchmark::State& state)
{
  const ModelParams model = plywood_model();
  const SimParams sim;
  const PushSpec spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_push(BodyState{}, spec, model, sim));
  }
}
BENCHMARK(BM_FullPush)->Unit(benchmark::kMillisecond);

void BM_FullCycle(benchmark::State& state)
{
  const ModelParams model = plywood_model();
  const SimParams sim;
  const CollectionConfig cfg;
  BodyState st;
  st.pose = canonical_start(0.5, cfg);
  for (auto _ : state) {
    const CycleResult res = run_cycle(st, cfg, model, sim);
    st = BodyState{res.record.post_drag, Twist{}};
    benchmark::DoNotOptimize(res.record);
  }
}
BENCHMARK(BM_FullCycle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
