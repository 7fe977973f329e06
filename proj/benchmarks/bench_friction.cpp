#include "pushsim/friction.hpp"

#include "pushsim/angles.hpp"

#include <benchmark/benchmark.h>

using namespace pushsim;

namespace {

const LimitEllipse kPlywood{0.2545, 0.2346, 0.0325, 0.0082, 2.6175};

void BM_MaxDissipationCoefficient(benchmark::State& state)
{
  Eigen::Vector2d v{0.013, -0.007};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kPlywood.max_dissipation_coefficient(v));
    v.x() = -v.x();
  }
}
BENCHMARK(BM_MaxDissipationCoefficient);

void BM_PointFrictionForce(benchmark::State& state)
{
  Eigen::Vector2d v{0.02, 0.005};
  for (auto _ : state) {
    benchmark::DoNotOptimize(point_friction_force(kPlywood, v, 0.123, 1e-3));
    v.y() = -v.y();
  }
}
BENCHMARK(BM_PointFrictionForce);

void BM_PatchFrictionWrench(benchmark::State& state)
{
  const RigidBody body;
  const ContactPatch patch =
      ContactPatch::uniform_grid(body.side, static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(0)), body.weight());
  const Pose pose{{0.1, -0.2}, 0.7};
  Twist twist{{0.02, 0.0}, 0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(patch_friction_wrench(patch, kPlywood, pose, twist, 1e-3));
    twist.omega = -twist.omega;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_PatchFrictionWrench)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
