#include "entropic/experiments.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace entropic;

namespace {

Vector random_state(std::size_t n) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = dist(gen);
  return v;
}

void BM_FdApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = make_central_fd(1, 4, n, 20.0 / n);
  const Vector u = random_state(n);
  for (auto _ : state) benchmark::DoNotOptimize(d.apply(u));
}
BENCHMARK(BM_FdApply)->Arg(200)->Arg(800);

void BM_FourierApply(benchmark::State& state) {
  const auto d = make_fourier(1, 64, 180.0);
  const Vector u = random_state(64);
  for (auto _ : state) benchmark::DoNotOptimize(d.apply(u));
}
BENCHMARK(BM_FourierApply);

void BM_Gmres(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Matrix a = Matrix::Identity(n, n) * 3.0;
  a += Matrix::Random(n, n) / std::sqrt(static_cast<double>(n));
  const Vector b = random_state(static_cast<std::size_t>(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmres([&](const Vector& v) { return Vector(a * v); }, b, Vector::Zero(n), 1e-10, static_cast<int>(n)));
  }
}
BENCHMARK(BM_Gmres)->Arg(40)->Arg(200);

void BM_LuSolve(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Matrix a = Matrix::Identity(n, n) * 3.0;
  a += Matrix::Random(n, n) / std::sqrt(static_cast<double>(n));
  const Vector b = random_state(static_cast<std::size_t>(n));
  for (auto _ : state) benchmark::DoNotOptimize(lu_solve(a, b));
}
BENCHMARK(BM_LuSolve)->Arg(40)->Arg(200);

void BM_KdvStep(benchmark::State& state) {
  const auto cfg = make_config({{"relaxation.mode", "quadratic"}, {"solver.method", state.range(0) ? "newton-gmres" : "newton"}});
  const auto sd = build_semidiscretization(cfg);
  const Vector u0 = initial_state(cfg);
  NonlinearSolver solver{cfg.method, cfg.solver};
  const auto relax = relaxation_policy(cfg, sd);
  for (auto _ : state) {
    const auto sys = make_stage_system(cfg.scheme, sd, u0, cfg.dt);
    benchmark::DoNotOptimize(step(0.0, *sys, solver, relax));
  }
}
BENCHMARK(BM_KdvStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BbmStep(benchmark::State& state) {
  const auto cfg = make_config({{"equation", "bbm-central"}, {"relaxation.mode", "cubic"}, {"solver.rel_tol", "1e-3"}});
  const auto sd = build_semidiscretization(cfg);
  const Vector u0 = initial_state(cfg);
  NonlinearSolver solver{cfg.method, cfg.solver};
  const auto relax = relaxation_policy(cfg, sd);
  for (auto _ : state) {
    const auto sys = make_stage_system(cfg.scheme, sd, u0, cfg.dt);
    benchmark::DoNotOptimize(step(0.0, *sys, solver, relax));
  }
}
BENCHMARK(BM_BbmStep)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
