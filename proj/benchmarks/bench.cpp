#include <benchmark/benchmark.h>

#include "licrit/bigfloat.hpp"
#include "licrit/lfunc.hpp"
#include "licrit/licoeff.hpp"
#include "licrit/special.hpp"
#include "licrit/zeros.hpp"

namespace {

void BM_HardyZ_low(benchmark::State& state) {
  double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    licrit::BigReal z = licrit::hardy_Z(t, 1e-9);
    benchmark::DoNotOptimize(z.to_double());
  }
}
BENCHMARK(BM_HardyZ_low)->Arg(30)->Arg(100)->Arg(500);

void BM_Polygamma(benchmark::State& state) {
  unsigned m = static_cast<unsigned>(state.range(0));
  licrit::BigReal x = licrit::BigReal::of(2.75, 256);
  for (auto _ : state) {
    licrit::BigReal v = licrit::polygamma(m, x);
    benchmark::DoNotOptimize(v.to_double());
  }
}
BENCHMARK(BM_Polygamma)->Arg(0)->Arg(3)->Arg(10);

void BM_HurwitzZeta(benchmark::State& state) {
  unsigned s = static_cast<unsigned>(state.range(0));
  licrit::BigReal q = licrit::BigReal::of(1.5, 256);
  for (auto _ : state) {
    licrit::BigReal v = licrit::hurwitz_zeta(s, q);
    benchmark::DoNotOptimize(v.to_double());
  }
}
BENCHMARK(BM_HurwitzZeta)->Arg(2)->Arg(8)->Arg(32);

class ZeroFixture : public benchmark::Fixture {
 public:
  void SetUp(const benchmark::State&) override {
    if (zeros.size() == 0) zeros = licrit::find_zeros(200.0, 1e-7, 1);
  }
  licrit::ZeroSet zeros;
};

BENCHMARK_DEFINE_F(ZeroFixture, ZeroSum)(benchmark::State& state) {
  licrit::LiParams p;
  p.n = state.range(0);
  p.a = 0.0;
  for (auto _ : state) {
    licrit::LiResult r = licrit::zero_sum_route(zeros, p);
    benchmark::DoNotOptimize(r.value.re().to_double());
  }
}
BENCHMARK_REGISTER_F(ZeroFixture, ZeroSum)->Arg(1)->Arg(10)->Arg(50);

BENCHMARK_DEFINE_F(ZeroFixture, ZeroSumSequence)(benchmark::State& state) {
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  for (auto _ : state) {
    auto seq = licrit::zero_sum_sequence(zeros, zeta,
                                         static_cast<unsigned>(state.range(0)),
                                         0.0, 1);
    benchmark::DoNotOptimize(seq.back().value.re().to_double());
  }
}
BENCHMARK_REGISTER_F(ZeroFixture, ZeroSumSequence)->Arg(100)->Arg(500);

void BM_Arithmetic(benchmark::State& state) {
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  licrit::LiParams p;
  p.n = state.range(0);
  p.a = -1.0;
  p.M = 1e5;
  for (auto _ : state) {
    licrit::LiResult r = licrit::arithmetic_route(zeta, p);
    benchmark::DoNotOptimize(r.value.re().to_double());
  }
}
BENCHMARK(BM_Arithmetic)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
