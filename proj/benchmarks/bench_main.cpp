#include "akreg/bandwidth.hpp"
#include "akreg/io.hpp"
#include "akreg/kernels.hpp"
#include "akreg/multikernel.hpp"
#include "akreg/regression.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace akreg;

namespace {

void kernel_pdf(benchmark::State& state, KernelSpec spec, double x, double h)
{
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdf(spec, x, h, u));
    u = u < 8.0 ? u + (spec.is_discrete() ? 1.0 : 0.01) : 0.0;
  }
}

BENCHMARK_CAPTURE(kernel_pdf, binomial, KernelSpec::binomial(), 4.0, 0.3);
BENCHMARK_CAPTURE(kernel_pdf, dtr2, KernelSpec::discrete_triangular(2), 4.0, 0.3);
BENCHMARK_CAPTURE(kernel_pdf, gamma, KernelSpec::gamma(), 1.5, 0.2);
BENCHMARK_CAPTURE(kernel_pdf, beta, KernelSpec::beta(), 0.4, 0.2);

void sarmanov_density(benchmark::State& state)
{
  const std::vector<double> x{0.3, 0.6};
  const Interval iv = admissible_h12_interval(0.3, 0.6, 0.2, 0.3);
  const auto H = BandwidthMatrix::full2x2(0.2, 0.3, iv.hi);
  std::vector<double> u{0.1, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sarmanov_pdf(x, H, u));
    u[0] = u[0] < 0.95 ? u[0] + 0.01 : 0.05;
  }
}
BENCHMARK(sarmanov_density);

void fit_turnover(benchmark::State& state)
{
  const Dataset d = turnover_dataset();
  const RegressorModel m(turnover_schema().product_kernel(), BandwidthMatrix::diagonal({0.1, 0.1}));
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_all(m, d));
}
BENCHMARK(fit_turnover);

void select_diagonal_turnover(benchmark::State& state)
{
  const Dataset d = turnover_dataset();
  const ProductKernel pk = turnover_schema().product_kernel();
  const GridSpec g = default_grid(pk, d, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(select_diagonal(pk, d, g));
}
BENCHMARK(select_diagonal_turnover)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void select_full_turnover(benchmark::State& state)
{
  const Dataset d = turnover_dataset();
  const GridSpec g = default_sarmanov_grid(d, static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state)
    benchmark::DoNotOptimize(select_full_2x2(d, g));
}
BENCHMARK(select_full_turnover)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
