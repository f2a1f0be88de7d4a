#include <benchmark/benchmark.h>

#include <complex>
#include <map>
#include <random>
#include <vector>

#include "wbl/kernels.hpp"
#include "wbl/quad.hpp"
#include "wbl/target.hpp"

using namespace wbl;

namespace {

struct Nodes {
  std::vector<cplx> z;
  std::vector<double> w;
};

const Nodes& nodes(std::size_t n) {
  static std::map<std::size_t, Nodes> cache;
  auto& s = cache[n];
  if (s.z.empty()) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      s.z.emplace_back(u(rng), u(rng));
      s.w.push_back(0.5 + 0.25 * u(rng));
    }
  }
  return s;
}

const Weight& weight() {
  static const Weight w = weight_sum({log_potential({{0.3, 0.7}, {-0.2, 0.4}}), im_abs_plus_power(0.5)});
  return w;
}

template <bool Parallel>
void BM_Density(benchmark::State& st) {
  const auto& s = nodes(static_cast<std::size_t>(st.range(0)));
  std::vector<double> out(s.z.size());
  for (auto _ : st) {
    if constexpr (Parallel) {
      kernels::sqrt_weighted_density(weight(), s.z, s.w, out);
    } else {
      kernels::reference::sqrt_weighted_density(weight(), s.z, s.w, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_Gram(benchmark::State& st) {
  const auto& s = nodes(static_cast<std::size_t>(st.range(0)));
  const Eigen::MatrixXcd a = kernels::reference::design_matrix(s.z, s.w, 0.0, 1.0, 21);
  for (auto _ : st) {
    Eigen::MatrixXcd g = Parallel ? kernels::gram_from_design(a) : kernels::reference::gram_from_design(a);
    benchmark::DoNotOptimize(g.data());
  }
}

template <bool Parallel>
void BM_WeightedNorm(benchmark::State& st) {
  const Domain m = Domain::moon({0.0, 2.0}, {1.3, 0.7});
  QuadOptions o;
  o.parallel = Parallel;
  o.tol = 1e-10;
  for (auto _ : st) {
    const auto r = weighted_norm_sq(make_target("pole:1.3"), m, weight(), o);
    benchmark::DoNotOptimize(r.value);
  }
}

}  // namespace

BENCHMARK(BM_Density<false>)->Name("density/serial")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_Density<true>)->Name("density/parallel")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_Gram<false>)->Name("gram/serial")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_Gram<true>)->Name("gram/parallel")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_WeightedNorm<false>)->Name("weighted_norm/serial");
BENCHMARK(BM_WeightedNorm<true>)->Name("weighted_norm/parallel");

BENCHMARK_MAIN();
