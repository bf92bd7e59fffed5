// Determining-system assembly: serial whole-ansatz route vs the per-unknown
// column route with and without OpenMP.

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "liesym/model.hpp"

#ifndef LIESYM_SOURCE_DIR
#define LIESYM_SOURCE_DIR "."
#endif

using namespace liesym;

namespace {

const Model& fixture() {
  static Model m = [] {
    std::string path = std::string(LIESYM_SOURCE_DIR) + "/data/stagnation.pde";
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return build_model(parse_spec(buf.str()));
  }();
  return m;
}

void BM_rows_symbolic(benchmark::State& state) {
  const Model& m = fixture();
  AnsatzSpace space(m.ctx, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    LinearRows rows = determining_rows(m.ctx, m.system, space, 2, RowsRoute::SymbolicAnsatz,
                                       false);
    benchmark::DoNotOptimize(rows.rows.size());
  }
}

void BM_rows_columns_serial(benchmark::State& state) {
  const Model& m = fixture();
  AnsatzSpace space(m.ctx, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    LinearRows rows = determining_rows(m.ctx, m.system, space, 2, RowsRoute::PerUnknownColumns,
                                       false);
    benchmark::DoNotOptimize(rows.rows.size());
  }
}

void BM_rows_columns_parallel(benchmark::State& state) {
  const Model& m = fixture();
  AnsatzSpace space(m.ctx, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    LinearRows rows = determining_rows(m.ctx, m.system, space, 2, RowsRoute::PerUnknownColumns,
                                       true);
    benchmark::DoNotOptimize(rows.rows.size());
  }
}

void BM_rows_field_serial(benchmark::State& state) {
  const Model& m = fixture();
  AnsatzSpace space(m.ctx, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ParamRows rows = determining_rows_field(m.ctx, m.system, space, 2,
                                            RowsRoute::PerUnknownColumns, false);
    benchmark::DoNotOptimize(rows.rows.size());
  }
}

void BM_rows_field_parallel(benchmark::State& state) {
  const Model& m = fixture();
  AnsatzSpace space(m.ctx, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ParamRows rows = determining_rows_field(m.ctx, m.system, space, 2,
                                            RowsRoute::PerUnknownColumns, true);
    benchmark::DoNotOptimize(rows.rows.size());
  }
}

void BM_solve_full(benchmark::State& state) {
  const Model& m = fixture();
  for (auto _ : state) {
    SymmetryBasis basis = solve_determining(m.ctx, m.system, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(basis.fields.size());
  }
}

}  // namespace

BENCHMARK(BM_rows_symbolic)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rows_columns_serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rows_columns_parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rows_field_serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rows_field_parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_full)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
