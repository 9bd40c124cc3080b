#include "gbm/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "gbm/errors.hpp"
#include "gbm/runner.hpp"

namespace gbm {

std::vector<double> default_sweep_values(const std::string& parameter) {
  if (parameter == "kappa") return {1.0, 5.0, 10.0};
  if (parameter == "alpha") return {10.0, 45.0, 100.0};
  if (parameter == "gamma") return {0.01, 0.255, 0.5};
  if (parameter == "delta") return {0.1, 2.55, 5.0};
  throw ConfigError("unknown sweep parameter '" + parameter +
                    "' (expected kappa, alpha, gamma or delta)");
}

namespace {

std::string point_dir_name(const std::string& parameter, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%g", parameter.c_str(), value);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<SweepPointResult> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw ConfigError("sweep values list is empty");
  if (spec.jobs < 1) throw ConfigError("sweep jobs must be >= 1");
  default_sweep_values(spec.parameter);  // validates the name

  namespace fs = std::filesystem;
  fs::create_directories(spec.out_dir);

  std::vector<SweepPointResult> results(spec.values.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= spec.values.size()) return;

      SweepPointResult& out = results[i];
      out.value = spec.values[i];
      const std::string dir =
          (fs::path(spec.out_dir) / point_dir_name(spec.parameter, out.value)).string();
      out.run_dir = dir;
      try {
        ScenarioConfig config = spec.base;
        set_parameter(config, spec.parameter, out.value);
        const RunResult result = run(config);
        write_run_outputs(config, result, dir);
        out.ok = result.ok();
        if (!result.ok()) {
          out.error_message = result.error_message;
          continue;
        }
        const TimeseriesRow& last = result.series.back();
        out.final_rq = last.rq;
        out.final_sq = last.sq;
        out.final_int_total = last.int_total;
      } catch (const std::exception& err) {
        out.ok = false;
        out.error_message = err.what();
      }
    }
  };

  const std::size_t pool =
      std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), spec.values.size());
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::ofstream summary(fs::path(spec.out_dir) / "summary.csv", std::ios::binary);
  summary << "param,value,RQ,SQ,int_total,status\n";
  for (const SweepPointResult& r : results) {
    summary << spec.parameter << ',' << fmt(r.value) << ',' << fmt(r.final_rq) << ','
            << fmt(r.final_sq) << ',' << fmt(r.final_int_total) << ','
            << (r.ok ? "ok" : "failed") << '\n';
  }
  return results;
}

}  // namespace gbm
