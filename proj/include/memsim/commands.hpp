#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "memsim/classify.hpp"
#include "memsim/config.hpp"
#include "memsim/csv.hpp"
#include "memsim/errors.hpp"
#include "memsim/integrator.hpp"
#include "memsim/report.hpp"
#include "memsim/run.hpp"
#include "memsim/svg.hpp"

namespace memsim::cli {

inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kNumericalError = 3;

struct OutputOptions {
  std::filesystem::path dir = ".";
  bool svg = false;
};

struct ClassifyOptions {
  std::string u_col = "u";
  std::string y_col = "y";
  std::string t_col = "t";
  std::optional<double> period;
  double steady_tol = 1e-3;
  ClassifierTolerances tolerances;
};

/// Runs `body` and maps library exceptions onto exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what();
    if (e.time() != 0.0)
      err << " (t = " << csv::format(e.time()) << " s)";
    err << '\n';
    return kNumericalError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
}

inline svg::PlotLabels axis_labels(ElementKind kind) {
  switch (kind) {
  case ElementKind::MemristiveCurrentControlled: return {"I (A)", "V (V)", ""};
  case ElementKind::MemristiveVoltageControlled: return {"V (V)", "I (A)", ""};
  case ElementKind::Memcapacitive: return {"V (V)", "q (C)", ""};
  case ElementKind::Meminductive: return {"I (A)", "flux (Wb)", ""};
  }
  return {};
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f)
    throw InputError("cannot write '" + p.string() + "'");
  return f;
}

} // namespace detail

/// `memsim simulate <config>`: writes timeseries.csv, loop.csv, report.txt
/// and, on request, loop.svg into the output directory.
inline int cmd_simulate(const std::string& config_path, const OutputOptions& opts,
                        std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = RunConfig::load(config_path);
    cfg.validate();
    const SimulationResult r = run_simulation(cfg);

    std::filesystem::create_directories(opts.dir);
    {
      auto f = detail::open_output(opts.dir / "timeseries.csv");
      csv::write_timeseries(f, r.series);
    }
    {
      auto f = detail::open_output(opts.dir / "loop.csv");
      csv::write_loop(f, r.loop);
    }
    {
      auto f = detail::open_output(opts.dir / "report.txt");
      report::write_simulation(f, r);
    }
    if (opts.svg || cfg.svg()) {
      auto labels = axis_labels(cfg.element().kind());
      labels.title = cfg.device_name() + ": " + to_string(r.classification.verdict);
      auto f = detail::open_output(opts.dir / "loop.svg");
      svg::write_loop(f, r.loop, labels);
    }
    report::describe(out, r.classification);
    if (r.loop_fit)
      out << "  loop power-law exponent " << r.loop_fit->exponent << '\n';
    if (r.scan)
      out << "  limit-scan exponent " << r.scan->exponent
          << (r.scan->response_vanishes ? " (response vanishes with amplitude)" : "") << '\n';
    if (r.current)
      out << "  current peaks: " << r.current->positive_peaks << " positive, "
          << r.current->negative_peaks << " negative\n";
    out << "wrote " << (opts.dir / "report.txt").string() << '\n';
    return kOk;
  });
}

/// Loop from a CSV: the whole file as one closed loop, or, with a period,
/// the steady last period of a time series.
inline HysteresisLoop load_loop(const std::string& csv_path, const ClassifyOptions& opts) {
  std::ifstream f(csv_path, std::ios::binary);
  if (!f)
    throw InputError("cannot open '" + csv_path + "'");
  const csv::Table table = csv::read(f);
  const auto& u = table.column(opts.u_col);
  const auto& y = table.column(opts.y_col);
  if (opts.period) {
    TimeSeries ts;
    ts.t = table.column(opts.t_col);
    ts.u = u;
    ts.y = y;
    return steady_loop(ts, *opts.period, opts.steady_tol);
  }
  std::vector<LoopPoint> pts;
  for (std::size_t i = 0; i < u.size(); ++i) pts.push_back({u[i], y[i]});
  if (pts.empty())
    throw InputError("CSV has no data rows");
  return HysteresisLoop(std::move(pts));
}

/// `memsim classify <csv>`: prints a readable verdict followed by the
/// `[classification]` key-value block.
inline int cmd_classify(const std::string& csv_path, const ClassifyOptions& opts,
                        std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const HysteresisLoop loop = load_loop(csv_path, opts);
    const LoopClassification c = classify_loop(loop, opts.tolerances);
    report::describe(out, c);
    out << '\n';
    report::write_classification(out, c);
    return kOk;
  });
}

inline std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream s(list);
  while (std::getline(s, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw InputError("empty value in --values list");
    out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

/// `memsim sweep <config> --param P --values v1,v2,...`: one summary.csv row
/// per value, in input order. Runs are independent and execute concurrently.
inline int cmd_sweep(const std::string& config_path, const std::string& param,
                     const std::vector<std::string>& values, const OutputOptions& opts,
                     std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig base = RunConfig::load(config_path);
    base.validate();
    if (!base.is_valid_key(param) || param == "device" || param == "circuit")
      throw InputError("unknown sweep parameter '" + param + "'");
    if (values.size() < 2)
      throw InputError("sweep needs at least 2 values");
    std::vector<RunConfig> runs;
    for (const auto& v : values) {
      runs.push_back(base.with(param, v));
      runs.back().validate();
    }

    std::vector<std::future<SimulationResult>> jobs;
    for (const auto& c : runs)
      jobs.push_back(std::async(std::launch::async, [&c] { return run_simulation(c); }));
    std::vector<SimulationResult> results;
    std::optional<int> failure;
    for (auto& j : jobs) {
      try {
        results.push_back(j.get());
      } catch (...) {
        // Keep draining so no job outlives the sweep; report the first failure.
        if (!failure) {
          failure = guarded(err, [&]() -> int { throw; });
        }
      }
    }
    if (failure)
      return *failure;

    std::filesystem::create_directories(opts.dir);
    std::ostringstream table;
    table << "parameter,value,verdict,origin_gap,total_area,enclosed_area,exponent\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      table << param << ',' << values[i] << ',' << to_string(r.classification.verdict) << ','
            << csv::format(r.classification.origin_gap) << ','
            << csv::format(r.classification.total_area) << ','
            << csv::format(r.classification.enclosed_area) << ',';
      if (r.loop_fit)
        table << csv::format(r.loop_fit->exponent);
      table << '\n';
    }
    auto f = detail::open_output(opts.dir / "summary.csv");
    f << table.str();
    out << table.str();
    out << "wrote " << (opts.dir / "summary.csv").string() << '\n';
    return kOk;
  });
}

} // namespace memsim::cli
