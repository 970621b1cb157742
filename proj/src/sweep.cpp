#include "duality/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "duality/errors.hpp"
#include "duality/measures.hpp"

namespace duality {

const char *to_string(SweptParameter parameter) {
  return parameter == SweptParameter::theta ? "theta" : "alpha";
}

SweepConfig SweepConfig::defaults(SweptParameter parameter) {
  SweepConfig config;
  config.parameter = parameter;
  config.fixed = parameter == SweptParameter::theta ? std::numbers::pi / 12.0 : std::numbers::pi / 2.0;
  config.start = 0.0;
  config.end = 2.0 * std::numbers::pi;
  return config;
}

void SweepConfig::validate() const {
  if (samples < 2) throw std::invalid_argument("a sweep needs at least 2 samples");
  if (!std::isfinite(start) || !std::isfinite(end) || !std::isfinite(fixed))
    throw std::invalid_argument("sweep range and fixed value must be finite");
  if (measure) {
    pipeline.grid.validate();
    pipeline.noise.validate();
    if (pipeline.l == 0) throw std::invalid_argument("image pipeline needs |l| >= 1");
  }
}

namespace {

SweepRow analytic_row(const StateParams &params) {
  SweepRow row;
  row.theta = params.theta;
  row.alpha = params.alpha;
  try {
    const ConditionalClosedForm conditional = closed_form_conditional(params);
    row.v_cond_v = conditional.v_given_v;
    row.p_cond_h = conditional.p_given_h;
  } catch (const ZeroProbabilityPostselection &) {
    row.v_cond_v = std::numeric_limits<double>::quiet_NaN();
    row.p_cond_h = 1.0;
  }
  row.sum_cond_squares = row.v_cond_v * row.v_cond_v + row.p_cond_h * row.p_cond_h;
  const AveragedClosedForm averaged = closed_form_averaged(params);
  row.v_avg = averaged.visibility;
  row.p_avg = averaged.predictability;
  row.sum_avg_squares = averaged.sum_of_squares();
  const PortProbabilities ports = port_probabilities(params);
  row.p_h = ports.h;
  row.p_v = ports.v;
  return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepConfig &config) {
  config.validate();
  const auto count = static_cast<std::size_t>(config.samples);
  std::vector<SweepRow> rows(count);

  std::optional<ModePair> modes;
  if (config.measure) modes = make_mode_pair(config.pipeline.l, config.pipeline.grid);

  auto compute = [&](std::size_t i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    const double swept = i + 1 == count ? config.end : config.start + t * (config.end - config.start);
    const StateParams params = config.parameter == SweptParameter::theta
                                   ? StateParams{swept, config.fixed}
                                   : StateParams{config.fixed, swept};
    SweepRow row = analytic_row(params);
    if (modes) {
      PipelineOptions options = config.pipeline;
      options.noise = config.pipeline.noise.substream(i);
      const MeasuredDuality m = measure_duality(params, *modes, options);
      row.measured = true;
      row.v_cond_v_measured = m.v_given_v;
      row.p_cond_h_measured = m.p_given_h;
      row.sum_cond_squares_measured = m.sum_cond_squares();
      row.v_avg_measured = m.v_avg;
      row.p_avg_measured = m.p_avg;
      row.sum_avg_squares_measured = m.sum_avg_squares();
    }
    rows[i] = row;
  };

  unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) compute(i);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            compute(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<std::string> sweep_columns(bool measured) {
  std::vector<std::string> columns{"theta", "alpha",    "V_cond_V",        "P_cond_H", "sum_cond_squares",
                                   "V_avg", "P_avg",    "sum_avg_squares", "p_H",      "p_V"};
  if (measured) {
    for (const char *name : {"V_cond_V_measured", "P_cond_H_measured", "sum_cond_squares_measured",
                             "V_avg_measured", "P_avg_measured", "sum_avg_squares_measured"})
      columns.emplace_back(name);
  }
  return columns;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{:.12g}", value);
}

std::vector<double> sweep_values(const SweepRow &row, bool measured) {
  std::vector<double> values{row.theta, row.alpha,           row.v_cond_v, row.p_cond_h,
                             row.sum_cond_squares, row.v_avg, row.p_avg,   row.sum_avg_squares,
                             row.p_h,   row.p_v};
  if (measured) {
    values.insert(values.end(), {row.v_cond_v_measured, row.p_cond_h_measured, row.sum_cond_squares_measured,
                                 row.v_avg_measured, row.p_avg_measured, row.sum_avg_squares_measured});
  }
  return values;
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows, bool measured) {
  const auto columns = sweep_columns(measured);
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const SweepRow &row : rows) {
    const std::vector<double> values = sweep_values(row, measured);
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << format_number(values[i]);
    out << '\n';
  }
}

} // namespace duality
