#pragma once

// Parameter sweeps over theta or alpha: closed-form conditional and averaged
// measures per sample, optionally repeated through the image pipeline.

#include <ostream>
#include <string>
#include <vector>

#include "duality/pipeline.hpp"

namespace duality {

enum class SweptParameter { theta, alpha };

struct SweepConfig {
  SweptParameter parameter = SweptParameter::theta;
  /// Value of the parameter that is held fixed.
  double fixed = 0.0;
  double start = 0.0;
  double end = 0.0;
  /// Samples on the closed interval [start, end].
  int samples = 181;
  /// Also run the image pipeline for every sample.
  bool measure = false;
  PipelineOptions pipeline;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Defaults of the two standard sweeps: theta over [0, 2pi] at alpha = pi/12,
  /// or alpha over [0, 2pi] at theta = pi/2.
  static SweepConfig defaults(SweptParameter parameter);

  /// Throws std::invalid_argument on samples < 2 or non-finite values.
  void validate() const;
};

struct SweepRow {
  double theta = 0.0;
  double alpha = 0.0;
  double v_cond_v = 0.0;
  double p_cond_h = 0.0;
  double sum_cond_squares = 0.0;
  double v_avg = 0.0;
  double p_avg = 0.0;
  double sum_avg_squares = 0.0;
  double p_h = 0.0;
  double p_v = 0.0;

  bool measured = false;
  double v_cond_v_measured = 0.0;
  double p_cond_h_measured = 0.0;
  double sum_cond_squares_measured = 0.0;
  double v_avg_measured = 0.0;
  double p_avg_measured = 0.0;
  double sum_avg_squares_measured = 0.0;
};

/// Rows come back in parameter order regardless of worker scheduling.
std::vector<SweepRow> run_sweep(const SweepConfig &config);

/// Column names in output order.
std::vector<std::string> sweep_columns(bool measured);

/// Row values in sweep_columns order.
std::vector<double> sweep_values(const SweepRow &row, bool measured);

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows, bool measured);

/// Fixed-precision text used by every CSV the tools emit ("nan" for NaN).
std::string format_number(double value);

const char *to_string(SweptParameter parameter);

} // namespace duality
