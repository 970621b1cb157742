#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "duality/angle.hpp"
#include "duality/errors.hpp"
#include "duality/image_io.hpp"
#include "duality/measures.hpp"
#include "duality/pipeline.hpp"
#include "duality/sweep.hpp"
#include "duality/weak_value.hpp"

namespace dualsim {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Reads nested JSON objects as CLI11 config items; an object key names a
// subcommand, arrays become repeated values.
class JsonConfig : public CLI::Config {
public:
  std::string to_config(const CLI::App *app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
    json document;
    try {
      document = json::parse(input);
    } catch (const json::parse_error &e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!document.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten(document, {}, items);
    return items;
  }

private:
  static json dump(const CLI::App *app, bool default_also) {
    json j = json::object();
    for (const CLI::Option *opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string &name = opt->get_lnames().front();
      if (opt->get_type_size() == 0) {
        if (opt->count() > 0) j[name] = true;
      } else if (opt->count() == 1) {
        j[name] = opt->results().front();
      } else if (opt->count() > 1) {
        j[name] = opt->results();
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App *sub : app->get_subcommands({})) {
      json nested = dump(sub, default_also);
      if (!nested.empty()) j[sub->get_name()] = std::move(nested);
    }
    return j;
  }

  static std::string scalar(const json &value, const std::string &key) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    if (value.is_number()) return fmt::format("{}", value.get<double>());
    throw CLI::ConfigError("config key '" + key + "' must hold a string, number or boolean");
  }

  static void flatten(const json &object, const std::vector<std::string> &parents,
                      std::vector<CLI::ConfigItem> &items) {
    for (const auto &[key, value] : object.items()) {
      if (value.is_object()) {
        std::vector<std::string> nested = parents;
        nested.push_back(key);
        flatten(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const json &element : value) item.inputs.push_back(scalar(element, key));
      } else {
        item.inputs.push_back(scalar(value, key));
      }
      items.push_back(std::move(item));
    }
  }
};

const CLI::Validator kAngle(
    [](std::string &text) {
      try {
        duality::parse_angle(text);
        return std::string();
      } catch (const std::invalid_argument &e) {
        return std::string(e.what());
      }
    },
    "ANGLE", "angle");

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  int grid = 512;
  double photons = 0.0;
  double readout_sigma = 0.0;
  bool json = false;
  CLI::Option *photons_opt = nullptr;
  CLI::Option *sigma_opt = nullptr;
  CLI::Option *seed_opt = nullptr;

  bool noisy() const { return photons_opt->count() > 0 || sigma_opt->count() > 0; }

  duality::NoiseModel noise() const {
    duality::NoiseModel model;
    if (sigma_opt->count() > 0 && photons_opt->count() == 0)
      throw UsageError("--readout-sigma needs --photons");
    if (photons_opt->count() > 0) model.photon_budget = photons;
    model.readout_sigma = readout_sigma;
    model.seed = seed;
    try {
      model.validate();
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }
    return model;
  }

  duality::GridSpec grid_spec() const {
    const duality::GridSpec spec = duality::GridSpec::square(grid);
    try {
      spec.validate();
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }
    return spec;
  }
};

struct AnalysisFlags {
  int l = 3;
  double window = 3.0;
  std::string profile = "pixel";
  std::string method = "fit";

  void add_to(CLI::App *app) {
    app->add_option("--l", l, "OAM charge of the input mode")->capture_default_str();
    app->add_option("--window", window, "Angular window in degrees")->capture_default_str();
    app->add_option("--profile", profile, "Azimuthal profile method")
        ->check(CLI::IsMember({"pixel", "spline"}))
        ->capture_default_str();
    app->add_option("--method", method, "Fringe estimator")
        ->check(CLI::IsMember({"fit", "extrema"}))
        ->capture_default_str();
  }

  void apply(duality::PipelineOptions &options) const {
    if (l == 0) throw UsageError("--l must be nonzero");
    options.l = l;
    options.window_degrees = window;
    options.profile_method = profile == "spline" ? duality::ProfileMethod::spline : duality::ProfileMethod::pixel;
    options.fit_method = method == "extrema" ? duality::FitMethod::extrema : duality::FitMethod::fit;
  }
};

struct SweepArgs {
  std::string param = "theta";
  std::string fixed, start, end;
  int samples = 181;
  bool measure = false;
  unsigned threads = 0;
  AnalysisFlags analysis;
};

struct RenderArgs {
  std::string theta = "pi/2";
  std::string alpha = "pi/2";
  std::string preset;
  std::string path_phase = "0";
  AnalysisFlags analysis;
  CLI::Option *theta_opt = nullptr;
  CLI::Option *alpha_opt = nullptr;
};

struct WeakArgs {
  std::string psi = "gaussian(16)";
  std::vector<std::string> phi{"0.1"};
  std::string mode = "linearized";
  std::size_t n = 256;
};

std::ofstream open_output(const fs::path &path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw duality::IoError("cannot open " + path.string() + " for writing");
  return file;
}

// Writes to --out when given, otherwise to the command's output stream.
void emit(const Common &common, std::ostream &out, const std::string &text) {
  if (common.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file = open_output(common.out);
  file << text;
  if (!file) throw duality::IoError("failed writing " + common.out);
}

json number(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

json noise_json(const duality::NoiseModel &noise) {
  json j;
  j["photon_budget"] = noise.has_shot_noise() ? json(noise.photon_budget) : json("inf");
  j["readout_sigma"] = noise.readout_sigma;
  j["seed"] = noise.seed;
  return j;
}

json grid_json(const duality::GridSpec &grid) {
  return {{"width", grid.width},       {"height", grid.height},     {"extent", grid.extent},
          {"center_x", grid.center_x}, {"center_y", grid.center_y}, {"pixel_size", grid.pixel_size()}};
}

double angle(const std::string &text) { return duality::parse_angle(text); }

int run_sweep_command(const Common &common, const SweepArgs &args, std::ostream &out) {
  const auto parameter = args.param == "alpha" ? duality::SweptParameter::alpha : duality::SweptParameter::theta;
  duality::SweepConfig config = duality::SweepConfig::defaults(parameter);
  if (!args.fixed.empty()) config.fixed = angle(args.fixed);
  if (!args.start.empty()) config.start = angle(args.start);
  if (!args.end.empty()) config.end = angle(args.end);
  config.samples = args.samples;
  config.threads = args.threads;
  config.measure = args.measure || common.noisy();
  if (config.measure) {
    config.pipeline.grid = common.grid_spec();
    config.pipeline.noise = common.noise();
    args.analysis.apply(config.pipeline);
  }
  try {
    config.validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }

  const std::vector<duality::SweepRow> rows = duality::run_sweep(config);
  std::ostringstream text;
  if (common.json) {
    json document;
    document["parameter"] = duality::to_string(config.parameter);
    document["fixed"] = config.fixed;
    document["start"] = config.start;
    document["end"] = config.end;
    document["samples"] = config.samples;
    document["measured"] = config.measure;
    if (config.measure) {
      document["grid"] = grid_json(config.pipeline.grid);
      document["noise"] = noise_json(config.pipeline.noise);
      document["l"] = config.pipeline.l;
    }
    document["columns"] = duality::sweep_columns(config.measure);
    json table = json::array();
    for (const duality::SweepRow &row : rows) {
      json values = json::array();
      for (double v : duality::sweep_values(row, config.measure)) values.push_back(number(v));
      table.push_back(std::move(values));
    }
    document["rows"] = std::move(table);
    text << document.dump(2) << '\n';
  } else {
    duality::write_sweep_csv(text, rows, config.measure);
  }
  emit(common, out, text.str());
  return kSuccess;
}

void write_profile_csv(const fs::path &path, const duality::AzimuthalProfile &profile) {
  std::ofstream file = open_output(path);
  file << "angle_deg,mean_intensity,stderr\n";
  for (std::size_t k = 0; k < profile.size(); ++k) {
    file << duality::format_number(profile.angle_degrees[k]) << ','
         << duality::format_number(profile.mean_intensity[k]) << ','
         << duality::format_number(profile.standard_error[k]) << '\n';
  }
  if (!file) throw duality::IoError("failed writing " + path.string());
}

void write_json(const fs::path &path, const json &document) {
  std::ofstream file = open_output(path);
  file << document.dump(2) << '\n';
  if (!file) throw duality::IoError("failed writing " + path.string());
}

int run_render_command(const Common &common, const RenderArgs &args, std::ostream &out) {
  duality::StateParams params{angle(args.theta), angle(args.alpha)};
  duality::PipelineOptions options;
  options.grid = common.grid_spec();
  options.path_phase = angle(args.path_phase);
  args.analysis.apply(options);
  if (args.preset == "camera") {
    const duality::Calibration cal = duality::camera_calibration();
    if (args.theta_opt->count() == 0) params.theta = cal.params.theta;
    if (args.alpha_opt->count() == 0) params.alpha = cal.params.alpha;
    options.noise = cal.noise;
    if (common.photons_opt->count() > 0) options.noise.photon_budget = common.photons;
    if (common.sigma_opt->count() > 0) options.noise.readout_sigma = common.readout_sigma;
    if (common.seed_opt->count() > 0) options.noise.seed = common.seed;
  } else {
    options.noise = common.noise();
  }
  if (!std::isfinite(params.theta) || !std::isfinite(params.alpha)) throw UsageError("angles must be finite");

  const fs::path dir = common.out.empty() ? fs::path("render") : fs::path(common.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw duality::IoError("cannot create directory " + dir.string() + ": " + ec.message());

  const duality::ModePair modes = duality::make_mode_pair(options.l, options.grid);
  const duality::PipelineImages images = duality::render_pipeline_images(params, modes, options);
  const duality::MeasuredDuality m = duality::analyze_pipeline_images(images, options);

  duality::write_pfm(dir / "h_port.pfm", images.h);
  duality::write_pfm(dir / "v_port.pfm", images.v);
  const double h_peak = duality::write_pgm16(dir / "h_port.pgm", images.h);
  const double v_peak = duality::write_pgm16(dir / "v_port.pgm", images.v);
  write_profile_csv(dir / "v_profile.csv", m.v_profile);
  write_profile_csv(dir / "h_profile.csv", m.h_profile);

  json params_json{{"theta", params.theta}, {"alpha", params.alpha}, {"l", options.l},
                   {"path_phase", options.path_phase}};
  json metadata;
  metadata["params"] = params_json;
  metadata["grid"] = grid_json(options.grid);
  metadata["noise"] = noise_json(options.noise);
  metadata["images"] = {{"h_port", {{"pfm", "h_port.pfm"}, {"pgm", "h_port.pgm"}, {"pgm_peak", h_peak}}},
                        {"v_port", {{"pfm", "v_port.pfm"}, {"pgm", "v_port.pgm"}, {"pgm_peak", v_peak}}}};
  write_json(dir / "metadata.json", metadata);

  double v_analytic = std::numeric_limits<double>::quiet_NaN();
  try {
    v_analytic = duality::closed_form_conditional(params).v_given_v;
  } catch (const duality::ZeroProbabilityPostselection &) {
  }
  json report;
  report["V_measured"] = number(m.v_given_v);
  report["P_measured"] = number(m.p_given_h);
  report["sum_squares"] = number(m.sum_cond_squares());
  report["V_analytic"] = number(v_analytic);
  report["P_analytic"] = 1.0;
  report["visibility"] = number(m.v_given_v);
  report["uncertainty"] = number(m.v_given_v_uncertainty);
  report["predictability"] = number(m.p_given_h);
  report["method"] = args.analysis.method;
  report["profile"] = args.analysis.profile;
  report["window_degrees"] = options.window_degrees;
  report["annulus"] = {options.annulus.r_min, options.annulus.r_max};
  report["h_port_visibility"] = number(m.v_given_h);
  report["v_port_petals"] = duality::count_petals(m.v_profile);
  report["p_H"] = number(m.p_h);
  report["p_V"] = number(m.p_v);
  report["V_avg"] = number(m.v_avg);
  report["P_avg"] = number(m.p_avg);
  report["params"] = params_json;
  report["noise"] = noise_json(options.noise);
  write_json(dir / "report.json", report);

  if (common.json) {
    out << report.dump(2) << '\n';
  } else {
    out << fmt::format("V_measured={} P_measured={} sum_squares={} V_analytic={}\n",
                       duality::format_number(m.v_given_v), duality::format_number(m.p_given_h),
                       duality::format_number(m.sum_cond_squares()), duality::format_number(v_analytic));
  }
  return kSuccess;
}

double parse_number(const std::string &text, const std::string &where) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception &) {
    throw UsageError(where + ": '" + text + "' is not a number");
  }
  if (used != text.size()) throw UsageError(where + ": '" + text + "' is not a number");
  return value;
}

// Two columns (real, imaginary) per line, separated by whitespace or a comma.
// Blank lines and lines starting with '#' are skipped.
duality::TransverseWavefunction read_psi_file(const fs::path &path) {
  std::ifstream file(path);
  if (!file) throw duality::IoError("cannot open " + path.string());
  std::vector<duality::cplx> samples;
  std::string line;
  for (int number = 1; std::getline(file, line); ++number) {
    for (char &c : line)
      if (c == ',') c = ' ';
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first) || first.front() == '#') continue;
    std::string second, extra;
    const std::string where = path.string() + ":" + std::to_string(number);
    if (!(fields >> second) || (fields >> extra)) throw UsageError(where + ": expected two columns (re im)");
    samples.emplace_back(parse_number(first, where), parse_number(second, where));
  }
  if (samples.empty()) throw UsageError(path.string() + ": no samples");
  try {
    return duality::TransverseWavefunction(std::move(samples));
  } catch (const std::invalid_argument &e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

std::optional<std::string> call_argument(const std::string &spec, const std::string &name) {
  if (spec.size() < name.size() + 2 || spec.compare(0, name.size() + 1, name + "(") != 0 || spec.back() != ')')
    return std::nullopt;
  return spec.substr(name.size() + 1, spec.size() - name.size() - 2);
}

duality::TransverseWavefunction make_psi(const std::string &spec, std::size_t n) {
  if (spec == "uniform") return duality::TransverseWavefunction::uniform(n);
  if (auto sigma = call_argument(spec, "gaussian")) {
    const double width = parse_number(*sigma, "--psi");
    if (!(width > 0.0)) throw UsageError("--psi: gaussian width must be positive");
    return duality::TransverseWavefunction::gaussian(n, width);
  }
  if (auto path = call_argument(spec, "file")) return read_psi_file(*path);
  throw UsageError("--psi must be gaussian(sigma), uniform or file(path)");
}

int run_weak_command(const Common &common, const WeakArgs &args, std::ostream &out, std::ostream &err) {
  if (args.n < 2) throw UsageError("--n must be at least 2");
  const duality::TransverseWavefunction psi = make_psi(args.psi, args.n);
  const auto mode = args.mode == "exact" ? duality::CouplingMode::exact : duality::CouplingMode::linearized;
  std::vector<double> phis;
  for (const std::string &text : args.phi) phis.push_back(angle(text));

  std::vector<duality::Reconstruction> runs;
  for (double phi : phis) runs.push_back(duality::reconstruct_wavefunction(psi, phi, mode));

  std::vector<double> errors;
  for (const auto &r : runs) errors.push_back(r.max_abs_error);
  std::optional<double> order;
  if (runs.size() >= 2 && std::all_of(errors.begin(), errors.end(), [](double e) { return e > 0.0; }))
    order = duality::convergence_order(phis, errors);

  std::ostringstream text;
  if (common.json) {
    json document;
    document["psi"] = args.psi;
    document["n"] = psi.size();
    document["mode"] = args.mode;
    json list = json::array();
    for (const auto &r : runs)
      list.push_back({{"phi", r.phi}, {"max_abs_error", r.max_abs_error}, {"max_weakness", r.max_weakness},
                      {"weak", r.weak()}});
    document["runs"] = std::move(list);
    document["max_abs_error"] = *std::max_element(errors.begin(), errors.end());
    if (runs.size() >= 2) {
      json ratios = json::array();
      for (std::size_t i = 1; i < errors.size(); ++i) ratios.push_back(number(errors[i - 1] / errors[i]));
      document["error_ratios"] = std::move(ratios);
      document["convergence_order"] = order ? json(*order) : json(nullptr);
    }
    text << document.dump(2) << '\n';
  } else {
    text << "phi,x,re_psi_ratio,im_psi_ratio,re_truth,im_truth,abs_error_vs_truth\n";
    for (const auto &r : runs) {
      for (const auto &p : r.points) {
        text << duality::format_number(r.phi) << ',' << duality::format_number(p.x) << ','
             << duality::format_number(p.estimate.real()) << ',' << duality::format_number(p.estimate.imag())
             << ',' << duality::format_number(p.truth.real()) << ',' << duality::format_number(p.truth.imag())
             << ',' << duality::format_number(p.abs_error) << '\n';
      }
    }
  }
  emit(common, out, text.str());
  for (const auto &r : runs)
    if (!r.weak())
      err << fmt::format("warning: phi={} is outside the weak regime (max weakness {})\n",
                         duality::format_number(r.phi), duality::format_number(r.max_weakness));
  return kSuccess;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Wave-particle duality simulator for a qubit coupled to an environment"};
  app.name("dualsim");
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "Read options from a JSON file");
  app.require_subcommand(1);

  Common common;
  common.seed_opt = app.add_option("--seed", common.seed, "Noise seed")->capture_default_str();
  app.add_option("--out", common.out, "Output file (sweep, weak) or directory (render)");
  app.add_option("--grid", common.grid, "Camera grid size in pixels")->capture_default_str();
  common.photons_opt = app.add_option("--photons", common.photons, "Photon budget of the full beam");
  common.sigma_opt = app.add_option("--readout-sigma", common.readout_sigma, "Readout noise in photons");
  app.add_flag("--json", common.json, "Emit JSON instead of CSV or text");

  SweepArgs sweep;
  CLI::App *sweep_cmd = app.add_subcommand("sweep", "Closed-form and measured duality over a parameter range");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("--param", sweep.param, "Swept parameter")
      ->check(CLI::IsMember({"theta", "alpha"}))
      ->capture_default_str();
  sweep_cmd->add_option("--fixed", sweep.fixed, "Value of the other parameter")->check(kAngle);
  sweep_cmd->add_option("--start", sweep.start, "First sample")->check(kAngle);
  sweep_cmd->add_option("--end", sweep.end, "Last sample")->check(kAngle);
  sweep_cmd->add_option("--samples", sweep.samples, "Number of samples")->capture_default_str();
  sweep_cmd->add_flag("--measure", sweep.measure, "Also run the image pipeline");
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0: all cores)")->capture_default_str();
  sweep.analysis.add_to(sweep_cmd);

  RenderArgs render;
  CLI::App *render_cmd = app.add_subcommand("render", "Synthesize port images and analyse them");
  render_cmd->fallthrough();
  render.theta_opt = render_cmd->add_option("--theta", render.theta, "Input polarization angle")
                         ->check(kAngle)
                         ->capture_default_str();
  render.alpha_opt = render_cmd->add_option("--alpha", render.alpha, "Coupling angle")
                         ->check(kAngle)
                         ->capture_default_str();
  render_cmd->add_option("--preset", render.preset, "Calibrated operating point")->check(CLI::IsMember({"camera"}));
  render_cmd->add_option("--path-phase", render.path_phase, "Relative arm phase")
      ->check(kAngle)
      ->capture_default_str();
  render.analysis.add_to(render_cmd);

  WeakArgs weak;
  CLI::App *weak_cmd = app.add_subcommand("weak", "Weak-value wavefunction reconstruction");
  weak_cmd->fallthrough();
  weak_cmd->add_option("--psi", weak.psi, "gaussian(sigma), uniform or file(path)")->capture_default_str();
  weak_cmd->add_option("--phi", weak.phi, "Sliver rotation angles")
      ->delimiter(',')
      ->check(kAngle)
      ->capture_default_str();
  weak_cmd->add_option("--mode", weak.mode, "Coupling model")
      ->check(CLI::IsMember({"linearized", "exact"}))
      ->capture_default_str();
  weak_cmd->add_option("--n", weak.n, "Grid points for generated wavefunctions")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*sweep_cmd) return run_sweep_command(common, sweep, out);
    if (*render_cmd) return run_render_command(common, render, out);
    return run_weak_command(common, weak, out, err);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

} // namespace dualsim
