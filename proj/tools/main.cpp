#include <cmath>
#include <complex>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oamsim/io.hpp"
#include "oamsim/pipeline.hpp"

namespace fs = std::filesystem;
using namespace oamsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;
constexpr int kExitIoError = 4;

ExperimentConfig load_config_or_exit(const std::string& path,
                                     const std::optional<std::string>& out_dir) {
  ParseOutcome outcome = parse_config_file(path);
  if (!outcome.ok()) {
    std::cerr << "config error in " << path << ":\n";
    for (const ParseError& e : outcome.errors) {
      std::cerr << "  ";
      if (e.line > 0) std::cerr << "line " << e.line << ", ";
      std::cerr << e.key << ": " << e.reason << "\n";
    }
    std::exit(kExitConfigError);
  }
  ExperimentConfig cfg = *outcome.config;
  if (out_dir) cfg.output.dir = *out_dir;
  return cfg;
}

fs::path ensure_out_dir(const ExperimentConfig& cfg) {
  fs::path dir = cfg.output.dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create output directory");
  return dir;
}

int cmd_render_write(const std::string& config_path,
                     const std::optional<std::string>& out_dir) {
  const ExperimentConfig cfg = load_config_or_exit(config_path, out_dir);
  const fs::path dir = ensure_out_dir(cfg);
  const std::string digest = config_digest(cfg);

  const ComplexField field = sample_superposition(cfg.modes, cfg.grid);
  RealImage intensity;
  intensity.grid = field.grid;
  intensity.data.resize(field.data.size());
  for (std::size_t k = 0; k < field.data.size(); ++k)
    intensity.data[k] = std::norm(field.data[k]);

  const fs::path pgm = dir / "write_beam.pgm";
  const fs::path cfield = dir / "write_beam.cfield";
  write_pgm(intensity, pgm.string(), PgmScale::global_peak(), digest);
  write_cfield(field, cfield.string());
  std::cout << "wrote " << pgm.string() << "\n";
  std::cout << "wrote " << cfield.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path,
              const std::optional<std::string>& out_dir) {
  const ExperimentConfig cfg = load_config_or_exit(config_path, out_dir);
  const Manifest manifest = run_experiment(cfg);
  std::cout << "config digest " << manifest.config_digest << "\n";
  for (const Manifest::Entry& e : manifest.entries)
    std::cout << "  " << e.path << "  " << e.bytes << " bytes  fnv1a64 "
              << e.fnv1a64 << "\n";
  std::cout << "wrote " << manifest.entries.size() << " files + manifest.json in "
            << cfg.output.dir << "\n";
  return kExitOk;
}

int cmd_retrieve(const std::string& config_path, double t_s_us,
                 const std::optional<std::string>& out_dir) {
  if (t_s_us < 0) {
    std::cerr << "--ts must be >= 0\n";
    return kExitConfigError;
  }
  const ExperimentConfig cfg = load_config_or_exit(config_path, out_dir);
  const fs::path dir = ensure_out_dir(cfg);
  const std::string digest = config_digest(cfg);

  ExperimentConfig single = cfg;
  single.scan.t_s_us = {0.0, t_s_us};
  single.output.image_times_us = {t_s_us};
  const TimeSeries series = retrieved_time_series(single);

  const std::string stamp = format_fixed(t_s_us, 6);
  const fs::path pgm = dir / ("retrieved_" + stamp + "us.pgm");
  write_pgm(series.frames.back().image, pgm.string(),
            PgmScale::fixed(series.peak_intensity), digest);

  // retrieved field at this storage time, for charge inspection
  const ComplexField wp = sample_superposition(cfg.modes, cfg.grid);
  const double t_read = g_r_peak_time(cfg.lambda_params, cfg.scan.read_window_us);
  const ComplexField retrieved =
      retrieve_field(approx_coherence(wp, cfg.lambda_params, t_read, t_s_us));
  const fs::path cfield = dir / ("retrieved_" + stamp + "us.cfield");
  write_cfield(retrieved, cfield.string());

  const int n_trace = 501;
  std::vector<double> ts(n_trace), gs(n_trace);
  for (int k = 0; k < n_trace; ++k) {
    ts[k] = cfg.scan.read_window_us * k / (n_trace - 1);
    gs[k] = g_r_pulse(ts[k], cfg.lambda_params);
  }
  const fs::path trace = dir / "g_r_trace.csv";
  write_pulse_trace_csv(ts, gs, trace.string());

  std::cout << "wrote " << pgm.string() << "\n";
  std::cout << "wrote " << cfield.string() << "\n";
  std::cout << "wrote " << trace.string() << "\n";
  return kExitOk;
}

int cmd_charge(const std::string& input, double radius_um, double cx, double cy) {
  ComplexField field;
  if (input.size() > 7 && input.substr(input.size() - 7) == ".cfield") {
    field = read_cfield(input);
  } else {
    const ExperimentConfig cfg = load_config_or_exit(input, std::nullopt);
    field = sample_superposition(cfg.modes, cfg.grid);
  }
  const int beam = measure_charge(field, radius_um, cx, cy, ChargeFrame::beam);
  const int lab = measure_charge(field, radius_um, cx, cy, ChargeFrame::lab);
  std::cout << "charge (beam frame): " << beam << "\n";
  std::cout << "charge (lab frame):  " << lab << "\n";
  return kExitOk;
}

bool report(const char* name, bool ok) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
  return ok;
}

int cmd_selftest() {
  bool all = true;

  {  // LG orthogonality on a compact grid
    const GridSpec grid = GridSpec::centered(192, 192, 600.0 / 192);
    ModeSpec a, b;
    a.charge = 1;
    b.charge = 0;
    a.w0_um = b.w0_um = 100.0;
    const ComplexField fa = sample_superposition({a}, grid);
    const ComplexField fb = sample_superposition({b}, grid);
    all &= report("lg_orthogonality", std::abs(overlap(fa, fb)) < 1e-6 &&
                                          std::abs(overlap(fa, fa) - 1.0) < 1e-3);
  }
  {  // mirror is an involution
    ModeSpec m;
    m.charge = 2;
    m.center_x_um = 17.0;
    const auto twice =
        transform_mode(transform_mode({m}, ModeTransform::mirror), ModeTransform::mirror);
    all &= report("mirror_involution", twice.size() == 1 && twice[0] == m);
  }
  {  // charge sign convention
    ModeSpec m;
    m.charge = 2;
    m.w0_um = 80.0;
    const ComplexField f =
        sample_superposition({m}, GridSpec::centered(192, 192, 2.5));
    all &= report("charge_measurement",
                  measure_charge(f, 80.0) == 2);
  }
  {  // pulse shape at t=0 and continuity across the critical point
    LambdaParams p;
    const double critical = 0.5 * (0.5 * p.gamma22 - p.gamma);
    LambdaParams lo = p, hi = p;
    lo.omega_r = critical - 5e-7;
    hi.omega_r = critical + 5e-7;
    bool ok = g_r_pulse(0.0, p) == 0.0;
    for (double t : {0.05, 0.1, 0.2, 0.5})
      ok = ok && std::abs(g_r_pulse(t, lo) - g_r_pulse(t, hi)) < 1e-9;
    all &= report("pulse_shape_continuity", ok);
  }
  {  // precession unitarity and 2*pi periodicity
    const GroundDM rho0 = GroundDM::edge_pumped();
    ZeemanParams zp;
    zp.b_gauss = 0.6;
    const double t_l = larmor(zp).period_us;
    const GroundDM back = precess(rho0, zp, t_l);
    all &= report("precession_periodicity",
                  (back.rho - rho0.rho).norm() < 1e-10 &&
                      std::abs(back.trace_real() - rho0.trace_real()) < 1e-12);
  }
  {  // full-revival amplitude identity
    const GroundDM rho0 = GroundDM::edge_pumped();
    ZeemanParams zp;
    zp.b_gauss = 0.6;
    const ReadProjection proj = ReadProjection::clebsch_gordan_default();
    const double t_l = larmor(zp).period_us;
    const double a0 = std::abs(retrieval_amplitude(rho0, proj, 0.0, 0.0));
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
      const double t = n * t_l;
      const double a = std::abs(
          retrieval_amplitude(precess(rho0, zp, t), proj, zp.gamma_b, t));
      ok = ok && std::abs(a / a0 - std::exp(-zp.gamma_b * t)) <
                     1e-9 * std::exp(-zp.gamma_b * t);
    }
    all &= report("revival_identity", ok);
  }

  return all ? kExitOk : kExitNumericError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oam-storage-sim: deterministic simulator of OAM light storage,"
               " manipulation, and phase-conjugate retrieval in a cold ensemble"};
  app.require_subcommand(1);

  std::optional<std::string> out_dir;
  app.add_option("--out", out_dir, "override the configured output directory");

  app.fallthrough();

  std::string config_path;
  auto* render = app.add_subcommand("render-write", "sample and image the W' beam");
  render->add_option("config", config_path, "config file")->required();

  auto* sweep = app.add_subcommand(
      "sweep", "storage-time scan: CSV, frames, and manifest");
  sweep->add_option("config", config_path, "config file")->required();

  double ts_value = 0.0;
  auto* retrieve = app.add_subcommand(
      "retrieve", "single retrieval image plus the g_R pulse trace");
  retrieve->add_option("config", config_path, "config file")->required();
  retrieve->add_option("--ts", ts_value, "storage time in us")->required();

  std::string charge_input;
  double radius_um = 0.0, center_x = 0.0, center_y = 0.0;
  auto* charge = app.add_subcommand(
      "charge", "measure the topological charge of a field (.cfield or config)");
  charge->add_option("input", charge_input, ".cfield file or config file")->required();
  charge->add_option("--radius", radius_um, "circle radius in um")->required();
  charge->add_option("--cx", center_x, "circle center x in um");
  charge->add_option("--cy", center_y, "circle center y in um");

  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  (void)selftest;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (render->parsed()) return cmd_render_write(config_path, out_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir);
    if (retrieve->parsed()) return cmd_retrieve(config_path, ts_value, out_dir);
    if (charge->parsed())
      return cmd_charge(charge_input, radius_um, center_x, center_y);
    return cmd_selftest();
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const Error& e) {
    std::cerr << "numerical invariant violation: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
}
