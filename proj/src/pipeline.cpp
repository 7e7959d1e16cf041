#include "oamsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "oamsim/io.hpp"

namespace oamsim {

namespace fs = std::filesystem;

ComplexField retrieve_field(const CoherenceField& coh) {
  ComplexField field;
  field.grid = coh.grid;
  field.direction = opposite(coh.wp_direction);
  field.data = coh.data;
  return field;
}

namespace {

/// Unit-modulus phase of the strongest pixel; the overall phase reference of
/// the retrieved mode. First such pixel in row-major order breaks ties.
Complex phase_reference(const ComplexField& field) {
  double best = 0.0;
  Complex ref{1.0, 0.0};
  for (const Complex& v : field.data) {
    const double a = std::abs(v);
    if (a > best) {
      best = a;
      ref = v / a;
    }
  }
  return ref;
}

/// Indices of the scan points nearest the requested frame times
/// (all points when no times were requested).
std::vector<std::size_t> frame_indices(const ScanSpec& scan,
                                       const std::vector<double>& requested) {
  std::set<std::size_t> picked;
  if (requested.empty()) {
    for (std::size_t k = 0; k < scan.t_s_us.size(); ++k) picked.insert(k);
  } else {
    for (double want : requested) {
      std::size_t best = 0;
      double dist = std::abs(scan.t_s_us[0] - want);
      for (std::size_t k = 1; k < scan.t_s_us.size(); ++k) {
        const double d = std::abs(scan.t_s_us[k] - want);
        if (d < dist) {
          dist = d;
          best = k;
        }
      }
      picked.insert(best);
    }
  }
  return {picked.begin(), picked.end()};
}

}  // namespace

TimeSeries retrieved_time_series(const ExperimentConfig& cfg) {
  const ComplexField wp = sample_superposition(cfg.modes, cfg.grid);
  const double t_read = g_r_peak_time(cfg.lambda_params, cfg.scan.read_window_us);
  const CoherenceField coh0 = approx_coherence(wp, cfg.lambda_params, t_read, 0.0);
  const ComplexField mode = retrieve_field(coh0);

  TimeSeries series;
  series.stored_power = mode.power();
  for (const Complex& v : mode.data)
    series.peak_intensity = std::max(series.peak_intensity, std::norm(v));

  const Complex ref = phase_reference(mode);
  const double amp_scale = std::sqrt(series.stored_power);

  const GroundDM rho0 = cfg.initial_state.build();
  const Complex a0 = retrieval_amplitude(rho0, cfg.projection, 0.0, 0.0);
  const std::vector<RevivalRecord> scalar =
      revival_scan(rho0, cfg.zeeman_params, cfg.projection, cfg.scan.t_s_us);

  std::vector<Complex> a_rel(scalar.size());
  series.records.reserve(scalar.size());
  for (std::size_t k = 0; k < scalar.size(); ++k) {
    a_rel[k] = a0 == Complex{0.0, 0.0} ? Complex{0.0, 0.0}
                                       : scalar[k].amplitude / a0;
    RevivalRecord rec;
    rec.t_s_us = scalar[k].t_s_us;
    rec.amplitude = a_rel[k] * amp_scale * ref;
    rec.intensity = std::norm(rec.amplitude);
    series.records.push_back(rec);
  }

  for (std::size_t k : frame_indices(cfg.scan, cfg.output.image_times_us)) {
    FrameImage frame;
    frame.t_s_us = cfg.scan.t_s_us[k];
    frame.image.grid = cfg.grid;
    frame.image.data.resize(mode.data.size());
    const double scale = std::norm(a_rel[k]);
    for (std::size_t px = 0; px < mode.data.size(); ++px)
      frame.image.data[px] = scale * std::norm(mode.data[px]);
    series.frames.push_back(std::move(frame));
  }
  return series;
}

Manifest run_experiment(const ExperimentConfig& cfg) {
  const std::string digest = config_digest(cfg);
  const fs::path out_dir = cfg.output.dir;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string(), "cannot create output directory");

  const TimeSeries series = retrieved_time_series(cfg);

  Manifest manifest;
  manifest.config_digest = digest;

  auto add_entry = [&](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot reopen written file");
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    Manifest::Entry e;
    e.path = path.filename().string();
    e.bytes = bytes.size();
    e.fnv1a64 = fnv1a64_hex(bytes);
    manifest.entries.push_back(std::move(e));
  };

  const fs::path csv_path = out_dir / "scan.csv";
  write_csv(series.records, csv_path.string());
  add_entry(csv_path);

  for (const FrameImage& frame : series.frames) {
    const fs::path frame_path =
        out_dir / ("frame_" + format_fixed(frame.t_s_us, 6) + "us.pgm");
    write_pgm(frame.image, frame_path.string(),
              PgmScale::fixed(series.peak_intensity), digest);
    add_entry(frame_path);
  }

  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const Manifest::Entry& a, const Manifest::Entry& b) {
              return a.path < b.path;
            });

  nlohmann::json doc;
  doc["config_digest"] = manifest.config_digest;
  doc["files"] = nlohmann::json::array();
  for (const Manifest::Entry& e : manifest.entries)
    doc["files"].push_back(
        {{"path", e.path}, {"bytes", e.bytes}, {"fnv1a64", e.fnv1a64}});

  const fs::path manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError(manifest_path.string(), "cannot open for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError(manifest_path.string(), "write failed");
  return manifest;
}

}  // namespace oamsim
