#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oamsim/ensemble.hpp"
#include "oamsim/zeeman.hpp"

namespace oamsim {

/// Storage-time grid and read-pulse window.
struct ScanSpec {
  std::vector<double> t_s_us;
  double read_window_us = 2.0;

  bool operator==(const ScanSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  /// Frames are written at the scan points nearest these times; when empty,
  /// every scan point gets a frame.
  std::vector<double> image_times_us;

  bool operator==(const OutputSpec&) const = default;
};

struct InitialStateSpec {
  double pop_m3 = 0.95;
  double pop_m1 = 0.05;
  Complex coh_m3_m1 = {0.2, 0.0};

  GroundDM build() const { return GroundDM::edge_pumped(pop_m3, pop_m1, coh_m3_m1); }

  bool operator==(const InitialStateSpec&) const = default;
};

struct ExperimentConfig {
  std::vector<ModeSpec> modes;  // components of W'
  GridSpec grid;
  LambdaParams lambda_params;
  ZeemanParams zeeman_params;
  InitialStateSpec initial_state;
  ReadProjection projection = ReadProjection::clebsch_gordan_default();
  ScanSpec scan;
  OutputSpec output;

  bool operator==(const ExperimentConfig&) const = default;
};

struct FrameImage {
  double t_s_us = 0.0;
  RealImage image;
};

struct TimeSeries {
  std::vector<RevivalRecord> records;
  std::vector<FrameImage> frames;
  double stored_power = 0.0;    // integrated |Phi|^2 of the retrieved mode
  double peak_intensity = 0.0;  // peak pixel of the t_s = 0 frame
};

struct Manifest {
  struct Entry {
    std::string path;  // relative to the output directory
    std::uint64_t bytes = 0;
    std::string fnv1a64;
  };
  std::string config_digest;
  std::vector<Entry> entries;
};

/// The retrieved field: same envelope as the stored coherence (already the
/// conjugate of W'), propagating opposite to W'. The lab-frame phase winding
/// is therefore negated while the charge seen in the beam's own frame equals
/// the incident one.
ComplexField retrieve_field(const CoherenceField& coh);

/// Scalar Zeeman dynamics times the fixed retrieved transverse mode:
/// records carry amplitude a(t_s)/a(0) scaled to the stored power, frames
/// carry |field|^2 at the selected storage times.
TimeSeries retrieved_time_series(const ExperimentConfig& cfg);

/// Run the sweep and write scan.csv, one PGM frame per selected storage time
/// (normalized to the t_s = 0 peak), and manifest.json with content digests.
/// Byte-identical outputs for identical configs.
Manifest run_experiment(const ExperimentConfig& cfg);

}  // namespace oamsim
