#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oamsim/pipeline.hpp"

namespace oamsim {

struct ParseError {
  int line = 0;  // 0 when no single line is at fault (e.g. missing key)
  std::string key;
  std::string reason;
};

struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  std::vector<ParseError> errors;

  bool ok() const { return config.has_value(); }
};

/// Parse the flat "section.key = value" config format. Collects every error
/// instead of stopping at the first one; unknown keys are rejected.
ParseOutcome parse_config(std::string_view text);

ParseOutcome parse_config_file(const std::string& path);

/// Canonical text form; parse_config(write_config(c)) reproduces c exactly.
std::string write_config(const ExperimentConfig& cfg);

/// FNV-1a 64-bit digest of the canonical config text, 16 hex digits.
/// The output directory is excluded so runs into different locations keep
/// the same identity.
std::string config_digest(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

/// Brightness scale for PGM output: each pixel maps to
/// round(255 * clamp(value / max, 0, 1)).
struct PgmScale {
  enum class Mode { global_peak, fixed };
  Mode mode = Mode::global_peak;
  double max = 1.0;

  static PgmScale global_peak() { return {Mode::global_peak, 1.0}; }
  static PgmScale fixed(double max) { return {Mode::fixed, max}; }
};

/// Binary PGM (P5, maxval 255) with the single comment line
/// "# oam-storage-sim <digest>". Byte-identical across runs and platforms.
void write_pgm(const RealImage& image, const std::string& path,
               const PgmScale& scale, const std::string& digest);

/// CSV with header "t_us,re_amp,im_amp,intensity", 9 significant digits,
/// LF line endings, locale-independent.
void write_csv(const std::vector<RevivalRecord>& records, const std::string& path);

std::vector<RevivalRecord> read_csv(const std::string& path);

/// Two-column CSV "t_us,g_r" for the retrieved pulse shape.
void write_pulse_trace_csv(const std::vector<double>& t_us,
                           const std::vector<double>& g_r,
                           const std::string& path);

/// Text dump of a sampled complex field ("CFIELD v1" header, one "re im"
/// pair per pixel, row-major). Lossless round trip.
void write_cfield(const ComplexField& field, const std::string& path);

ComplexField read_cfield(const std::string& path);

/// Locale-independent number formatting helpers.
std::string format_double(double v);               // shortest round-trip form
std::string format_double_sig9(double v);          // 9 significant digits
std::string format_fixed(double v, int decimals);  // fixed-point, zero padded

}  // namespace oamsim
