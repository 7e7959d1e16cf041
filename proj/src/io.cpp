#include "oamsim/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace oamsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);  // from_chars rejects '+'
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return v;
}

// "a+bi" style: real, imaginary, or both; exponent signs are not separators.
std::optional<Complex> parse_complex(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  const bool has_i = s.back() == 'i' || s.back() == 'I';
  if (!has_i) {
    auto re = parse_real(s);
    if (!re) return std::nullopt;
    return Complex{*re, 0.0};
  }
  s.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
      split = k;
  }
  std::string_view re_part = split == std::string_view::npos ? "" : s.substr(0, split);
  std::string_view im_part = split == std::string_view::npos ? s : s.substr(split);
  double re = 0.0;
  if (!re_part.empty()) {
    auto v = parse_real(re_part);
    if (!v) return std::nullopt;
    re = *v;
  }
  double im;
  im_part = trim(im_part);
  if (im_part.empty() || im_part == "+") {
    im = 1.0;
  } else if (im_part == "-") {
    im = -1.0;
  } else {
    auto v = parse_real(im_part);
    if (!v) return std::nullopt;
    im = *v;
  }
  return Complex{re, im};
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    out.push_back(trim(s.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

struct RawEntry {
  int line = 0;
  std::string value;
  bool used = false;
};

/// Typed key extraction over the raw entries; every failure is recorded.
class Reader {
 public:
  Reader(std::map<std::string, RawEntry>& entries, std::vector<ParseError>& errors)
      : entries_(entries), errors_(errors) {}

  bool has(const std::string& key) { return entries_.count(key) != 0; }

  void fail(const std::string& key, const std::string& reason, int line = 0) {
    errors_.push_back({line, key, reason});
  }

  void require_missing(const std::string& key) {
    fail(key, "required key is missing");
  }

  template <typename T, typename Fn>
  std::optional<T> get(const std::string& key, Fn parse, const char* type_name) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    auto v = parse(std::string_view(it->second.value));
    if (!v) {
      fail(key, std::string("value is not a valid ") + type_name, it->second.line);
      return std::nullopt;
    }
    return std::optional<T>(*v);
  }

  std::optional<double> real(const std::string& key) {
    return get<double>(key, parse_real, "real number");
  }
  std::optional<long long> integer(const std::string& key) {
    return get<long long>(key, parse_int, "integer");
  }
  std::optional<Complex> complex_value(const std::string& key) {
    return get<Complex>(key, parse_complex, "complex number (a+bi)");
  }
  std::optional<std::string> text(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }
  std::optional<std::vector<double>> real_list(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    std::vector<double> out;
    for (std::string_view item : split_list(it->second.value)) {
      auto v = parse_real(item);
      if (!v) {
        fail(key, "list element is not a valid real number", it->second.line);
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }
  std::optional<std::vector<Complex>> complex_list(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    std::vector<Complex> out;
    for (std::string_view item : split_list(it->second.value)) {
      auto v = parse_complex(item);
      if (!v) {
        fail(key, "list element is not a valid complex number", it->second.line);
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  int line_of(const std::string& key) {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

 private:
  std::map<std::string, RawEntry>& entries_;
  std::vector<ParseError>& errors_;
};

std::string mode_key(std::size_t i, const char* field) {
  return "modes[" + std::to_string(i) + "]." + field;
}

}  // namespace

ParseOutcome parse_config(std::string_view text) {
  ParseOutcome outcome;
  std::vector<ParseError>& errors = outcome.errors;
  std::map<std::string, RawEntry> entries;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    ++line_no;
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({line_no, std::string(line), "expected 'key = value'"});
      continue;
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) {
      errors.push_back({line_no, key, "empty key"});
      continue;
    }
    if (value.empty()) {
      errors.push_back({line_no, key, "missing value"});
      continue;
    }
    if (entries.count(key)) {
      errors.push_back({line_no, key, "duplicate key"});
      continue;
    }
    entries[key] = {line_no, value, false};
  }

  Reader r(entries, errors);
  ExperimentConfig cfg;

  // optics
  double wavelength_nm = kDefaultWavelengthNm;
  if (auto v = r.real("optics.wavelength_nm")) {
    if (*v > 0)
      wavelength_nm = *v;
    else
      r.fail("optics.wavelength_nm", "wavelength must be > 0",
             r.line_of("optics.wavelength_nm"));
  }

  // modes[i].*
  std::size_t n_modes = 0;
  while (r.has(mode_key(n_modes, "charge")) || r.has(mode_key(n_modes, "w0_um")))
    ++n_modes;
  if (n_modes == 0) {
    r.require_missing(mode_key(0, "charge"));
    r.require_missing(mode_key(0, "w0_um"));
  }
  for (std::size_t i = 0; i < n_modes; ++i) {
    ModeSpec mode;
    mode.wavelength_nm = wavelength_nm;
    if (auto v = r.integer(mode_key(i, "charge")))
      mode.charge = static_cast<int>(*v);
    else if (!r.has(mode_key(i, "charge")))
      r.require_missing(mode_key(i, "charge"));
    if (auto v = r.real(mode_key(i, "w0_um"))) {
      if (*v > 0)
        mode.w0_um = *v;
      else
        r.fail(mode_key(i, "w0_um"), "waist must be > 0",
               r.line_of(mode_key(i, "w0_um")));
    } else if (!r.has(mode_key(i, "w0_um"))) {
      r.require_missing(mode_key(i, "w0_um"));
    }
    if (auto v = r.real(mode_key(i, "z_um"))) mode.z_um = *v;
    if (auto v = r.complex_value(mode_key(i, "weight"))) mode.weight = *v;
    if (auto v = r.real(mode_key(i, "center_x_um"))) mode.center_x_um = *v;
    if (auto v = r.real(mode_key(i, "center_y_um"))) mode.center_y_um = *v;
    if (auto v = r.text(mode_key(i, "direction"))) {
      if (*v == "forward")
        mode.direction = Direction::forward;
      else if (*v == "backward")
        mode.direction = Direction::backward;
      else
        r.fail(mode_key(i, "direction"), "must be 'forward' or 'backward'",
               r.line_of(mode_key(i, "direction")));
    }
    cfg.modes.push_back(mode);
  }

  // grid
  bool grid_origin_given_x = false, grid_origin_given_y = false;
  if (auto v = r.integer("grid.width")) {
    if (*v >= 2)
      cfg.grid.width = static_cast<int>(*v);
    else
      r.fail("grid.width", "width must be >= 2", r.line_of("grid.width"));
  } else if (!r.has("grid.width")) {
    r.require_missing("grid.width");
  }
  if (auto v = r.integer("grid.height")) {
    if (*v >= 2)
      cfg.grid.height = static_cast<int>(*v);
    else
      r.fail("grid.height", "height must be >= 2", r.line_of("grid.height"));
  } else if (!r.has("grid.height")) {
    r.require_missing("grid.height");
  }
  if (auto v = r.real("grid.pitch_um")) {
    if (*v > 0)
      cfg.grid.pitch_um = *v;
    else
      r.fail("grid.pitch_um", "pitch must be > 0", r.line_of("grid.pitch_um"));
  } else if (!r.has("grid.pitch_um")) {
    r.require_missing("grid.pitch_um");
  }
  if (auto v = r.real("grid.origin_x_um")) {
    cfg.grid.origin_x_um = *v;
    grid_origin_given_x = true;
  }
  if (auto v = r.real("grid.origin_y_um")) {
    cfg.grid.origin_y_um = *v;
    grid_origin_given_y = true;
  }
  if (!grid_origin_given_x)
    cfg.grid.origin_x_um = -0.5 * (cfg.grid.width - 1) * cfg.grid.pitch_um;
  if (!grid_origin_given_y)
    cfg.grid.origin_y_um = -0.5 * (cfg.grid.height - 1) * cfg.grid.pitch_um;

  // lambda
  if (auto v = r.real("lambda.Gamma22_per_us")) {
    if (*v > 0)
      cfg.lambda_params.gamma22 = *v;
    else
      r.fail("lambda.Gamma22_per_us", "Gamma22 must be > 0",
             r.line_of("lambda.Gamma22_per_us"));
  }
  if (auto v = r.real("lambda.gamma_per_us")) {
    if (*v >= 0)
      cfg.lambda_params.gamma = *v;
    else
      r.fail("lambda.gamma_per_us", "gamma must be >= 0",
             r.line_of("lambda.gamma_per_us"));
  }
  if (auto v = r.real("lambda.OmegaR_per_us")) {
    if (*v >= 0)
      cfg.lambda_params.omega_r = *v;
    else
      r.fail("lambda.OmegaR_per_us", "OmegaR must be >= 0",
             r.line_of("lambda.OmegaR_per_us"));
  }
  if (auto v = r.complex_value("lambda.A")) cfg.lambda_params.prefactor_a = *v;

  // zeeman
  if (auto v = r.real("zeeman.gF")) cfg.zeeman_params.g_f = *v;
  if (auto v = r.real("zeeman.B_gauss")) {
    if (*v >= 0)
      cfg.zeeman_params.b_gauss = *v;
    else
      r.fail("zeeman.B_gauss", "B must be >= 0", r.line_of("zeeman.B_gauss"));
  }
  if (auto v = r.real_list("zeeman.axis")) {
    if (v->size() != 3) {
      r.fail("zeeman.axis", "axis needs exactly 3 components",
             r.line_of("zeeman.axis"));
    } else {
      const double n = std::sqrt((*v)[0] * (*v)[0] + (*v)[1] * (*v)[1] +
                                 (*v)[2] * (*v)[2]);
      if (n == 0.0) {
        r.fail("zeeman.axis", "axis must be a nonzero vector",
               r.line_of("zeeman.axis"));
      } else {
        cfg.zeeman_params.axis = {(*v)[0] / n, (*v)[1] / n, (*v)[2] / n};
      }
    }
  }
  cfg.zeeman_params.gamma_b = cfg.lambda_params.gamma / 4.0;
  if (auto v = r.real("zeeman.gamma_B_per_us")) {
    if (*v >= 0)
      cfg.zeeman_params.gamma_b = *v;
    else
      r.fail("zeeman.gamma_B_per_us", "gamma_B must be >= 0",
             r.line_of("zeeman.gamma_B_per_us"));
  }
  if (auto v = r.real("zeeman.pop_m3")) cfg.initial_state.pop_m3 = *v;
  if (auto v = r.real("zeeman.pop_m1")) cfg.initial_state.pop_m1 = *v;
  if (auto v = r.complex_value("zeeman.coh_m3_m1")) cfg.initial_state.coh_m3_m1 = *v;
  {
    const double p3 = cfg.initial_state.pop_m3;
    const double p1 = cfg.initial_state.pop_m1;
    const double c2 = std::norm(cfg.initial_state.coh_m3_m1);
    const double tr = p3 + p1;
    if (p3 < 0 || p1 < 0 || tr <= 0 || tr > 1.0 + 1e-12)
      r.fail("zeeman.pop_m3", "populations must be >= 0 with 0 < trace <= 1");
    else if (p3 * p1 + 1e-12 < c2)
      r.fail("zeeman.coh_m3_m1", "initial state is not positive semidefinite");
  }
  if (auto v = r.complex_list("zeeman.read_weights")) {
    if (v->size() != 5) {
      r.fail("zeeman.read_weights", "exactly 5 weights are required",
             r.line_of("zeeman.read_weights"));
    } else {
      bool any = false;
      for (std::size_t k = 0; k < 5; ++k) {
        cfg.projection.weights[k] = (*v)[k];
        if ((*v)[k] != Complex{0.0, 0.0}) any = true;
      }
      if (!any)
        r.fail("zeeman.read_weights", "at least one weight must be nonzero",
               r.line_of("zeeman.read_weights"));
    }
  }

  // scan
  const bool has_list = r.has("scan.ts_list_us");
  const bool has_trio = r.has("scan.ts_start_us") || r.has("scan.ts_stop_us") ||
                        r.has("scan.ts_step_us");
  if (has_list && has_trio) {
    r.fail("scan.ts_list_us", "give either ts_list_us or the start/stop/step trio",
           r.line_of("scan.ts_list_us"));
    r.real_list("scan.ts_list_us");
    r.real("scan.ts_start_us");
    r.real("scan.ts_stop_us");
    r.real("scan.ts_step_us");
  } else if (has_list) {
    if (auto v = r.real_list("scan.ts_list_us")) cfg.scan.t_s_us = *v;
  } else if (has_trio) {
    auto start = r.real("scan.ts_start_us");
    auto stop = r.real("scan.ts_stop_us");
    auto step = r.real("scan.ts_step_us");
    if (!r.has("scan.ts_start_us")) r.require_missing("scan.ts_start_us");
    if (!r.has("scan.ts_stop_us")) r.require_missing("scan.ts_stop_us");
    if (!r.has("scan.ts_step_us")) r.require_missing("scan.ts_step_us");
    if (start && stop && step) {
      if (!(*step > 0)) {
        r.fail("scan.ts_step_us", "step must be > 0", r.line_of("scan.ts_step_us"));
      } else if (*stop < *start) {
        r.fail("scan.ts_stop_us", "stop must be >= start",
               r.line_of("scan.ts_stop_us"));
      } else {
        const auto n = static_cast<std::size_t>(
            std::floor((*stop - *start) / *step + 1e-9));
        for (std::size_t k = 0; k <= n; ++k)
          cfg.scan.t_s_us.push_back(*start + static_cast<double>(k) * *step);
      }
    }
  } else {
    r.require_missing("scan.ts_list_us");
  }
  if (!cfg.scan.t_s_us.empty()) {
    bool sorted = true, nonneg = true;
    for (std::size_t k = 0; k < cfg.scan.t_s_us.size(); ++k) {
      if (cfg.scan.t_s_us[k] < 0) nonneg = false;
      if (k > 0 && cfg.scan.t_s_us[k] < cfg.scan.t_s_us[k - 1]) sorted = false;
    }
    if (!nonneg)
      r.fail("scan.ts_list_us", "storage times must be >= 0",
             r.line_of("scan.ts_list_us"));
    if (!sorted)
      r.fail("scan.ts_list_us", "storage times must be sorted ascending",
             r.line_of("scan.ts_list_us"));
  }
  if (auto v = r.real("scan.read_window_us")) {
    if (*v > 0)
      cfg.scan.read_window_us = *v;
    else
      r.fail("scan.read_window_us", "read window must be > 0",
             r.line_of("scan.read_window_us"));
  }

  // output
  if (auto v = r.text("output.dir")) cfg.output.dir = *v;
  if (auto v = r.real_list("output.image_times_us")) {
    for (double t : *v)
      if (t < 0)
        r.fail("output.image_times_us", "image times must be >= 0",
               r.line_of("output.image_times_us"));
    cfg.output.image_times_us = *v;
  }

  for (const auto& [key, entry] : entries)
    if (!entry.used) errors.push_back({entry.line, key, "unknown key"});

  if (errors.empty()) outcome.config = std::move(cfg);
  return outcome;
}

ParseOutcome parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseOutcome outcome;
    outcome.errors.push_back({0, path, "cannot read config file"});
    return outcome;
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

namespace {

std::string format_complex(Complex v) {
  std::string s = format_double(v.real());
  const std::string im = format_double(v.imag());
  if (!im.empty() && im.front() != '-') s += '+';
  s += im;
  s += 'i';
  return s;
}

template <typename T, typename Fn>
std::string join(const std::vector<T>& items, Fn fmt) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += ',';
    out += fmt(items[k]);
  }
  return out;
}

}  // namespace

std::string write_config(const ExperimentConfig& cfg) {
  std::string out;
  auto emit = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };

  out += "# oam-storage-sim configuration\n";
  emit("optics.wavelength_nm",
       format_double(cfg.modes.empty() ? kDefaultWavelengthNm
                                       : cfg.modes.front().wavelength_nm));
  for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
    const ModeSpec& m = cfg.modes[i];
    emit(mode_key(i, "charge"), std::to_string(m.charge));
    emit(mode_key(i, "w0_um"), format_double(m.w0_um));
    emit(mode_key(i, "z_um"), format_double(m.z_um));
    emit(mode_key(i, "weight"), format_complex(m.weight));
    emit(mode_key(i, "center_x_um"), format_double(m.center_x_um));
    emit(mode_key(i, "center_y_um"), format_double(m.center_y_um));
    emit(mode_key(i, "direction"),
         m.direction == Direction::forward ? "forward" : "backward");
  }
  emit("grid.width", std::to_string(cfg.grid.width));
  emit("grid.height", std::to_string(cfg.grid.height));
  emit("grid.pitch_um", format_double(cfg.grid.pitch_um));
  emit("grid.origin_x_um", format_double(cfg.grid.origin_x_um));
  emit("grid.origin_y_um", format_double(cfg.grid.origin_y_um));
  emit("lambda.Gamma22_per_us", format_double(cfg.lambda_params.gamma22));
  emit("lambda.gamma_per_us", format_double(cfg.lambda_params.gamma));
  emit("lambda.OmegaR_per_us", format_double(cfg.lambda_params.omega_r));
  emit("lambda.A", format_complex(cfg.lambda_params.prefactor_a));
  emit("zeeman.gF", format_double(cfg.zeeman_params.g_f));
  emit("zeeman.B_gauss", format_double(cfg.zeeman_params.b_gauss));
  emit("zeeman.axis", format_double(cfg.zeeman_params.axis[0]) + "," +
                          format_double(cfg.zeeman_params.axis[1]) + "," +
                          format_double(cfg.zeeman_params.axis[2]));
  emit("zeeman.gamma_B_per_us", format_double(cfg.zeeman_params.gamma_b));
  emit("zeeman.pop_m3", format_double(cfg.initial_state.pop_m3));
  emit("zeeman.pop_m1", format_double(cfg.initial_state.pop_m1));
  emit("zeeman.coh_m3_m1", format_complex(cfg.initial_state.coh_m3_m1));
  {
    std::string weights;
    for (std::size_t k = 0; k < cfg.projection.weights.size(); ++k) {
      if (k) weights += ',';
      weights += format_complex(cfg.projection.weights[k]);
    }
    emit("zeeman.read_weights", weights);
  }
  emit("scan.ts_list_us",
       join(cfg.scan.t_s_us, [](double t) { return format_double(t); }));
  emit("scan.read_window_us", format_double(cfg.scan.read_window_us));
  emit("output.dir", cfg.output.dir);
  if (!cfg.output.image_times_us.empty())
    emit("output.image_times_us",
         join(cfg.output.image_times_us, [](double t) { return format_double(t); }));
  return out;
}

std::string config_digest(const ExperimentConfig& cfg) {
  // The digest identifies the generating inputs; where the artifacts land
  // does not change their identity.
  ExperimentConfig canonical = cfg;
  canonical.output.dir = "out";
  return fnv1a64_hex(write_config(canonical));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[k] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

void write_pgm(const RealImage& image, const std::string& path,
               const PgmScale& scale, const std::string& digest) {
  for (double v : image.data)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("write_pgm: image must be non-negative and finite");

  const double max =
      scale.mode == PgmScale::Mode::global_peak ? image.max_value() : scale.max;

  std::string bytes;
  bytes += "P5\n# oam-storage-sim " + digest + "\n";
  bytes += std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n";
  bytes += "255\n";
  for (double v : image.data) {
    double ratio = max > 0.0 ? v / max : 0.0;
    ratio = std::clamp(ratio, 0.0, 1.0);
    bytes += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * ratio)));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path, "write failed");
}

void write_csv(const std::vector<RevivalRecord>& records, const std::string& path) {
  std::string text = "t_us,re_amp,im_amp,intensity\n";
  for (const RevivalRecord& rec : records) {
    text += format_double_sig9(rec.t_s_us);
    text += ',';
    text += format_double_sig9(rec.amplitude.real());
    text += ',';
    text += format_double_sig9(rec.amplitude.imag());
    text += ',';
    text += format_double_sig9(rec.intensity);
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(path, "write failed");
}

std::vector<RevivalRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t_us,re_amp,im_amp,intensity")
    throw IoError(path, "not a scan CSV (bad header)");
  std::vector<RevivalRecord> records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_list(line);
    if (fields.size() != 4) throw IoError(path, "malformed CSV row");
    auto t = parse_real(fields[0]);
    auto re = parse_real(fields[1]);
    auto im = parse_real(fields[2]);
    auto inten = parse_real(fields[3]);
    if (!t || !re || !im || !inten) throw IoError(path, "malformed CSV number");
    records.push_back({*t, Complex{*re, *im}, *inten});
  }
  return records;
}

void write_pulse_trace_csv(const std::vector<double>& t_us,
                           const std::vector<double>& g_r,
                           const std::string& path) {
  if (t_us.size() != g_r.size())
    throw std::invalid_argument("write_pulse_trace_csv: length mismatch");
  std::string text = "t_us,g_r\n";
  for (std::size_t k = 0; k < t_us.size(); ++k) {
    text += format_double_sig9(t_us[k]);
    text += ',';
    text += format_double_sig9(g_r[k]);
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(path, "write failed");
}

void write_cfield(const ComplexField& field, const std::string& path) {
  std::string text = "CFIELD v1\n";
  text += std::to_string(field.width()) + " " + std::to_string(field.height()) + "\n";
  text += format_double(field.pitch_um()) + "\n";
  text += format_double(field.grid.origin_x_um) + " " +
          format_double(field.grid.origin_y_um) + "\n";
  text += field.direction == Direction::forward ? "forward\n" : "backward\n";
  for (const Complex& v : field.data) {
    text += format_double(v.real());
    text += ' ';
    text += format_double(v.imag());
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(path, "write failed");
}

ComplexField read_cfield(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::string header;
  std::getline(in, header);
  if (trim(header) != "CFIELD v1") throw IoError(path, "not a CFIELD v1 file");

  ComplexField field;
  std::string dir;
  in >> field.grid.width >> field.grid.height >> field.grid.pitch_um >>
      field.grid.origin_x_um >> field.grid.origin_y_um >> dir;
  if (!in || field.grid.width < 2 || field.grid.height < 2 ||
      !(field.grid.pitch_um > 0))
    throw IoError(path, "malformed CFIELD header");
  if (dir == "forward")
    field.direction = Direction::forward;
  else if (dir == "backward")
    field.direction = Direction::backward;
  else
    throw IoError(path, "malformed CFIELD direction");

  field.data.resize(field.grid.pixels());
  for (Complex& v : field.data) {
    double re = 0.0, im = 0.0;
    if (!(in >> re >> im)) throw IoError(path, "truncated CFIELD data");
    v = Complex{re, im};
  }
  return field;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_double_sig9(double v) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  std::string s(buf, ptr);
  // zero-pad the integer part to three digits so names sort numerically
  const std::size_t dot = s.find('.');
  const std::size_t int_len = dot == std::string::npos ? s.size() : dot;
  if (int_len < 3) s.insert(0, 3 - int_len, '0');
  return s;
}

}  // namespace oamsim
