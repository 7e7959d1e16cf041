#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oamsim/io.hpp"
#include "oamsim/pipeline.hpp"

namespace py = pybind11;
using namespace oamsim;

namespace {

py::array_t<std::complex<double>> field_array(const ComplexField& f) {
  py::array_t<std::complex<double>> out({f.height(), f.width()});
  auto buf = out.mutable_unchecked<2>();
  for (int j = 0; j < f.height(); ++j)
    for (int i = 0; i < f.width(); ++i) buf(j, i) = f.at(i, j);
  return out;
}

py::array_t<double> image_array(const RealImage& img) {
  py::array_t<double> out({img.height(), img.width()});
  auto buf = out.mutable_unchecked<2>();
  for (int j = 0; j < img.height(); ++j)
    for (int i = 0; i < img.width(); ++i) buf(j, i) = img.at(i, j);
  return out;
}

py::array_t<std::complex<double>> matrix_array(const ComplexMatrix& m) {
  py::array_t<std::complex<double>> out(
      {static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  auto buf = out.mutable_unchecked<2>();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) buf(r, c) = m(r, c);
  return out;
}

GroundDM dm_from_array(py::array_t<std::complex<double>> arr) {
  auto buf = arr.unchecked<2>();
  if (buf.shape(0) != 7 || buf.shape(1) != 7)
    throw std::invalid_argument("density matrix must be 7x7 (F = 3)");
  GroundDM dm;
  for (py::ssize_t r = 0; r < 7; ++r)
    for (py::ssize_t c = 0; c < 7; ++c) dm.rho(r, c) = buf(r, c);
  return dm;
}

Direction direction_from(const std::string& name) {
  if (name == "forward") return Direction::forward;
  if (name == "backward") return Direction::backward;
  throw std::invalid_argument("direction must be 'forward' or 'backward'");
}

ExperimentConfig config_from_file(const std::string& path) {
  ParseOutcome outcome = parse_config_file(path);
  if (!outcome.ok()) {
    std::string msg = "config errors:";
    for (const ParseError& e : outcome.errors)
      msg += "\n  " + e.key + ": " + e.reason;
    throw std::invalid_argument(msg);
  }
  return *outcome.config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulator of OAM light storage and retrieval in a cold ensemble";

  py::register_exception<Error>(m, "SimulationError");

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_static("centered", &GridSpec::centered, py::arg("width"),
                  py::arg("height"), py::arg("pitch_um"))
      .def_readwrite("width", &GridSpec::width)
      .def_readwrite("height", &GridSpec::height)
      .def_readwrite("pitch_um", &GridSpec::pitch_um)
      .def_readwrite("origin_x_um", &GridSpec::origin_x_um)
      .def_readwrite("origin_y_um", &GridSpec::origin_y_um);

  py::class_<ModeSpec>(m, "ModeSpec")
      .def(py::init([](int charge, double w0_um, double z_um,
                       std::complex<double> weight, double center_x_um,
                       double center_y_um, const std::string& direction,
                       double wavelength_nm) {
             ModeSpec s;
             s.charge = charge;
             s.w0_um = w0_um;
             s.z_um = z_um;
             s.weight = weight;
             s.center_x_um = center_x_um;
             s.center_y_um = center_y_um;
             s.direction = direction_from(direction);
             s.wavelength_nm = wavelength_nm;
             return s;
           }),
           py::arg("charge") = 0, py::arg("w0_um") = 100.0, py::arg("z_um") = 0.0,
           py::arg("weight") = std::complex<double>{1.0, 0.0},
           py::arg("center_x_um") = 0.0, py::arg("center_y_um") = 0.0,
           py::arg("direction") = "forward",
           py::arg("wavelength_nm") = kDefaultWavelengthNm)
      .def_readwrite("charge", &ModeSpec::charge)
      .def_readwrite("w0_um", &ModeSpec::w0_um)
      .def_readwrite("z_um", &ModeSpec::z_um)
      .def_readwrite("weight", &ModeSpec::weight)
      .def_readwrite("center_x_um", &ModeSpec::center_x_um)
      .def_readwrite("center_y_um", &ModeSpec::center_y_um)
      .def_readwrite("wavelength_nm", &ModeSpec::wavelength_nm);

  py::class_<ComplexField>(m, "ComplexField")
      .def_property_readonly("width", &ComplexField::width)
      .def_property_readonly("height", &ComplexField::height)
      .def_property_readonly("pitch_um", &ComplexField::pitch_um)
      .def_property_readonly("direction",
                             [](const ComplexField& f) {
                               return f.direction == Direction::forward
                                          ? "forward"
                                          : "backward";
                             })
      .def_property_readonly("data", &field_array)
      .def("power", &ComplexField::power);

  py::class_<LambdaParams>(m, "LambdaParams")
      .def(py::init<>())
      .def_readwrite("gamma22", &LambdaParams::gamma22)
      .def_readwrite("gamma", &LambdaParams::gamma)
      .def_readwrite("omega_r", &LambdaParams::omega_r)
      .def_readwrite("prefactor_a", &LambdaParams::prefactor_a);

  py::class_<ZeemanParams>(m, "ZeemanParams")
      .def(py::init<>())
      .def_readwrite("g_f", &ZeemanParams::g_f)
      .def_readwrite("b_gauss", &ZeemanParams::b_gauss)
      .def_readwrite("axis", &ZeemanParams::axis)
      .def_readwrite("gamma_b", &ZeemanParams::gamma_b);

  py::class_<ReadProjection>(m, "ReadProjection")
      .def(py::init<>())
      .def_static("clebsch_gordan_default", &ReadProjection::clebsch_gordan_default)
      .def_readwrite("weights", &ReadProjection::weights);

  py::class_<GroundDM>(m, "GroundDM")
      .def(py::init<>())
      .def_static("edge_pumped", &GroundDM::edge_pumped, py::arg("pop_m3") = 0.95,
                  py::arg("pop_m1") = 0.05,
                  py::arg("coh_m3_m1") = std::complex<double>{0.2, 0.0})
      .def_static("from_matrix", &dm_from_array)
      .def_property_readonly("matrix",
                             [](const GroundDM& dm) { return matrix_array(dm.rho); })
      .def("is_valid", &GroundDM::is_valid, py::arg("herm_tol") = 1e-12,
           py::arg("psd_tol") = 1e-10);

  py::class_<RevivalRecord>(m, "RevivalRecord")
      .def_readonly("t_s_us", &RevivalRecord::t_s_us)
      .def_readonly("amplitude", &RevivalRecord::amplitude)
      .def_readonly("intensity", &RevivalRecord::intensity);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_property_readonly("digest", &config_digest);

  m.def("lg_amplitude", &lg_amplitude, py::arg("spec"), py::arg("x_um"),
        py::arg("y_um"));
  m.def("sample_superposition", &sample_superposition, py::arg("specs"),
        py::arg("grid"));
  m.def(
      "transform_mode",
      [](const std::vector<ModeSpec>& specs, const std::string& op) {
        if (op == "mirror") return transform_mode(specs, ModeTransform::mirror);
        if (op == "through_focus")
          return transform_mode(specs, ModeTransform::through_focus);
        throw std::invalid_argument("op must be 'mirror' or 'through_focus'");
      },
      py::arg("specs"), py::arg("op"));
  m.def(
      "interference_image",
      [](const ComplexField& a, const ComplexField& b) {
        return image_array(interference_image(a, b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "measure_charge",
      [](const ComplexField& f, double radius_um, double cx, double cy,
         const std::string& frame) {
        ChargeFrame cf;
        if (frame == "beam")
          cf = ChargeFrame::beam;
        else if (frame == "lab")
          cf = ChargeFrame::lab;
        else
          throw std::invalid_argument("frame must be 'beam' or 'lab'");
        return measure_charge(f, radius_um, cx, cy, cf);
      },
      py::arg("field"), py::arg("radius_um"), py::arg("center_x_um") = 0.0,
      py::arg("center_y_um") = 0.0, py::arg("frame") = "beam");
  m.def("flip_horizontal", &flip_horizontal, py::arg("field"));

  m.def("g_r_pulse", &g_r_pulse, py::arg("t_us"), py::arg("params"));
  m.def("g_r_peak_time", &g_r_peak_time, py::arg("params"), py::arg("window_us"));
  m.def(
      "write_coherence",
      [](const ComplexField& w, const ComplexField& wp,
         std::complex<double> r_scale, double theta_deg, const LambdaParams& p,
         double t_us, double t_s_us) {
        BeamTriple beams{w, wp, r_scale, theta_deg, kDefaultWavelengthNm};
        const CoherenceField coh = write_coherence(beams, p, t_us, t_s_us);
        return py::make_tuple(field_array(retrieve_field(coh)),
                              coh.grating_k_per_um);
      },
      py::arg("w"), py::arg("wp"), py::arg("r_scale"), py::arg("theta_deg"),
      py::arg("params"), py::arg("t_us"), py::arg("t_s_us"));
  m.def(
      "retrieve_field",
      [](const ComplexField& wp, const LambdaParams& p, double t_us,
         double t_s_us) {
        return retrieve_field(approx_coherence(wp, p, t_us, t_s_us));
      },
      py::arg("wp"), py::arg("params"), py::arg("t_us") = 0.1,
      py::arg("t_s_us") = 0.0,
      "Retrieved (phase-conjugate, backward) field for a stored W' beam");

  m.def(
      "angular_momentum_ops",
      [](int two_f) {
        const SpinOperators ops = angular_momentum_ops(two_f);
        return py::make_tuple(matrix_array(ops.fx), matrix_array(ops.fy),
                              matrix_array(ops.fz));
      },
      py::arg("two_f"));
  m.def(
      "larmor",
      [](const ZeemanParams& zp) {
        const LarmorResult r = larmor(zp);
        return py::make_tuple(r.omega_l_rad_per_us, r.period_us);
      },
      py::arg("params"));
  m.def("precess", &precess, py::arg("rho"), py::arg("params"), py::arg("t_s_us"));
  m.def("retrieval_amplitude", &retrieval_amplitude, py::arg("rho"),
        py::arg("projection"), py::arg("gamma_per_us"), py::arg("t_s_us"));
  m.def("revival_scan", &revival_scan, py::arg("rho0"), py::arg("params"),
        py::arg("projection"), py::arg("t_grid_us"));

  m.def("parse_config_file", &config_from_file, py::arg("path"));
  m.def(
      "run_experiment",
      [](const ExperimentConfig& cfg, const std::string& out_dir) {
        ExperimentConfig local = cfg;
        if (!out_dir.empty()) local.output.dir = out_dir;
        const Manifest manifest = run_experiment(local);
        py::dict result;
        result["config_digest"] = manifest.config_digest;
        py::list files;
        for (const Manifest::Entry& e : manifest.entries) {
          py::dict entry;
          entry["path"] = e.path;
          entry["bytes"] = e.bytes;
          entry["fnv1a64"] = e.fnv1a64;
          files.append(entry);
        }
        result["files"] = files;
        return result;
      },
      py::arg("config"), py::arg("out_dir") = "");

  m.attr("MU_B_OVER_H_MHZ_PER_GAUSS") = kMuBOverH_MHzPerGauss;
  m.attr("DEFAULT_WAVELENGTH_NM") = kDefaultWavelengthNm;
#ifdef OAMSIM_VERSION
  m.attr("__version__") = OAMSIM_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
