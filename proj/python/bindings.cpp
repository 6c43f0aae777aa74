#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pslight/config.hpp"
#include "pslight/correlation.hpp"
#include "pslight/dispersion.hpp"
#include "pslight/mode_field.hpp"
#include "pslight/quantum.hpp"
#include "pslight/scenarios.hpp"

namespace py = pybind11;
using namespace pslight;

namespace {

py::array_t<Complex> to_array(const std::vector<Complex>& v) {
    py::array_t<Complex> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

ComplexFieldSeries series_from(py::array_t<Complex, py::array::c_style | py::array::forcecast> samples,
                               const TimeGrid& grid) {
    ComplexFieldSeries f;
    f.grid = grid;
    f.samples.assign(samples.data(), samples.data() + samples.size());
    return f;
}

std::string run_scenario(const std::string& name, const std::string& config_json, const std::string& out_dir) {
    const ScenarioConfig cfg = apply_config_json(ScenarioConfig{}, nlohmann::json::parse(config_json));
    ScenarioOutput out;
    if (name == "hbt") out = run_hbt(cfg, out_dir);
    else if (name == "fields") out = run_fields(cfg, out_dir);
    else if (name == "sweep") out = run_sweep(cfg, out_dir);
    else if (name == "pulse") out = run_pulse(cfg, out_dir);
    else if (name == "identical-beams") out = run_identical_beams(cfg, out_dir);
    else if (name == "quantum") out = run_quantum(cfg, out_dir);
    else throw std::invalid_argument("unknown scenario: " + name);
    return out.summary.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Chaotic and entangled light through dispersive media";

    py::register_exception<NumericalGuardError>(m, "NumericalGuardError", PyExc_RuntimeError);
    py::register_exception<RankError>(m, "RankError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<SpectralEnvelope>(m, "SpectralEnvelope")
        .def(py::init<>())
        .def(py::init([](double rms_width, double mean_intensity) {
                 SpectralEnvelope e;
                 e.rms_width = rms_width;
                 e.mean_intensity = mean_intensity;
                 e.validate();
                 return e;
             }),
             py::arg("rms_width") = 1.0, py::arg("mean_intensity") = 1.0)
        .def_readwrite("rms_width", &SpectralEnvelope::rms_width)
        .def_readwrite("mean_intensity", &SpectralEnvelope::mean_intensity);

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init([](double start, double step, std::size_t count) {
                 TimeGrid g;
                 g.start = start;
                 g.step = step;
                 g.count = count;
                 g.validate();
                 return g;
             }),
             py::arg("start") = 0.0, py::arg("step") = 0.05, py::arg("count") = 800)
        .def_readwrite("start", &TimeGrid::start)
        .def_readwrite("step", &TimeGrid::step)
        .def_readwrite("count", &TimeGrid::count)
        .def("times", [](const TimeGrid& g) {
            std::vector<double> t(g.count);
            for (std::size_t k = 0; k < g.count; ++k) t[k] = g.at(k);
            return to_array(t);
        });

    py::class_<SpectralModes>(m, "SpectralModes")
        .def(py::init<>())
        .def_readwrite("carrier", &SpectralModes::carrier)
        .def_readwrite("offsets", &SpectralModes::offsets)
        .def_readwrite("amplitudes", &SpectralModes::amplitudes)
        .def_readwrite("phases", &SpectralModes::phases)
        .def("__len__", &SpectralModes::size);

    py::class_<DispersiveMedium>(m, "DispersiveMedium")
        .def(py::init([](double beta, double alpha, double length) {
                 DispersiveMedium d{alpha, beta, length};
                 d.validate();
                 return d;
             }),
             py::arg("beta") = 0.0, py::arg("alpha") = 0.0, py::arg("length") = 1.0)
        .def_static("from_reduced", &DispersiveMedium::from_reduced, py::arg("d"), py::arg("rms_width") = 1.0,
                    py::arg("length") = 1.0)
        .def_readwrite("beta", &DispersiveMedium::dispersion_coeff)
        .def_readwrite("alpha", &DispersiveMedium::group_delay_coeff)
        .def_readwrite("length", &DispersiveMedium::length)
        .def("phase", &DispersiveMedium::phase);

    m.def("symmetric_offsets", &symmetric_offsets, py::arg("n_modes"), py::arg("half_span_width"));
    m.def("sample_chaotic_modes", &sample_chaotic_modes, py::arg("envelope"), py::arg("n_modes"),
          py::arg("half_span") = 4.0, py::arg("seed") = 0, py::arg("realization") = 0);
    m.def("conjugate_partner_modes", &conjugate_partner_modes);
    m.def("apply_dispersion_modes", &apply_dispersion_modes);
    m.def(
        "synthesize_field", [](const SpectralModes& modes, const TimeGrid& g) {
            return to_array(synthesize_field(modes, g).samples);
        },
        py::arg("modes"), py::arg("grid"), "Complex baseband samples on the grid.");
    m.def(
        "apply_dispersion_series",
        [](py::array_t<Complex, py::array::c_style | py::array::forcecast> samples, const TimeGrid& g,
           const DispersiveMedium& med) { return to_array(apply_dispersion_series(series_from(samples, g), med).samples); },
        py::arg("samples"), py::arg("grid"), py::arg("medium"));
    m.def(
        "markov_chaotic_field",
        [](const TimeGrid& g, double coherence_time, double mean_intensity, std::uint64_t seed,
           std::uint64_t realization) {
            return to_array(markov_chaotic_field(g, coherence_time, mean_intensity, seed, realization).samples);
        },
        py::arg("grid"), py::arg("coherence_time"), py::arg("mean_intensity") = 1.0, py::arg("seed") = 0,
        py::arg("realization") = 0);

    py::class_<CorrelationEstimate>(m, "CorrelationEstimate")
        .def_property_readonly("lags", [](const CorrelationEstimate& e) { return to_array(e.lags); })
        .def_property_readonly("g2", [](const CorrelationEstimate& e) { return to_array(e.g2); })
        .def_property_readonly("stderr", [](const CorrelationEstimate& e) { return to_array(e.std_error); })
        .def_property_readonly("raw", [](const CorrelationEstimate& e) { return to_array(e.raw); })
        .def_readonly("n_realizations", &CorrelationEstimate::n_realizations)
        .def_readonly("background", &CorrelationEstimate::background)
        .def_readonly("peak_height", &CorrelationEstimate::peak_height)
        .def_readonly("peak_fwhm", &CorrelationEstimate::peak_fwhm)
        .def_readonly("mean1", &CorrelationEstimate::mean1)
        .def_readonly("mean2", &CorrelationEstimate::mean2)
        .def("peak_to_background", &CorrelationEstimate::peak_to_background);

    py::enum_<BeamPairing>(m, "BeamPairing")
        .value("phase_sensitive", BeamPairing::phase_sensitive)
        .value("identical", BeamPairing::identical);

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def(py::init<>())
        .def_readwrite("seed", &EnsembleSpec::seed)
        .def_readwrite("n_modes", &EnsembleSpec::n_modes)
        .def_readwrite("n_realizations", &EnsembleSpec::n_realizations)
        .def_readwrite("half_span", &EnsembleSpec::half_span)
        .def_readwrite("envelope", &EnsembleSpec::envelope)
        .def_readwrite("grid", &EnsembleSpec::grid)
        .def_readwrite("threads", &EnsembleSpec::threads);

    py::class_<ZeroLagDeficit>(m, "ZeroLagDeficit")
        .def_readonly("reference", &ZeroLagDeficit::reference)
        .def_readonly("dispersed", &ZeroLagDeficit::dispersed)
        .def_readonly("deficit", &ZeroLagDeficit::deficit)
        .def_readonly("stderr", &ZeroLagDeficit::std_error)
        .def_readonly("raw_deficit", &ZeroLagDeficit::raw_deficit);

    py::class_<PairCorrelation>(m, "PairCorrelation")
        .def_readonly("reference", &PairCorrelation::reference)
        .def_readonly("dispersed", &PairCorrelation::dispersed)
        .def_readonly("zero_lag", &PairCorrelation::zero_lag);

    m.def(
        "pair_correlation",
        [](const EnsembleSpec& spec, const std::vector<double>& lags, const DispersiveMedium& med1,
           const DispersiveMedium& med2, BeamPairing pairing, double background_min_lag) {
            CorrelationOptions opts;
            opts.background_min_lag = background_min_lag;
            py::gil_scoped_release release;
            return pair_correlation(spec, lags, med1, med2, pairing, opts);
        },
        py::arg("spec"), py::arg("lags"), py::arg("medium1"), py::arg("medium2"),
        py::arg("pairing") = BeamPairing::phase_sensitive, py::arg("background_min_lag") = 10.0);

    py::class_<SweepRow>(m, "SweepRow")
        .def(py::init([](double b1, double b2, double deficit, double se) {
                 return SweepRow{b1, b2, deficit, se, 0.0};
             }),
             py::arg("beta1"), py::arg("beta2"), py::arg("deficit"), py::arg("stderr") = 0.0)
        .def_readonly("beta1", &SweepRow::beta1)
        .def_readonly("beta2", &SweepRow::beta2)
        .def_readonly("deficit", &SweepRow::deficit)
        .def_readonly("stderr", &SweepRow::std_error)
        .def_readonly("raw_deficit", &SweepRow::raw_deficit);

    m.def(
        "dispersion_sweep",
        [](const EnsembleSpec& spec, const std::vector<std::pair<double, double>>& points, BeamPairing pairing) {
            py::gil_scoped_release release;
            return dispersion_sweep(spec, points, pairing);
        },
        py::arg("spec"), py::arg("points"), py::arg("pairing") = BeamPairing::phase_sensitive);

    py::class_<QuadraticFit>(m, "QuadraticFit")
        .def_readonly("a", &QuadraticFit::a)
        .def_readonly("b1", &QuadraticFit::b1)
        .def_readonly("b2", &QuadraticFit::b2)
        .def_readonly("c1", &QuadraticFit::c1)
        .def_readonly("c2", &QuadraticFit::c2)
        .def_readonly("d", &QuadraticFit::d)
        .def_readonly("residual_rms", &QuadraticFit::residual_rms)
        .def("evaluate", &QuadraticFit::evaluate);
    m.def("fit_quadratic_surface", [](const std::vector<SweepRow>& rows) { return fit_quadratic_surface(rows); });

    py::class_<BiphotonSpectrum>(m, "BiphotonSpectrum")
        .def_readonly("offsets", &BiphotonSpectrum::offsets)
        .def_readonly("amplitudes", &BiphotonSpectrum::amplitudes);
    m.def("gaussian_biphoton_spectrum", &gaussian_biphoton_spectrum, py::arg("envelope"), py::arg("n_modes"),
          py::arg("half_span") = 4.0);
    m.def(
        "coincidence_profile",
        [](const BiphotonSpectrum& s, const std::vector<double>& lags, const DispersiveMedium& med1,
           const DispersiveMedium& med2) { return coincidence_profile(s, lags, med1, med2); },
        py::arg("spectrum"), py::arg("lags"), py::arg("medium1"), py::arg("medium2"));

    m.def(
        "run_scenario",
        [](const std::string& name, const std::string& config_json, const std::string& out_dir) {
            py::gil_scoped_release release;
            return run_scenario(name, config_json, out_dir);
        },
        py::arg("name"), py::arg("config_json"), py::arg("out_dir"),
        "Runs one CLI scenario; returns the JSON summary as text.");
}
