#include "pslight/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace pslight {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Walks one JSON object, rejecting keys that no reader asked for.
class Section {
  public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    ~Section() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [key, value] : obj_.items())
            if (!known_.contains(key)) throw ConfigError(join(path_, key), "unknown key");
    }

    Section(const Section&) = delete;
    Section& operator=(const Section&) = delete;

    void read(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
            out = v->get<double>();
        }
    }

    template <class Int>
        requires std::is_integral_v<Int>
    void read(const std::string& key, Int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
            if (v->is_number_unsigned()) {
                out = static_cast<Int>(v->get<std::uint64_t>());
            } else {
                const auto x = v->get<std::int64_t>();
                if (x < 0) throw ConfigError(join(path_, key), "must be >= 0");
                out = static_cast<Int>(x);
            }
        }
    }

    void read(const std::string& key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) throw ConfigError(join(path_, key), "expected an array of numbers");
            out.clear();
            for (const auto& x : *v) {
                if (!x.is_number()) throw ConfigError(join(path_, key), "expected an array of numbers");
                out.push_back(x.get<double>());
            }
        }
    }

    void read(const std::string& key, std::vector<std::pair<double, double>>& out) {
        if (const json* v = find(key)) {
            const std::string where = join(path_, key);
            if (!v->is_array()) throw ConfigError(where, "expected an array of [d1, d2] pairs");
            out.clear();
            for (const auto& x : *v) {
                if (!x.is_array() || x.size() != 2 || !x[0].is_number() || !x[1].is_number())
                    throw ConfigError(where, "expected an array of [d1, d2] pairs");
                out.emplace_back(x[0].get<double>(), x[1].get<double>());
            }
        }
    }

    void read(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
            out = v->get<std::string>();
        }
    }

    /// Nested section, or nullptr when absent.
    const json* child(const std::string& key) { return find(key); }
    std::string path_of(const std::string& key) const { return join(path_, key); }

  private:
    const json* find(const std::string& key) {
        known_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> known_;
};

void positive(const std::string& field, double v) {
    if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(field, "must be finite and > 0");
}

void finite(const std::string& field, double v) {
    if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
}

}  // namespace

void ScenarioConfig::validate() const {
    if (n_modes < 1) throw ConfigError("n_modes", "must be >= 1");
    if (n_realizations < 2) throw ConfigError("n_realizations", "must be >= 2");
    positive("envelope.rms_width", envelope.rms_width);
    positive("envelope.mean_intensity", envelope.mean_intensity);
    positive("modes.half_span", half_span);
    positive("grid.window_coherence_times", grid.window_coherence_times);
    positive("grid.step", grid.step);
    finite("grid.start", grid.start);
    if (grid.window_coherence_times * envelope.coherence_time() / grid.step < 2.0)
        throw ConfigError("grid.window_coherence_times", "window holds fewer than 2 samples");
    finite("media.d1", media.d1);
    finite("media.d2", media.d2);
    positive("media.length", media.length);
    finite("media.alpha1", media.alpha1);
    finite("media.alpha2", media.alpha2);
    if (!(std::isfinite(lags.max) && lags.max >= 0.0)) throw ConfigError("lags.max", "must be finite and >= 0");
    if (lags.max >= grid.window_coherence_times * envelope.coherence_time())
        throw ConfigError("lags.max", "must be shorter than the window");
    positive("lags.background_min_coherence_times", lags.background_min_coherence_times);
    for (double d : sweep.d_values) finite("sweep.d_values", d);
    for (const auto& [a, b] : sweep.points) {
        finite("sweep.points", a);
        finite("sweep.points", b);
    }
    positive("pulse.bandwidth", pulse.bandwidth);
    if (!(pulse.phase_jitter >= 0.0 && pulse.phase_jitter <= 1.0))
        throw ConfigError("pulse.phase_jitter", "must lie in [0, 1]");
    positive("pulse.window", pulse.window);
    positive("pulse.step", pulse.step);
    positive("pulse.half_span", pulse.half_span);
    if (pulse.n_modes < 2) throw ConfigError("pulse.n_modes", "must be >= 2");
    if (pulse.window / pulse.step < 2.0) throw ConfigError("pulse.window", "window holds fewer than 2 samples");
    positive("fields.coherence_time", fields.coherence_time);
    if (quantum.n_modes < 1) throw ConfigError("quantum.n_modes", "must be >= 1");
    positive("quantum.half_span", quantum.half_span);
}

TimeGrid ScenarioConfig::time_grid() const {
    TimeGrid g;
    g.start = grid.start;
    g.step = grid.step;
    g.count = static_cast<std::size_t>(std::llround(grid.window_coherence_times * envelope.coherence_time() / grid.step));
    return g;
}

EnsembleSpec ScenarioConfig::ensemble() const {
    EnsembleSpec spec;
    spec.seed = seed;
    spec.n_modes = n_modes;
    spec.n_realizations = n_realizations;
    spec.half_span = half_span;
    spec.envelope = envelope;
    spec.grid = time_grid();
    spec.threads = threads;
    return spec;
}

DispersiveMedium ScenarioConfig::medium1() const {
    DispersiveMedium med = DispersiveMedium::from_reduced(media.d1, envelope.rms_width, media.length);
    med.group_delay_coeff = media.alpha1;
    return med;
}

DispersiveMedium ScenarioConfig::medium2() const {
    DispersiveMedium med = DispersiveMedium::from_reduced(media.d2, envelope.rms_width, media.length);
    med.group_delay_coeff = media.alpha2;
    return med;
}

std::vector<double> ScenarioConfig::lag_grid() const {
    const long half = std::lround(lags.max / grid.step);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * half + 1));
    for (long i = -half; i <= half; ++i) out.push_back(static_cast<double>(i) * grid.step);
    return out;
}

double ScenarioConfig::background_min_lag() const {
    return lags.background_min_coherence_times * envelope.coherence_time();
}

std::vector<std::pair<double, double>> ScenarioConfig::sweep_points() const {
    if (!sweep.points.empty()) return sweep.points;
    std::vector<std::pair<double, double>> out;
    for (double d1 : sweep.d_values)
        for (double d2 : sweep.d_values) out.emplace_back(d1, d2);
    return out;
}

ScenarioConfig apply_config_json(ScenarioConfig cfg, const json& doc) {
    Section root(doc, "");
    root.read("seed", cfg.seed);
    root.read("n_modes", cfg.n_modes);
    root.read("n_realizations", cfg.n_realizations);
    root.read("threads", cfg.threads);
    if (const json* j = root.child("envelope")) {
        Section s(*j, "envelope");
        s.read("rms_width", cfg.envelope.rms_width);
        s.read("mean_intensity", cfg.envelope.mean_intensity);
        std::string shape = "gaussian";
        s.read("shape", shape);
        if (shape != "gaussian") throw ConfigError("envelope.shape", "only \"gaussian\" is supported");
    }
    if (const json* j = root.child("modes")) {
        Section s(*j, "modes");
        s.read("half_span", cfg.half_span);
    }
    if (const json* j = root.child("grid")) {
        Section s(*j, "grid");
        s.read("window_coherence_times", cfg.grid.window_coherence_times);
        s.read("step", cfg.grid.step);
        s.read("start", cfg.grid.start);
    }
    if (const json* j = root.child("media")) {
        Section s(*j, "media");
        s.read("d1", cfg.media.d1);
        s.read("d2", cfg.media.d2);
        s.read("length", cfg.media.length);
        s.read("alpha1", cfg.media.alpha1);
        s.read("alpha2", cfg.media.alpha2);
    }
    if (const json* j = root.child("lags")) {
        Section s(*j, "lags");
        s.read("max", cfg.lags.max);
        s.read("background_min_coherence_times", cfg.lags.background_min_coherence_times);
    }
    if (const json* j = root.child("sweep")) {
        Section s(*j, "sweep");
        s.read("d_values", cfg.sweep.d_values);
        s.read("points", cfg.sweep.points);
    }
    if (const json* j = root.child("pulse")) {
        Section s(*j, "pulse");
        s.read("bandwidth", cfg.pulse.bandwidth);
        s.read("phase_jitter", cfg.pulse.phase_jitter);
        s.read("window", cfg.pulse.window);
        s.read("step", cfg.pulse.step);
        s.read("n_modes", cfg.pulse.n_modes);
        s.read("half_span", cfg.pulse.half_span);
    }
    if (const json* j = root.child("fields")) {
        Section s(*j, "fields");
        std::string backend = cfg.fields.backend == FieldBackend::modes ? "modes" : "markov";
        s.read("backend", backend);
        if (backend == "modes") {
            cfg.fields.backend = FieldBackend::modes;
        } else if (backend == "markov") {
            cfg.fields.backend = FieldBackend::markov;
        } else {
            throw ConfigError("fields.backend", "expected \"modes\" or \"markov\"");
        }
        s.read("coherence_time", cfg.fields.coherence_time);
        s.read("realization", cfg.fields.realization);
    }
    if (const json* j = root.child("quantum")) {
        Section s(*j, "quantum");
        s.read("n_modes", cfg.quantum.n_modes);
        s.read("half_span", cfg.quantum.half_span);
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path, ScenarioConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("parse error: ") + e.what());
    }
    return apply_config_json(std::move(base), doc);
}

nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg) {
    // `threads` is omitted: outputs must not depend on it.
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["n_modes"] = cfg.n_modes;
    j["n_realizations"] = cfg.n_realizations;
    j["envelope"] = {{"rms_width", cfg.envelope.rms_width},
                     {"mean_intensity", cfg.envelope.mean_intensity},
                     {"shape", "gaussian"}};
    j["modes"] = {{"half_span", cfg.half_span}};
    j["grid"] = {{"window_coherence_times", cfg.grid.window_coherence_times},
                 {"step", cfg.grid.step},
                 {"start", cfg.grid.start}};
    j["media"] = {{"d1", cfg.media.d1},
                  {"d2", cfg.media.d2},
                  {"length", cfg.media.length},
                  {"alpha1", cfg.media.alpha1},
                  {"alpha2", cfg.media.alpha2}};
    j["lags"] = {{"max", cfg.lags.max}, {"background_min_coherence_times", cfg.lags.background_min_coherence_times}};
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const auto& [a, b] : cfg.sweep.points) points.push_back({a, b});
    j["sweep"] = {{"d_values", cfg.sweep.d_values}, {"points", points}};
    j["pulse"] = {{"bandwidth", cfg.pulse.bandwidth},
                  {"phase_jitter", cfg.pulse.phase_jitter},
                  {"window", cfg.pulse.window},
                  {"step", cfg.pulse.step},
                  {"n_modes", cfg.pulse.n_modes},
                  {"half_span", cfg.pulse.half_span}};
    j["fields"] = {{"backend", cfg.fields.backend == FieldBackend::modes ? "modes" : "markov"},
                   {"coherence_time", cfg.fields.coherence_time},
                   {"realization", cfg.fields.realization}};
    j["quantum"] = {{"n_modes", cfg.quantum.n_modes}, {"half_span", cfg.quantum.half_span}};
    return j;
}

}  // namespace pslight
