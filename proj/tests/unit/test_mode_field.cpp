#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "helpers.hpp"
#include "pslight/mode_field.hpp"

using namespace pslight;
using testing::grid;
using testing::modes;

TEST_CASE("symmetric offsets pair up exactly") {
    const auto w = symmetric_offsets(256, 4.0);
    CHECK(w.front() == -4.0);
    CHECK(w.back() == 4.0);
    for (std::size_t n = 0; n < w.size(); ++n) CHECK(w[n] == -w[w.size() - 1 - n]);
    CHECK(symmetric_offsets(1, 4.0) == std::vector<double>{0.0});
}

TEST_CASE("single mode gives constant intensity c^2") {
    SpectralEnvelope env;
    const auto m = sample_chaotic_modes(env, 1, 4.0, 7);
    const auto i = intensity(synthesize_field(m, grid(0.0, 0.05, 400)));
    for (double v : i.values) CHECK(v == doctest::Approx(m.amplitudes[0] * m.amplitudes[0]).epsilon(1e-14));

    const auto one = synthesize_field(modes({0.0}, {1.0}, {0.0}), grid(0.0, 0.1, 50));
    for (const auto& z : one.samples) CHECK(z == Complex(1.0, 0.0));
}

TEST_CASE("mean total power matches the envelope normalization") {
    SpectralEnvelope env;
    env.mean_intensity = 1.5;
    const int n = 10000;
    double s = 0.0, ss = 0.0;
    for (int r = 0; r < n; ++r) {
        const auto m = sample_chaotic_modes(env, 64, 4.0, 99, static_cast<std::uint64_t>(r));
        double p = 0.0;
        for (double c : m.amplitudes) p += c * c;
        s += p;
        ss += p * p;
    }
    const double mean = s / n;
    const double se = std::sqrt((ss / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean - 1.5) < 3.0 * se);
}

TEST_CASE("Rayleigh amplitudes: <c^4>/<c^2>^2 = 2") {
    // Rayleigh density on c with E[c^2] = p has E[c^4] = 2 p^2; check the
    // identity by direct quadrature first, then against the sampler.
    const double p = 0.8;
    double m2 = 0.0, m4 = 0.0;
    const double h = 1e-4;
    for (double c = h / 2; c < 12.0; c += h) {
        const double f = 2.0 * c / p * std::exp(-c * c / p);
        m2 += c * c * f * h;
        m4 += c * c * c * c * f * h;
    }
    CHECK(m4 / (m2 * m2) == doctest::Approx(2.0).epsilon(1e-6));

    SpectralEnvelope env;
    double s2 = 0.0, s4 = 0.0;
    const int draws = 100000;
    for (int r = 0; r < draws; ++r) {
        const double c = sample_chaotic_modes(env, 1, 4.0, 5, static_cast<std::uint64_t>(r)).amplitudes[0];
        s2 += c * c;
        s4 += c * c * c * c;
    }
    const double ratio = (s4 / draws) / ((s2 / draws) * (s2 / draws));
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("phases are uniform") {
    SpectralEnvelope env;
    double sc = 0.0, ss = 0.0;
    std::size_t count = 0;
    for (int r = 0; r < 200; ++r) {
        for (double phi : sample_chaotic_modes(env, 256, 4.0, 3, static_cast<std::uint64_t>(r)).phases) {
            CHECK(phi >= 0.0);
            CHECK(phi < 2.0 * std::numbers::pi);
            sc += std::cos(phi);
            ss += std::sin(phi);
            ++count;
        }
    }
    // Each mean has standard error 1/sqrt(2 count).
    const double se = 1.0 / std::sqrt(2.0 * static_cast<double>(count));
    CHECK(std::abs(sc / count) < 4.0 * se);
    CHECK(std::abs(ss / count) < 4.0 * se);
}

TEST_CASE("conjugate partner modes") {
    const auto self = conjugate_partner_modes(modes({0.0}, {1.0}, {0.0}));
    CHECK(self.offsets[0] == 0.0);
    CHECK(self.amplitudes[0] == 1.0);
    CHECK(self.phases[0] == 0.0);

    const auto p = conjugate_partner_modes(modes({2.0}, {0.5}, {0.3}));
    CHECK(p.offsets[0] == -2.0);
    CHECK(p.amplitudes[0] == 0.5);
    CHECK(p.phases[0] == -0.3);
}

TEST_CASE("partner field is the pointwise conjugate") {
    SpectralEnvelope env;
    const auto g = grid(-3.0, 0.05, 800);
    for (std::uint64_t r = 0; r < 5; ++r) {
        const auto m = sample_chaotic_modes(env, 256, 4.0, 11, r);
        const auto e1 = synthesize_field(m, g);
        const auto e2 = synthesize_field(conjugate_partner_modes(m), g);
        CHECK(testing::max_rel_diff(e2.samples, conjugate_series(e1).samples) <= 1e-12);
        CHECK(e2.samples == conjugate_series(e1).samples);
        CHECK(testing::max_abs_diff(intensity(e1).values, intensity(e2).values) <= 1e-12);
    }
}

TEST_CASE("two modes beat as 2 + 2 cos 2t") {
    const auto g = grid(0.0, 0.01, 700);
    const auto i = intensity(synthesize_field(modes({-1.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}), g));
    for (std::size_t k = 0; k < g.count; ++k)
        CHECK(i.values[k] == doctest::Approx(2.0 + 2.0 * std::cos(2.0 * g.at(k))).epsilon(1e-12));
}

TEST_CASE("intensity of simple samples") {
    ComplexFieldSeries f;
    f.grid = grid(0.0, 1.0, 2);
    f.samples = {Complex(1.0, 0.0), Complex(1.0, 1.0)};
    const auto i = intensity(f);
    CHECK(i.values[0] == 1.0);
    CHECK(i.values[1] == 2.0);
    CHECK(intensity(conjugate_series(f)).values == i.values);
}

TEST_CASE("synthesizer matches the direct sum and rejects aliasing") {
    SpectralEnvelope env;
    const auto g = grid(1.0, 0.05, 300);
    const auto m = sample_chaotic_modes(env, 64, 4.0, 21);
    const auto fast = synthesize_field(m, g);
    std::vector<Complex> slow(g.count);
    for (std::size_t k = 0; k < g.count; ++k)
        for (std::size_t n = 0; n < m.size(); ++n)
            slow[k] += std::polar(m.amplitudes[n], m.phases[n] - m.offsets[n] * g.at(k));
    CHECK(testing::max_rel_diff(fast.samples, slow) <= 1e-12);

    CHECK_THROWS_AS(FieldSynthesizer(m.offsets, grid(0.0, 0.8, 100)), NyquistError);
    const FieldSynthesizer other(symmetric_offsets(32, 4.0), g);
    CHECK_THROWS_AS(other.synthesize(m), std::invalid_argument);
}

TEST_CASE("chaotic field quadratures are Gaussian") {
    SpectralEnvelope env;
    const auto g = grid(0.0, 0.5, 250);  // samples ~ one coherence time apart
    std::vector<double> q;
    for (std::uint64_t r = 0; r < 400; ++r) {
        for (const auto& z : synthesize_field(sample_chaotic_modes(env, 128, 4.0, 8, r), g).samples) {
            q.push_back(z.real());
            q.push_back(z.imag());
        }
    }
    double m2 = 0.0, m4 = 0.0;
    for (double x : q) {
        m2 += x * x;
        m4 += x * x * x * x;
    }
    m2 /= static_cast<double>(q.size());
    m4 /= static_cast<double>(q.size());
    CHECK(m4 / (m2 * m2) == doctest::Approx(3.0).epsilon(0.1 / 3.0));
}

TEST_CASE("ensemble mean intensity is stationary") {
    SpectralEnvelope env;
    const auto g = grid(0.0, 0.05, 800);
    const FieldSynthesizer synth(symmetric_offsets(256, 4.0), g);
    const int n = 2000;
    std::vector<double> s(g.count), ss(g.count), buf(g.count);
    for (int r = 0; r < n; ++r) {
        const auto m = sample_chaotic_modes(env, 256, 4.0, 4, static_cast<std::uint64_t>(r));
        synth.intensity_into(m.amplitudes, m.phases, buf);
        for (std::size_t k = 0; k < g.count; ++k) {
            s[k] += buf[k];
            ss[k] += buf[k] * buf[k];
        }
    }
    int outside = 0;
    for (std::size_t k = 0; k < g.count; k += 20) {
        const double mean = s[k] / n;
        const double se = std::sqrt((ss[k] / n - mean * mean) / (n - 1));
        if (std::abs(mean - 1.0) > 3.0 * se) ++outside;
    }
    CHECK(outside <= 1);  // 40 looks at 3 sigma
}

TEST_CASE("mode sampling and Markov paths are deterministic") {
    SpectralEnvelope env;
    const auto a = sample_chaotic_modes(env, 32, 4.0, 1234, 17);
    const auto b = sample_chaotic_modes(env, 32, 4.0, 1234, 17);
    CHECK(a.amplitudes == b.amplitudes);
    CHECK(a.phases == b.phases);
    CHECK(sample_chaotic_modes(env, 32, 4.0, 1234, 18).phases != a.phases);
    CHECK(sample_chaotic_modes(env, 32, 4.0, 1235, 17).phases != a.phases);

    const auto g = grid(0.0, 0.05, 500);
    CHECK(markov_chaotic_field(g, 1.0, 1.0, 9, 2).samples == markov_chaotic_field(g, 1.0, 1.0, 9, 2).samples);
}

TEST_CASE("Markov field moments") {
    const double tc = 1.0;
    const auto g = grid(0.0, 0.05, 100000);
    const auto e = markov_chaotic_field(g, tc, 2.0, 77);
    const auto i = intensity(e);
    const std::size_t n = g.count;

    // Mean intensity. Samples are correlated over ~tc/2 for |E|^2, so use
    // batch means of 20 coherence times.
    const std::size_t batch = 400;
    std::vector<double> means;
    for (std::size_t b = 0; b + batch <= n; b += batch)
        means.push_back(std::accumulate(i.values.begin() + b, i.values.begin() + b + batch, 0.0) / batch);
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    const double se = std::sqrt(var / (means.size() - 1) / means.size());
    CHECK(std::abs(mean - 2.0) < 3.0 * se);

    // g1 at one coherence time.
    const std::size_t lag = 20;
    Complex g1(0.0, 0.0);
    double g2num = 0.0;
    for (std::size_t k = 0; k + lag < n; ++k) {
        g1 += std::conj(e.samples[k]) * e.samples[k + lag];
    }
    g1 /= static_cast<double>(n - lag) * mean;
    CHECK(std::abs(g1) == doctest::Approx(std::exp(-1.0)).epsilon(0.05));

    // HBT ratio: zero lag vs. 15 coherence times.
    double far = 0.0;
    const std::size_t far_lag = 300;
    for (std::size_t k = 0; k + far_lag < n; ++k) {
        g2num += i.values[k] * i.values[k];
        far += i.values[k] * i.values[k + far_lag];
    }
    const double ratio = (g2num / n) / (far / (n - far_lag));
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("Markov guard trips on coarse steps") {
    CHECK_THROWS_AS(markov_chaotic_field(grid(0.0, 0.25, 100), 1.0, 1.0, 1), NumericalGuardError);
    CHECK_NOTHROW(markov_chaotic_field(grid(0.0, 0.19, 100), 1.0, 1.0, 1));
}

TEST_CASE("transform-limited pulse") {
    SpectralEnvelope env;
    const double bw = 0.8;
    const auto m = pulse_modes(env, 512, bw, 1);
    const double step = 0.1;
    const auto g = grid(-80.0, step, 1600);
    const auto i1 = intensity(synthesize_field(m, g));
    const auto i2 = intensity(synthesize_field(conjugate_partner_modes(m), g));
    CHECK(rms_duration(i1) == doctest::Approx(1.0 / (2.0 * bw)).epsilon(0.05));
    CHECK(testing::max_abs_diff(i1.values, i2.values) <= 1e-12);
    const auto peak = std::max_element(i1.values.begin(), i1.values.end());
    CHECK(g.at(static_cast<std::size_t>(peak - i1.values.begin())) == doctest::Approx(0.0));

    const auto single = intensity(synthesize_field(pulse_modes(env, 1, bw, 1), g));
    for (double v : single.values) CHECK(v == doctest::Approx(1.0));

    PulseOptions jitter;
    jitter.phase_jitter = 1.0;
    const auto chaotic = pulse_modes(env, 512, bw, 1, jitter);
    CHECK(rms_duration(intensity(synthesize_field(chaotic, g))) > 2.0 * rms_duration(i1));
}

TEST_CASE("rms duration of a sampled Gaussian") {
    RealSeries s;
    s.grid = grid(-20.0, 0.01, 4000);
    for (std::size_t k = 0; k < s.grid.count; ++k) {
        const double t = s.grid.at(k) - 1.5;
        s.values.push_back(std::exp(-t * t / (2.0 * 0.7 * 0.7)));
    }
    CHECK(rms_duration(s) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("invalid inputs") {
    SpectralEnvelope env;
    CHECK_THROWS_AS(sample_chaotic_modes(env, 0, 4.0, 1), std::invalid_argument);
    env.rms_width = -1.0;
    CHECK_THROWS_AS(sample_chaotic_modes(env, 8, 4.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(grid(0.0, 0.0, 10).validate(), std::invalid_argument);
}
