#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lidarwx/weather.hpp"
#include "test_util.hpp"

using namespace lidarwx;

namespace {

/// Outdoor-scale frame: ranges mostly 10-50 m, modest reflectance values.
PointCloud weather_scene(std::size_t n, Rng& rng) {
    PointCloud pc;
    pc.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rng.uniform(10.0, 50.0);
        const double az = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        const double el = rng.uniform(-0.3, 0.1);
        pc.x[i] = r * std::cos(el) * std::cos(az);
        pc.y[i] = r * std::cos(el) * std::sin(az);
        pc.z[i] = r * std::sin(el);
        pc.intensity[i] = rng.uniform(5.0, 40.0);
        pc.range[i] = std::sqrt(pc.x[i] * pc.x[i] + pc.y[i] * pc.y[i] + pc.z[i] * pc.z[i]);
    }
    return pc;
}

bool identical(const PointCloud& a, const PointCloud& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z && a.intensity == b.intensity &&
           a.range == b.range;
}

std::size_t count_code(const LabelSet& labels, std::uint16_t code) {
    return std::count(labels.codes.begin(), labels.codes.end(), code);
}

}  // namespace

TEST_CASE("severity intervals match the published table") {
    CHECK(severity_interval(WeatherType::snow, SeverityLevel::light) ==
          std::pair<double, double>{0.5, 1.0});
    CHECK(severity_interval(WeatherType::snow, SeverityLevel::moderate) ==
          std::pair<double, double>{1.5, 2.0});
    CHECK(severity_interval(WeatherType::snow, SeverityLevel::heavy) ==
          std::pair<double, double>{2.5, 3.0});
    CHECK(severity_interval(WeatherType::fog, SeverityLevel::light) ==
          std::pair<double, double>{0.01, 0.05});
    CHECK(severity_interval(WeatherType::fog, SeverityLevel::moderate) ==
          std::pair<double, double>{0.08, 0.14});
    CHECK(severity_interval(WeatherType::fog, SeverityLevel::heavy) ==
          std::pair<double, double>{0.18, 0.25});
    CHECK(severity_interval(WeatherType::rain, SeverityLevel::light) ==
          std::pair<double, double>{1.0, 1.5});
    CHECK(severity_interval(WeatherType::rain, SeverityLevel::moderate) ==
          std::pair<double, double>{1.8, 2.4});
    CHECK(severity_interval(WeatherType::rain, SeverityLevel::heavy) ==
          std::pair<double, double>{2.6, 3.0});
}

TEST_CASE("severity sampling stays inside the level interval and is seed-stable") {
    for (int seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const SnowParams sp = sample_snow_params(SeverityLevel::light, rng);
        CHECK(sp.rate_mm_h >= 0.5);
        CHECK(sp.rate_mm_h <= 1.0);
        const FogParams fp = sample_fog_params(SeverityLevel::heavy, rng);
        CHECK(fp.beta >= 0.18);
        CHECK(fp.beta <= 0.25);
        const RainParams rp = sample_rain_params(SeverityLevel::moderate, rng);
        CHECK(rp.rate_mm_h >= 1.8);
        CHECK(rp.rate_mm_h <= 2.4);
    }
    Rng a(99), b(99);
    CHECK(sample_snow_params(SeverityLevel::heavy, a).rate_mm_h ==
          sample_snow_params(SeverityLevel::heavy, b).rate_mm_h);
}

TEST_CASE("name/parse round trips and sensor presets") {
    for (const auto w : {WeatherType::snow, WeatherType::fog, WeatherType::rain}) {
        CHECK(parse_weather(weather_name(w)) == w);
    }
    for (const auto l : {SeverityLevel::light, SeverityLevel::moderate, SeverityLevel::heavy}) {
        CHECK(parse_level(level_name(l)) == l);
    }
    CHECK_THROWS_AS(parse_weather("hail"), InvalidArgument);

    const SensorModel hdl = sensor_preset("hdl64-like");
    CHECK(hdl.r_max == 120.0);
    const SensorModel vlp = sensor_preset("vlp32-like");
    CHECK(vlp.r_max == 100.0);
    CHECK_THROWS_AS(sensor_preset("os1"), InvalidArgument);
    CHECK(hdl.beam_diameter(0.0) == doctest::Approx(0.006));
    CHECK(hdl.beam_diameter(100.0) == doctest::Approx(0.306));
}

TEST_CASE("fog attenuation follows the sampled backscattering coefficient") {
    const FogParams p = fog_params_from_beta(0.2);
    CHECK(p.beta == 0.2);
    CHECK(p.alpha == doctest::Approx(0.1));
    CHECK(p.beta0 == doctest::Approx(0.15));
    CHECK_THROWS_AS(fog_params_from_beta(-0.1), InvalidArgument);
}

TEST_CASE("rain extinction closed form and quadrature oracle") {
    RainParams p;
    p.rate_mm_h = 1.0;
    CHECK(rain_lambda(p) == doctest::Approx(4.1));
    CHECK(rain_extinction(p) == doctest::Approx(3.65e-4).epsilon(0.01));

    p.rate_mm_h = 0.0;
    CHECK(rain_extinction(p) == 0.0);

    // Numeric quadrature of (pi/4) q_e N0 D^2 exp(-Lambda D) over [0, 8 mm].
    p.rate_mm_h = 2.3;
    const double lambda = rain_lambda(p);
    const std::size_t steps = 200000;
    const double h = 8.0 / double(steps);
    double integral = 0.0;
    for (std::size_t j = 0; j <= steps; ++j) {
        const double d = j * h;
        const double f = d * d * std::exp(-lambda * d);
        integral += (j == 0 || j == steps) ? 0.5 * f : f;
    }
    integral *= h;
    const double want =
        3.14159265358979323846 / 4.0 * p.q_e * p.n0_per_m3_mm * integral * 1e-6;
    CHECK(rain_extinction(p) == doctest::Approx(want).epsilon(0.001));
}

TEST_CASE("zero-rate weather is a bit-exact identity") {
    Rng scene_rng(201);
    const PointCloud pc = weather_scene(500, scene_rng);
    const LabelSet labels = testutil::zero_labels(500);
    const SensorModel sensor = sensor_preset("hdl64-like");

    Rng r1(1), r2(2), r3(3);
    const SimResult snow = simulate_snow(pc, labels, SnowParams{0.0}, sensor, r1);
    CHECK(identical(snow.cloud, pc));
    CHECK(snow.relocated == 0);
    CHECK(count_code(snow.labels, kSnowCode) == 0);

    const SimResult fog = simulate_fog(pc, labels, fog_params_from_beta(0.0), sensor, r2);
    CHECK(identical(fog.cloud, pc));
    CHECK(fog.relocated == 0);

    RainParams rp;
    rp.rate_mm_h = 0.0;
    const SimResult rain = simulate_rain(pc, labels, rp, sensor, r3);
    CHECK(identical(rain.cloud, pc));
    CHECK(rain.relocated == 0);
}

TEST_CASE("fog hard branch reproduces the two-way attenuation value") {
    PointCloud pc;
    pc.resize(1);
    pc.x[0] = 10.0;
    pc.y[0] = 0.0;
    pc.z[0] = 0.0;
    pc.intensity[0] = 1.0;
    pc.range[0] = 10.0;
    FogParams p;
    p.beta = 0.0;  // no soft response, pure attenuation
    p.alpha = 0.1;
    Rng rng(5);
    const SimResult out = simulate_fog(pc, testutil::zero_labels(1), p,
                                       sensor_preset("hdl64-like"), rng);
    CHECK(out.cloud.intensity[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
    CHECK(out.cloud.x[0] == 10.0);
    CHECK(out.relocated == 0);
}

TEST_CASE("simulators preserve count and order; relocated points shrink in range") {
    Rng scene_rng(202);
    const PointCloud pc = weather_scene(3000, scene_rng);
    LabelSet labels = testutil::zero_labels(3000);
    for (std::size_t i = 0; i < labels.size(); ++i) labels.codes[i] = 40 + (i % 5);
    const SensorModel sensor = sensor_preset("hdl64-like");

    struct Case {
        const char* name;
        SimResult result;
        std::uint16_t code;
    };
    Rng r1(11), r2(12), r3(13);
    RainParams rp;
    rp.rate_mm_h = 3.0;
    std::vector<Case> cases;
    cases.push_back({"snow", simulate_snow(pc, labels, SnowParams{3.0}, sensor, r1), kSnowCode});
    cases.push_back({"fog", simulate_fog(pc, labels, fog_params_from_beta(0.25), sensor, r2),
                     kFogCode});
    cases.push_back({"rain", simulate_rain(pc, labels, rp, sensor, r3), kRainCode});

    for (const auto& c : cases) {
        INFO(c.name);
        REQUIRE(c.result.cloud.size() == pc.size());
        REQUIRE(c.result.labels.size() == pc.size());
        std::size_t labeled = 0;
        for (std::size_t i = 0; i < pc.size(); ++i) {
            if (c.result.labels.codes[i] == c.code) {
                ++labeled;
                CHECK(c.result.cloud.range[i] < pc.range[i]);
                // Relocation preserves the beam direction: position stays a
                // positive multiple of the source position.
                const double scale = c.result.cloud.range[i] / pc.range[i];
                CHECK(c.result.cloud.x[i] == doctest::Approx(pc.x[i] * scale).epsilon(1e-9));
                CHECK(c.result.cloud.y[i] == doctest::Approx(pc.y[i] * scale).epsilon(1e-9));
                CHECK(c.result.cloud.z[i] == doctest::Approx(pc.z[i] * scale).epsilon(1e-9));
            } else {
                // Untouched points keep their semantic code and position.
                CHECK(c.result.labels.codes[i] == labels.codes[i]);
                CHECK(c.result.cloud.x[i] == pc.x[i]);
            }
        }
        CHECK(labeled == c.result.relocated);
        CHECK(labeled > 0);  // heavy settings must corrupt something
    }
}

TEST_CASE("simulation is bit-identical under the same seed") {
    Rng scene_rng(203);
    const PointCloud pc = weather_scene(1000, scene_rng);
    const LabelSet labels = testutil::zero_labels(1000);
    const SensorModel sensor = sensor_preset("vlp32-like");

    Rng a(777), b(777);
    const SimResult ra = simulate_snow(pc, labels, SnowParams{2.0}, sensor, a);
    const SimResult rb = simulate_snow(pc, labels, SnowParams{2.0}, sensor, b);
    CHECK(ra.cloud.x == rb.cloud.x);
    CHECK(ra.cloud.intensity == rb.cloud.intensity);
    CHECK(ra.labels.codes == rb.labels.codes);
    CHECK(ra.relocated == rb.relocated);

    Rng c(778);
    const SimResult rc = simulate_snow(pc, labels, SnowParams{2.0}, sensor, c);
    CHECK(ra.cloud.x != rc.cloud.x);  // different stream, different field
}

TEST_CASE("rain relocation is exactly the gamma scaling with gamma < 1") {
    Rng scene_rng(204);
    const PointCloud pc = weather_scene(2000, scene_rng);
    const LabelSet labels = testutil::zero_labels(2000);
    RainParams rp;
    rp.rate_mm_h = 3.0;
    Rng rng(17);
    const SimResult out = simulate_rain(pc, labels, rp, sensor_preset("hdl64-like"), rng);
    for (std::size_t i = 0; i < pc.size(); ++i) {
        if (out.labels.codes[i] == kRainCode) {
            const double gamma = out.cloud.range[i] / pc.range[i];
            CHECK(gamma > 0.0);
            CHECK(gamma < 1.0);
        } else {
            // Non-relocated points only lose intensity to attenuation.
            CHECK(out.cloud.range[i] == pc.range[i]);
            CHECK(out.cloud.intensity[i] <= pc.intensity[i]);
        }
    }
}

TEST_CASE("weather point counts grow with severity (quick 5-seed check)") {
    Rng scene_rng(205);
    const PointCloud pc = weather_scene(4000, scene_rng);
    const LabelSet labels = testutil::zero_labels(4000);
    const SensorModel sensor = sensor_preset("hdl64-like");

    auto median_count = [&](auto&& run) {
        std::vector<std::size_t> counts;
        for (int seed = 0; seed < 5; ++seed) {
            Rng rng(1000 + seed);
            counts.push_back(run(rng));
        }
        std::sort(counts.begin(), counts.end());
        return counts[counts.size() / 2];
    };

    const std::size_t snow_light = median_count([&](Rng& rng) {
        return simulate_snow(pc, labels, SnowParams{0.5}, sensor, rng).relocated;
    });
    const std::size_t snow_heavy = median_count([&](Rng& rng) {
        return simulate_snow(pc, labels, SnowParams{3.0}, sensor, rng).relocated;
    });
    CHECK(snow_heavy > snow_light);

    RainParams light_rain, heavy_rain;
    light_rain.rate_mm_h = 1.0;
    heavy_rain.rate_mm_h = 3.0;
    const std::size_t rain_light = median_count([&](Rng& rng) {
        return simulate_rain(pc, labels, light_rain, sensor, rng).relocated;
    });
    const std::size_t rain_heavy = median_count([&](Rng& rng) {
        return simulate_rain(pc, labels, heavy_rain, sensor, rng).relocated;
    });
    CHECK(rain_heavy > rain_light);

    Rng fog_rng(0);
    const std::size_t fog_light =
        simulate_fog(pc, labels, fog_params_from_beta(0.01), sensor, fog_rng).relocated;
    const std::size_t fog_heavy =
        simulate_fog(pc, labels, fog_params_from_beta(0.25), sensor, fog_rng).relocated;
    CHECK(fog_heavy > fog_light);
}
