#include "lidarwx/weather.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace lidarwx {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Snow microphysics: flake number density grows linearly with the snowfall
// rate; flake sizes follow a Gunn-Marshall exponential size distribution.
constexpr double kSnowDensityPerRate = 150.0;  // flakes per m^3 per mm/h
constexpr double kSnowLambdaCoeff = 2.55;      // 1/mm
constexpr double kSnowLambdaExponent = -0.48;
constexpr double kSnowDTruncMm = 10.0;
constexpr double kSnowReflectivity = 0.2;

constexpr double kRainReflectivity = 0.05;

// Fog attenuation scales with the sampled backscattering coefficient.
constexpr double kFogAlphaPerBeta = 0.5;

}  // namespace

SensorModel sensor_preset(const std::string& name) {
    SensorModel m;
    if (name == "hdl64-like") {
        m.r_max = 120.0;
        return m;
    }
    if (name == "vlp32-like") {
        m.r_max = 100.0;
        return m;
    }
    throw InvalidArgument("unknown sensor preset: " + name);
}

WeatherType parse_weather(const std::string& name) {
    if (name == "snow") return WeatherType::snow;
    if (name == "fog") return WeatherType::fog;
    if (name == "rain") return WeatherType::rain;
    throw InvalidArgument("unknown weather type: " + name);
}

SeverityLevel parse_level(const std::string& name) {
    if (name == "light") return SeverityLevel::light;
    if (name == "moderate") return SeverityLevel::moderate;
    if (name == "heavy") return SeverityLevel::heavy;
    throw InvalidArgument("unknown severity level: " + name);
}

std::string weather_name(WeatherType w) {
    switch (w) {
        case WeatherType::snow: return "snow";
        case WeatherType::fog: return "fog";
        case WeatherType::rain: return "rain";
    }
    return "?";
}

std::string level_name(SeverityLevel l) {
    switch (l) {
        case SeverityLevel::light: return "light";
        case SeverityLevel::moderate: return "moderate";
        case SeverityLevel::heavy: return "heavy";
    }
    return "?";
}

std::pair<double, double> severity_interval(WeatherType weather, SeverityLevel level) {
    static constexpr std::array<std::array<std::pair<double, double>, 3>, 3> table = {{
        // snow: r_s mm/h
        {{{0.5, 1.0}, {1.5, 2.0}, {2.5, 3.0}}},
        // fog: beta
        {{{0.01, 0.05}, {0.08, 0.14}, {0.18, 0.25}}},
        // rain: r_r mm/h
        {{{1.0, 1.5}, {1.8, 2.4}, {2.6, 3.0}}},
    }};
    return table[static_cast<std::size_t>(weather)][static_cast<std::size_t>(level)];
}

FogParams fog_params_from_beta(double beta) {
    require(beta >= 0.0, "fog_params_from_beta: beta must be non-negative");
    FogParams p;
    p.beta = beta;
    p.alpha = kFogAlphaPerBeta * beta;
    return p;
}

double rain_lambda(const RainParams& p) {
    require(p.rate_mm_h >= 0.0, "rain_lambda: rate must be non-negative");
    if (p.rate_mm_h == 0.0) return p.lambda_coeff;
    return p.lambda_coeff * std::pow(p.rate_mm_h, p.lambda_exponent);
}

double rain_extinction(const RainParams& p) {
    require(p.q_e > 0.0, "rain_extinction: q_e must be positive");
    if (p.rate_mm_h == 0.0) return 0.0;  // N0 density suppressed at zero rate
    const double lambda = rain_lambda(p);
    // Closed form of (pi/4) * q_e * N0 * integral D^2 exp(-Lambda D) dD,
    // with diameters in mm (hence the 1e-6 area conversion).
    return kPi / 4.0 * p.q_e * p.n0_per_m3_mm * (2.0 / (lambda * lambda * lambda)) * 1e-6;
}

SnowParams sample_snow_params(SeverityLevel level, Rng& rng) {
    const auto [lo, hi] = severity_interval(WeatherType::snow, level);
    return SnowParams{rng.uniform(lo, hi)};
}

FogParams sample_fog_params(SeverityLevel level, Rng& rng) {
    const auto [lo, hi] = severity_interval(WeatherType::fog, level);
    return fog_params_from_beta(rng.uniform(lo, hi));
}

RainParams sample_rain_params(SeverityLevel level, Rng& rng) {
    const auto [lo, hi] = severity_interval(WeatherType::rain, level);
    RainParams p;
    p.rate_mm_h = rng.uniform(lo, hi);
    return p;
}

namespace {

/// Airborne particle field along a beam: Poisson in space with density
/// `number_density`, exponential diameters with slope `lambda_mm`.
struct ParticleMedium {
    double number_density = 0.0;  // particles per m^3
    double lambda_mm = 1.0;       // size distribution slope, 1/mm
    double d_trunc_mm = 8.0;
    double alpha = 0.0;         // extinction inside the medium, 1/m
    double reflectivity = 0.2;  // particle backscatter efficiency
};

/// Smallest diameter (mm) a particle at range r needs for its return to
/// beat `hard_power`, the return of the hard target at range r0. The
/// particle return carries the inverse-square range advantage (r0/r)^2 over
/// the distant target. Infinity when even a beam-filling particle loses.
double dominating_diameter_mm(const ParticleMedium& medium, const SensorModel& sensor,
                              double r, double r0, double hard_power) {
    const double gain = (r0 / r) * (r0 / r);
    const double peak =
        sensor.i_max * medium.reflectivity * gain * std::exp(-2.0 * medium.alpha * r);
    if (hard_power >= peak) return std::numeric_limits<double>::infinity();
    return 1e3 * sensor.beam_diameter(r) * std::sqrt(hard_power / peak);
}

/// Rate (per meter) of beam-dominating particles at range r.
double dominator_rate(const ParticleMedium& medium, const SensorModel& sensor, double r,
                      double r0, double hard_power) {
    const double d_min = dominating_diameter_mm(medium, sensor, r, r0, hard_power);
    if (d_min > medium.d_trunc_mm) return 0.0;
    const double beam_d = sensor.beam_diameter(r);
    return medium.number_density * kPi / 4.0 * beam_d * beam_d *
           std::exp(-medium.lambda_mm * d_min);
}

constexpr int kBeamSlabs = 32;

struct Dominator {
    double range;
    double diameter_mm;
};

/// Samples the nearest particle along [0, r0] whose return dominates the
/// hard target, by inverting the cumulative dominator rate over midpoint
/// slabs. Consumes one Exp(1) draw, plus one exponential draw for the
/// diameter exceedance when a dominator exists.
std::optional<Dominator> nearest_dominator(const ParticleMedium& medium,
                                           const SensorModel& sensor, double r0,
                                           double hard_power, Rng& rng) {
    if (medium.number_density <= 0.0 || r0 <= 0.0) return std::nullopt;

    const double dr = r0 / kBeamSlabs;
    std::array<double, kBeamSlabs> rate;
    double total = 0.0;
    for (int j = 0; j < kBeamSlabs; ++j) {
        rate[j] = dominator_rate(medium, sensor, (j + 0.5) * dr, r0, hard_power);
        total += rate[j] * dr;
    }
    const double target = rng.exponential();
    if (target >= total) return std::nullopt;

    double cum = 0.0;
    double r_hit = r0;
    for (int j = 0; j < kBeamSlabs; ++j) {
        const double slab = rate[j] * dr;
        if (cum + slab >= target) {
            const double frac = slab > 0.0 ? (target - cum) / slab : 0.5;
            r_hit = (j + frac) * dr;
            break;
        }
        cum += slab;
    }
    r_hit = std::min(r_hit, 0.999 * r0);

    double d_min = dominating_diameter_mm(medium, sensor, r_hit, r0, hard_power);
    if (!std::isfinite(d_min)) d_min = 0.0;
    const double diameter =
        std::min(d_min + rng.exponential(medium.lambda_mm), medium.d_trunc_mm);
    return Dominator{r_hit, diameter};
}

SimResult copy_frame(const PointCloud& pc, const LabelSet& labels) {
    require(pc.size() == labels.size(), "simulator: cloud/label length mismatch");
    SimResult out;
    out.cloud = pc;
    out.labels = labels;
    return out;
}

double particle_return(const ParticleMedium& medium, const SensorModel& sensor, double r,
                       double r0, double diameter_mm) {
    const double ratio = diameter_mm * 1e-3 / sensor.beam_diameter(r);
    const double gain = (r0 / r) * (r0 / r);
    return sensor.i_max * medium.reflectivity *
           std::min(ratio * ratio * gain, 1.0) * std::exp(-2.0 * medium.alpha * r);
}

}  // namespace

SimResult simulate_snow(const PointCloud& pc, const LabelSet& labels, const SnowParams& p,
                        const SensorModel& sensor, Rng& rng) {
    require(p.rate_mm_h >= 0.0, "simulate_snow: rate must be non-negative");
    SimResult out = copy_frame(pc, labels);
    if (p.rate_mm_h == 0.0) return out;

    ParticleMedium medium;
    medium.number_density = kSnowDensityPerRate * p.rate_mm_h;
    medium.lambda_mm = kSnowLambdaCoeff * std::pow(p.rate_mm_h, kSnowLambdaExponent);
    medium.d_trunc_mm = kSnowDTruncMm;
    medium.reflectivity = kSnowReflectivity;

    const double pulse_offset = SensorModel::c * sensor.tau_h / 2.0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        const double r0 = pc.range[i];
        if (r0 <= 0.0) continue;
        const auto hit = nearest_dominator(medium, sensor, r0, pc.intensity[i], rng);
        if (!hit) continue;

        const double r_star = std::max(hit->range - pulse_offset, 0.05 * hit->range);
        const double scale = r_star / r0;
        const double flake = particle_return(medium, sensor, hit->range, r0, hit->diameter_mm);
        const double focal = 1.0 - r_star / sensor.r_max;
        double intensity = flake + sensor.i_max * sensor.f_s *
                                       (sensor.f_o - focal) * (sensor.f_o - focal);
        intensity = std::clamp(intensity, 0.0, sensor.i_max);

        out.cloud.x[i] = pc.x[i] * scale;
        out.cloud.y[i] = pc.y[i] * scale;
        out.cloud.z[i] = pc.z[i] * scale;
        out.cloud.range[i] = r_star;
        out.cloud.intensity[i] = intensity;
        out.labels.codes[i] = kSnowCode;
        ++out.relocated;
    }
    return out;
}

SimResult simulate_fog(const PointCloud& pc, const LabelSet& labels, const FogParams& p,
                       const SensorModel& sensor, Rng& rng) {
    require(p.beta >= 0.0 && p.alpha >= 0.0 && p.beta0 > 0.0,
            "simulate_fog: parameters must be non-negative (beta0 positive)");
    SimResult out = copy_frame(pc, labels);

    const double pulse_length = SensorModel::c * sensor.tau_h / 2.0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        const double r0 = pc.range[i];
        if (r0 <= 0.0) continue;
        const double i_hard = pc.intensity[i] * std::exp(-2.0 * p.alpha * r0);

        // Optimal scatter range: maximizer of r^2 exp(-2 alpha r), capped
        // below the target so relocations land strictly closer.
        const double r_scatter = p.alpha > 0.0 ? std::min(1.0 / p.alpha, 0.9 * r0) : 0.9 * r0;
        const double i_tmp = p.beta * std::exp(-2.0 * p.alpha * r_scatter) * pulse_length;
        const double i_soft = pc.intensity[i] * (r0 * r0 / p.beta0) * p.beta * i_tmp;

        if (i_soft > i_hard) {
            const double s = r_scatter / r0;
            const double jitter = rng.uniform(0.95, 1.05);
            const double scale = s * jitter;
            out.cloud.x[i] = pc.x[i] * scale;
            out.cloud.y[i] = pc.y[i] * scale;
            out.cloud.z[i] = pc.z[i] * scale;
            out.cloud.range[i] = r0 * scale;
            out.cloud.intensity[i] = std::min(i_soft, sensor.i_max);
            out.labels.codes[i] = kFogCode;
            ++out.relocated;
        } else {
            out.cloud.intensity[i] = i_hard;
        }
    }
    return out;
}

SimResult simulate_rain(const PointCloud& pc, const LabelSet& labels, const RainParams& p,
                        const SensorModel& sensor, Rng& rng) {
    require(p.rate_mm_h >= 0.0, "simulate_rain: rate must be non-negative");
    SimResult out = copy_frame(pc, labels);
    if (p.rate_mm_h == 0.0) return out;

    const double alpha = rain_extinction(p);
    const double lambda = rain_lambda(p);

    ParticleMedium medium;
    medium.number_density = p.n0_per_m3_mm / lambda;  // integral of N(D) over D
    medium.lambda_mm = lambda;
    medium.d_trunc_mm = p.d_trunc_mm;
    medium.alpha = alpha;
    medium.reflectivity = kRainReflectivity;

    for (std::size_t i = 0; i < pc.size(); ++i) {
        const double r0 = pc.range[i];
        if (r0 <= 0.0) continue;
        const double attenuation = std::exp(-2.0 * alpha * r0);
        const double i_hard = pc.intensity[i] * attenuation;
        const auto hit = nearest_dominator(medium, sensor, r0, i_hard, rng);
        if (!hit) {
            out.cloud.intensity[i] = i_hard;
            continue;
        }
        const double gamma = hit->range / r0;  // < 1 by construction
        const double beam_ratio = hit->diameter_mm * 1e-3 / sensor.beam_diameter(r0);
        double intensity = i_hard * std::min(beam_ratio * beam_ratio, 1.0);
        intensity = std::clamp(intensity, 0.0, sensor.i_max);

        out.cloud.x[i] = pc.x[i] * gamma;
        out.cloud.y[i] = pc.y[i] * gamma;
        out.cloud.z[i] = pc.z[i] * gamma;
        out.cloud.range[i] = r0 * gamma;
        out.cloud.intensity[i] = intensity;
        out.labels.codes[i] = kRainCode;
        ++out.relocated;
    }
    return out;
}

}  // namespace lidarwx
