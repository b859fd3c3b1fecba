#pragma once

#include <optional>
#include <string>
#include <utility>

#include "lidarwx/rng.hpp"
#include "lidarwx/types.hpp"

namespace lidarwx {

/// LiDAR physical constants used by the weather simulators.
struct SensorModel {
    double tau_h = 6e-9;            // half-power pulse width, seconds
    double r_max = 120.0;           // furthest detectable range, meters
    double f_s = 0.0077;            // focal slope
    double f_o = 0.106;             // focal offset
    double i_max = 255.0;           // maximum intensity in file units
    double beam_divergence = 3e-3;  // radians
    double exit_diameter = 0.006;   // beam diameter at the emitter, meters

    static constexpr double c = 2.99792458e8;  // speed of light, m/s

    /// Beam diameter at range r.
    double beam_diameter(double r) const { return exit_diameter + beam_divergence * r; }
};

/// Named presets ("hdl64-like", "vlp32-like").
SensorModel sensor_preset(const std::string& name);

enum class WeatherType { snow, fog, rain };
enum class SeverityLevel { light, moderate, heavy };

WeatherType parse_weather(const std::string& name);
SeverityLevel parse_level(const std::string& name);
std::string weather_name(WeatherType w);
std::string level_name(SeverityLevel l);

/// Closed parameter interval for a (weather, level) pair:
/// snow/rain rates in mm/h, fog backscattering coefficient beta.
std::pair<double, double> severity_interval(WeatherType weather, SeverityLevel level);

struct SnowParams {
    double rate_mm_h = 0.0;  // snowfall rate r_s
};

struct FogParams {
    double beta = 0.0;    // backscattering coefficient
    double alpha = 0.0;   // attenuation coefficient, 1/m
    double beta0 = 0.15;  // differential reflectivity of the target
};

struct RainParams {
    double rate_mm_h = 0.0;        // rain rate r_r
    double q_e = 2.0;              // extinction efficiency
    double n0_per_m3_mm = 8000.0;  // Marshall-Palmer intercept N0
    double lambda_coeff = 4.1;     // Lambda = coeff * rate^exponent, 1/mm
    double lambda_exponent = -0.21;
    double d_trunc_mm = 8.0;  // drop diameter truncation for quadrature
};

/// Fog attenuation derived from the sampled backscattering coefficient.
FogParams fog_params_from_beta(double beta);

/// Marshall-Palmer slope Lambda(r_r) in 1/mm.
double rain_lambda(const RainParams& p);

/// Extinction alpha = (pi/4) * q_e * N0 * (2 / Lambda^3) * 1e-6 in 1/m;
/// zero at zero rate.
double rain_extinction(const RainParams& p);

/// Uniform draws from the Table-II interval of the requested level.
SnowParams sample_snow_params(SeverityLevel level, Rng& rng);
FogParams sample_fog_params(SeverityLevel level, Rng& rng);
RainParams sample_rain_params(SeverityLevel level, Rng& rng);

/// All simulators preserve point count and order, are pure given
/// (input, params, seed), and mark relocated points with the weather code
/// (110/111/112). Relocated points always end up strictly closer to the
/// sensor than their source.
struct SimResult {
    PointCloud cloud;
    LabelSet labels;
    std::size_t relocated = 0;
};

SimResult simulate_snow(const PointCloud& pc, const LabelSet& labels, const SnowParams& p,
                        const SensorModel& sensor, Rng& rng);
SimResult simulate_fog(const PointCloud& pc, const LabelSet& labels, const FogParams& p,
                       const SensorModel& sensor, Rng& rng);
SimResult simulate_rain(const PointCloud& pc, const LabelSet& labels, const RainParams& p,
                        const SensorModel& sensor, Rng& rng);

}  // namespace lidarwx
