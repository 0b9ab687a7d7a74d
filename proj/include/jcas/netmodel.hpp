#pragma once

#include <string>

namespace jcas {

inline constexpr double kSpeedOfLight = 299792458.0;

double db_to_lin(double db);
double lin_to_db(double lin);

// Free-space intercept (c0 / (4π f_c))^2.
double friis_intercept(double f_c);

struct PathLossParams {
    double K_L = 0.0;
    double K_N = 0.0;
    double alpha_L = 2.0;
    double alpha_N = 3.2;
    double gamma_L = 0.0;
    double gamma_N = 0.0;
};

struct AntennaConfig {
    double G_B_tx = 1.0;
    double G_B_rx = 1.0;
    double G_U_rx = 1.0;
    double theta_B_tx = 0.0;  // radians
    double theta_B_rx = 0.0;
    double theta_U_rx = 0.0;
    double xi_B_tx = 1.0;  // front-to-back ratios, linear, in (0, 1]
    double xi_B_rx = 1.0;
    double xi_U_rx = 1.0;
};

struct FadingOrders {
    int N_L = 1;
    int N_N = 1;
};

// Constant in front of the two-way return gain r^{-2α_L} e^{-2γ_L r}.
enum class ReturnIntercept { kl_over_4pi, kl_squared_over_4pi };

struct NetworkParams {
    double lambda_B = 0.0;  // 1/m^2
    double beta = 0.0;      // blockage, 1/m
    PathLossParams pathloss;
    AntennaConfig antenna;
    FadingOrders fading;
    double tx_power = 1.0;     // linear, mW
    double noise_power = 0.0;  // linear, mW
    double f_c = 75e9;
    ReturnIntercept return_intercept = ReturnIntercept::kl_over_4pi;

    // Noise normalised by transmit power and the main-lobe gains of the link.
    double sigma_N() const { return noise_power / tx_power; }
    double nu_com() const { return sigma_N() / (antenna.G_B_tx * antenna.G_U_rx); }
    double nu_rad() const { return sigma_N() / (antenna.G_B_tx * antenna.G_B_rx); }
    double cell_radius() const;
    void set_cell_radius(double r_c);

    // Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

// Unclamped gains; the window construction needs these to locate g = 1.
double raw_g_los(const PathLossParams& pl, double r);
double raw_g_nlos(const PathLossParams& pl, double r);
double raw_g_ret(const NetworkParams& p, double r);

// Gains with the unit clamp: anything that would exceed 1 is zero.
double g_los(const PathLossParams& pl, double r);
double g_nlos(const PathLossParams& pl, double r);
double g_ret(const NetworkParams& p, double r);

double p_los(double beta, double r);

// Two-level sectored gain: 1 with probability p_main, else side.
struct SectorGainPmf {
    double p_main;
    double side;

    double mean() const { return p_main + (1.0 - p_main) * side; }
};

SectorGainPmf sector_pmf(double beamwidth, double front_to_back);

struct BeamGainPmfs {
    SectorGainPmf B;    // interferer transmit gain towards the receiver
    SectorGainPmf Z_U;  // UE receive gain towards an interferer
};

BeamGainPmfs beam_gain_pmfs(const AntennaConfig& a);

// The reference mmWave deployment: 75 GHz carrier, 100 m cell radius,
// 140 m mean blockage distance.
NetworkParams reference_params();

}  // namespace jcas
