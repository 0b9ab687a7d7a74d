#include "jcas/netmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "jcas/numerics.hpp"

namespace jcas {

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

double friis_intercept(double f_c) {
    const double a = kSpeedOfLight / (4.0 * kPi * f_c);
    return a * a;
}

double NetworkParams::cell_radius() const { return std::sqrt(1.0 / (kPi * lambda_B)); }
void NetworkParams::set_cell_radius(double r_c) { lambda_B = 1.0 / (kPi * r_c * r_c); }

void NetworkParams::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("invalid parameter: ") + what);
    };
    need(lambda_B > 0.0 && std::isfinite(lambda_B), "lambda_B must be positive");
    need(beta > 0.0, "beta must be positive");
    const auto& pl = pathloss;
    need(pl.K_L > 0.0 && pl.K_N > 0.0, "pathloss intercepts must be positive");
    need(pl.K_N <= pl.K_L, "K_N must not exceed K_L");
    need(pl.alpha_L > 0.0 && pl.alpha_N >= pl.alpha_L, "need 0 < alpha_L <= alpha_N");
    need(pl.gamma_L >= 0.0 && pl.gamma_N >= 0.0, "absorption must be non-negative");
    const auto& a = antenna;
    need(a.G_B_tx > 0.0 && a.G_B_rx > 0.0 && a.G_U_rx > 0.0, "antenna gains must be positive");
    for (double th : {a.theta_B_tx, a.theta_B_rx, a.theta_U_rx})
        need(th > 0.0 && th <= 2.0 * kPi, "beamwidth must lie in (0, 2pi]");
    for (double xi : {a.xi_B_tx, a.xi_B_rx, a.xi_U_rx})
        need(xi > 0.0 && xi <= 1.0, "front-to-back ratio must lie in (0, 1]");
    need(fading.N_L >= 1 && fading.N_N >= 1, "fading orders must be >= 1");
    need(tx_power > 0.0 && noise_power > 0.0, "powers must be positive");
    need(f_c > 0.0, "carrier frequency must be positive");
}

namespace {

void check_distance(double r) {
    if (!(r > 0.0)) throw std::domain_error("pathloss evaluated at non-positive distance");
}

double clamp_unit(double g) { return g > 1.0 ? 0.0 : g; }

}  // namespace

double raw_g_los(const PathLossParams& pl, double r) {
    check_distance(r);
    return pl.K_L * std::pow(r, -pl.alpha_L) * std::exp(-pl.gamma_L * r);
}

double raw_g_nlos(const PathLossParams& pl, double r) {
    check_distance(r);
    return pl.K_N * std::pow(r, -pl.alpha_N) * std::exp(-pl.gamma_N * r);
}

double raw_g_ret(const NetworkParams& p, double r) {
    check_distance(r);
    const auto& pl = p.pathloss;
    const double k = p.return_intercept == ReturnIntercept::kl_over_4pi ? pl.K_L : pl.K_L * pl.K_L;
    return k / (4.0 * kPi) * std::pow(r, -2.0 * pl.alpha_L) * std::exp(-2.0 * pl.gamma_L * r);
}

double g_los(const PathLossParams& pl, double r) { return clamp_unit(raw_g_los(pl, r)); }
double g_nlos(const PathLossParams& pl, double r) { return clamp_unit(raw_g_nlos(pl, r)); }
double g_ret(const NetworkParams& p, double r) { return clamp_unit(raw_g_ret(p, r)); }

double p_los(double beta, double r) { return std::exp(-beta * r); }

SectorGainPmf sector_pmf(double beamwidth, double front_to_back) {
    if (!(beamwidth > 0.0 && beamwidth <= 2.0 * kPi)) throw std::invalid_argument("sector_pmf: beamwidth");
    if (!(front_to_back > 0.0 && front_to_back <= 1.0)) throw std::invalid_argument("sector_pmf: ratio");
    return {beamwidth / (2.0 * kPi), front_to_back};
}

BeamGainPmfs beam_gain_pmfs(const AntennaConfig& a) {
    return {sector_pmf(a.theta_B_tx, a.xi_B_tx), sector_pmf(a.theta_U_rx, a.xi_U_rx)};
}

NetworkParams reference_params() {
    NetworkParams p;
    const double deg = kPi / 180.0;
    p.f_c = 75e9;
    p.pathloss.K_L = db_to_lin(-75.96);
    p.pathloss.K_N = db_to_lin(-90.96);
    p.pathloss.alpha_L = 2.0;
    p.pathloss.alpha_N = 3.2;
    p.pathloss.gamma_L = 5e-6;
    p.pathloss.gamma_N = 5e-3;
    p.antenna.theta_B_tx = 5.0 * deg;
    p.antenna.theta_B_rx = 5.0 * deg;
    p.antenna.theta_U_rx = 30.0 * deg;
    p.antenna.xi_B_tx = db_to_lin(-35.0);
    p.antenna.xi_B_rx = db_to_lin(-20.0);
    p.antenna.xi_U_rx = db_to_lin(-15.0);
    p.antenna.G_B_tx = db_to_lin(31.0);
    p.antenna.G_B_rx = db_to_lin(19.8);
    p.antenna.G_U_rx = db_to_lin(13.2);
    p.tx_power = db_to_lin(15.0);
    p.noise_power = db_to_lin(-123.2);
    p.fading = {3, 2};
    p.beta = 1.0 / 140.0;
    p.set_cell_radius(100.0);
    return p;
}

}  // namespace jcas
