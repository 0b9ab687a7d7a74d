#pragma once

#include <array>
#include <utility>
#include <vector>

namespace jcas {

struct Numerology {
    double delta_f = 120e3;  // subcarrier spacing, Hz
    double T_g = 570e-9;     // guard interval, s
    double f_c = 75e9;       // carrier, Hz

    double T_s() const { return 1.0 / delta_f; }
    double T_MC() const { return T_s() + T_g; }
    void validate() const;
};

struct FisherConstants {
    double k1;  // delay sensitivity per subcarrier index
    double k2;  // Doppler sensitivity per symbol index
};

FisherConstants fisher_constants(const Numerology& num);

using Mat2 = std::array<std::array<double, 2>, 2>;

// Gaussian prior covariance on (range, velocity) with its PSD square root.
struct PriorCov {
    Mat2 Q;
    Mat2 sqrtQ;

    static PriorCov from_matrix(const Mat2& q);
    static PriorCov identity() { return from_matrix({{{1.0, 0.0}, {0.0, 1.0}}}); }
};

struct ResourceElement {
    int m;  // symbol index
    int n;  // subcarrier index
};

struct ResourceGrid {
    int N_s = 0;
    int N_c = 0;
    std::vector<ResourceElement> elements;
};

struct FisherWeights {
    double G;
    std::vector<double> eta;  // aligned with ResourceGrid::elements
};

// Per-element Fisher trace 8π²‖Q^{1/2}(k1 n, -k2 m)‖²; G is their sum and η
// the normalised shares.
FisherWeights fisher_weights(const ResourceGrid& grid, const PriorCov& prior, const FisherConstants& k);

// Fisher information of the grid when element i sees SINR sinr[i]. Used to
// check the rate sandwich against the exact log-determinant.
Mat2 fisher_matrix(const ResourceGrid& grid, const std::vector<double>& sinr, const FisherConstants& k);

// Weights collapsed to (slot, subcarrier), keeping only slots and
// subcarriers that carry weight. theta is row-major T x N.
struct ReducedAllocation {
    std::vector<int> slots;        // original slot index of each row
    std::vector<int> subcarriers;  // original subcarrier index of each column
    std::vector<double> theta;
    std::vector<double> w;  // row sums
    std::vector<double> q;  // column sums
    double G = 0.0;

    int T() const { return static_cast<int>(w.size()); }
    int N() const { return static_cast<int>(q.size()); }
    double at(int t, int n) const { return theta[static_cast<std::size_t>(t) * q.size() + n]; }

    // One slot, one subcarrier, unit weight.
    static ReducedAllocation single_element(double G);
};

ReducedAllocation reduce_allocation(const ResourceGrid& grid, const FisherWeights& fw, int slot_len);

struct RateSandwich {
    double lb;
    double ub;
};

// Bounds in bits on the CRLB-based rate for weighted SINR x.
RateSandwich est_rate_sandwich(double G, double x);

struct SensingTargets {
    double delta_r = 1.0;    // range resolution, m
    double delta_v = 1.33;   // velocity resolution, m/s
    double r_max = 300.0;    // unambiguous range, m
    double v_max = 200.0 / 3.6;  // unambiguous velocity, m/s
};

// A comb: every stride_s-th symbol and every stride_c-th subcarrier inside an
// N_s x N_c block.
struct CombSpec {
    int stride_s;
    int stride_c;
    int N_s;
    int N_c;

    ResourceGrid grid() const;
};

// Comb from the OFDM radar ambiguity and resolution relations:
// stride_c = floor(c0 / (2 Δf r_max)), stride_s = floor(c0 / (4 f_c T_MC v_max)),
// N_c = ceil(c0 / (2 Δf Δr)), N_s = ceil(c0 / (2 f_c T_MC Δv)).
CombSpec comb_allocation(const SensingTargets& t, const Numerology& num);

// The reference numerology-3 comb: strides (3, 14) over 264 symbols and the
// full 3168-subcarrier band.
CombSpec reference_comb();

// Reference comb with its subcarrier stride rescaled for a new unambiguous
// range (the stride is inversely proportional to r_max).
CombSpec rescaled_reference_comb(double r_max, double r_max_ref = 300.0);

}  // namespace jcas
