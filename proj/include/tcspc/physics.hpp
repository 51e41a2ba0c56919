#pragma once

#include <span>
#include <vector>

// Closed-form photon statistics for a pulsed two-state (neutral/charged)
// emitter: Poissonian excitation probabilities, quantum-yield algebra,
// Auger-rate inversion and the general multiexciton g2(0).
//
// Units: rates in 1/ns, times in ns, intensities in counts/ms.

namespace tcspc {

struct ExcitationModel {
    double mean_excitations = 0.4;  // <N_eh> electron-hole pairs per pulse
};

// Quantum yields of the multiexciton ladder, q[0] = Q_1 (exciton or trion),
// q[1] = Q_2 ((charged) biexciton), higher orders optional.
struct YieldLadder {
    std::vector<double> q;
};

struct EmitterPhysics {
    double gamma_r = 1.0 / 65.0;  // radiative rate of the neutral exciton
    double gamma_a_minus = 0.0;   // Auger rate, energy to the extra electron
    double gamma_a_plus = 0.0;    // Auger rate, energy to a hole

    double tau_x_ns() const { return 1.0 / gamma_r; }
    // the trion radiates twice as fast as the exciton (statistical scaling)
    double trion_total_rate() const { return 2.0 * gamma_r + gamma_a_minus; }
    double tau_trion_ns() const { return 1.0 / trion_total_rate(); }
    double q_trion() const { return 2.0 * gamma_r / trion_total_rate(); }
    double biexciton_total_rate() const {
        return 4.0 * gamma_r + 2.0 * gamma_a_plus + 2.0 * gamma_a_minus;
    }
    double q_biexciton() const { return 4.0 * gamma_r / biexciton_total_rate(); }
};

// P(N_eh >= m) for N_eh ~ Poisson(mean); m = 0 returns exactly 1.
double p_at_least(int m, double mean);

// 2 P(>=2) / P(>=1)^2, the pump-strength weight relating g2(0) to Q_2/Q_1.
// Tends to 1 as mean -> 0; mean = 0 itself is rejected (0/0).
double poisson_weight(double mean);

// Value plus a model-consistency verdict. Unphysical results (QY > 1,
// negative rates) are returned as-is with consistent = false, never clamped.
struct Flagged {
    double value = 0.0;
    bool consistent = true;
};

// Q_trion = 2 tau_trion / tau_x; inconsistent if > 1.
Flagged trion_qy(double tau_x_ns, double tau_trion_ns);

// Inverts g2(0) = poisson_weight(mean) * Q_2 / Q_1 for Q_2.
Flagged biexciton_qy_from_g2(double g2_zero, double q_exciton, double mean);

struct AugerRates {
    double gamma_a_minus = 0.0;
    double gamma_a_plus = 0.0;
    bool consistent = true;  // false when the inferred gamma_a_plus < 0
};

// gamma_a_minus from the trion QY, gamma_a_plus from the biexciton QY.
AugerRates auger_rates(double gamma_r, double q_trion, double q_biexciton);

// Full double-sum g2(0) over the yield ladder,
//   2 sum_{m>1} P(>=m) sum_{m'<m} Q_m Q_m'  /  ( sum_{m>=1} P(>=m) Q_m )^2,
// truncated at the ladder length and where P(>=m) < 1e-12 P(>=1).
double general_g2_zero(const ExcitationModel& excitation, const YieldLadder& ladder);

// One flickering component: fraction of time spent in the state, its mean
// detected intensity, its g2(0) and its single-exciton QY.
struct MixtureState {
    double occupancy = 1.0;
    double mean_intensity = 0.0;  // counts/ms
    double g2_zero = 0.0;
    double q1 = 1.0;
};

// Time-averaged g2(0) of a slow mixture of internally Poissonian states:
//   sum w I^2 g2 / (sum w I)^2.
double mixed_g2_zero(std::span<const MixtureState> states);

}  // namespace tcspc
