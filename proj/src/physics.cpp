#include "tcspc/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace tcspc {

double p_at_least(int m, double mean) {
    if (m < 0) throw std::invalid_argument("p_at_least: m must be non-negative");
    if (mean < 0.0) throw std::invalid_argument("p_at_least: mean must be non-negative");
    if (m == 0) return 1.0;
    // 1 - cumulative sum of the pmf up to m-1
    double cum = 0.0;
    double term = std::exp(-mean);
    for (int k = 0; k < m; ++k) {
        if (k > 0) term *= mean / k;
        cum += term;
    }
    return 1.0 - cum;
}

double poisson_weight(double mean) {
    if (mean <= 0.0)
        throw std::invalid_argument("poisson_weight: mean must be > 0 (the mean -> 0 limit is 1)");
    const double p1 = p_at_least(1, mean);
    return 2.0 * p_at_least(2, mean) / (p1 * p1);
}

Flagged trion_qy(double tau_x_ns, double tau_trion_ns) {
    if (tau_x_ns <= 0.0 || tau_trion_ns <= 0.0)
        throw std::invalid_argument("trion_qy: lifetimes must be positive");
    const double q = 2.0 * tau_trion_ns / tau_x_ns;
    return {q, q <= 1.0 + 1e-12};
}

Flagged biexciton_qy_from_g2(double g2_zero, double q_exciton, double mean) {
    if (g2_zero < 0.0) throw std::invalid_argument("biexciton_qy_from_g2: g2_zero must be >= 0");
    if (q_exciton <= 0.0 || q_exciton > 1.0)
        throw std::invalid_argument("biexciton_qy_from_g2: q_exciton must be in (0, 1]");
    const double q = g2_zero * q_exciton / poisson_weight(mean);
    return {q, q <= 1.0 + 1e-12};
}

AugerRates auger_rates(double gamma_r, double q_trion, double q_biexciton) {
    if (gamma_r <= 0.0) throw std::invalid_argument("auger_rates: gamma_r must be positive");
    if (q_trion <= 0.0 || q_biexciton <= 0.0)
        throw std::invalid_argument("auger_rates: quantum yields must be positive");
    const double ga_minus = 2.0 * gamma_r * (1.0 / q_trion - 1.0);
    const double ga_plus = 2.0 * gamma_r * (1.0 / q_biexciton - 1.0) - ga_minus;
    return {ga_minus, ga_plus, ga_plus >= -1e-12};
}

double general_g2_zero(const ExcitationModel& excitation, const YieldLadder& ladder) {
    if (ladder.q.empty()) throw std::invalid_argument("general_g2_zero: empty yield ladder");
    if (ladder.q.front() <= 0.0) throw std::invalid_argument("general_g2_zero: Q_1 must be > 0");

    const double mean = excitation.mean_excitations;
    const double p1 = p_at_least(1, mean);
    double numerator = 0.0;
    double denominator = 0.0;
    double inner = 0.0;  // running sum_{m'<m} Q_m'
    const int order = static_cast<int>(ladder.q.size());
    for (int m = 1; m <= order; ++m) {
        const double pm = p_at_least(m, mean);
        if (pm < 1e-12 * p1) break;
        const double qm = ladder.q[m - 1];
        denominator += pm * qm;
        if (m > 1) numerator += pm * qm * inner;
        inner += qm;
    }
    if (denominator <= 0.0) throw std::invalid_argument("general_g2_zero: zero mean emission");
    return 2.0 * numerator / (denominator * denominator);
}

double mixed_g2_zero(std::span<const MixtureState> states) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& s : states) {
        if (s.occupancy < 0.0 || s.mean_intensity < 0.0)
            throw std::invalid_argument("mixed_g2_zero: negative occupancy or intensity");
        num += s.occupancy * s.mean_intensity * s.mean_intensity * s.g2_zero;
        den += s.occupancy * s.mean_intensity;
    }
    if (den <= 0.0) throw std::invalid_argument("mixed_g2_zero: all intensities are zero");
    return num / (den * den);
}

}  // namespace tcspc
