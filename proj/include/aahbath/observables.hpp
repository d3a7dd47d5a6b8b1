// observables.hpp — derived quantities: revival probability, IPR, chain
// position variance, wavefront first peaks with velocity fit, bath variance
// with its diffusive-exponent fit, and decay-shape classification.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "aahbath/bath_field.hpp"
#include "aahbath/propagator.hpp"

namespace aahbath::obs {

using prop::Trajectory;

struct FitResult {
    double slope = 0.0;       // exponent for log-log fits, slope for linear fits
    double intercept = 0.0;
    double r_squared = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
};

// least squares y = a x + b over the given samples
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// |alpha_{n0}(t_i)|^2 per step
Eigen::VectorXd revival_probability(const Trajectory& traj, int n0);

// sum_n |alpha_n(t)|^4 per step, not renormalized by the surviving norm
Eigen::VectorXd ipr(const Trajectory& traj);
// diagnostic variant normalized by the surviving probability
Eigen::VectorXd ipr_normalized(const Trajectory& traj);

// <d^2 n> with the survival-conditioned mean; entries with no surviving
// probability are marked NaN (gaps)
Eigen::VectorXd position_variance(const Trajectory& traj);

struct Peak {
    double p_f;
    double tau_f;
};
// earliest strict local maximum of |alpha_n|^2 above the 1e-8 floor,
// quadratic sub-step refinement
std::optional<Peak> first_peak(const Trajectory& traj, int n);

// linear fit of tau_f vs |n - n0|; returns sites per unit time (1/slope)
FitResult wavefront_fit(const Trajectory& traj, int n0);

enum class DecayShape { stable, exponential, super_exponential, irregular };
const char* to_string(DecayShape s);

struct DecayClassification {
    DecayShape shape;
    FitResult fit;             // log p vs t over the window
};

// stable (drop < 5%) checked first; exponential if log-linear r^2 >= 0.98;
// super-exponential if the local log-slope steepens beyond 3 sigma of the fit
// residual band; irregular otherwise.
DecayClassification decay_shape(const Eigen::VectorXd& times, const Eigen::VectorXd& series,
                                double window_lo, double window_hi);

// Eq.-(15)-style bath variance of the x coordinate, scaled by 1/N_b^2, and
// the power-law fit of log<d^2 x> vs log t over the window
struct BathVariance {
    std::vector<double> t;
    std::vector<double> var;   // (1/N_b^2) weighted variance of x
    FitResult nu_fit;          // slope = diffusive exponent nu
};
BathVariance bath_variance(const std::vector<bath::BathSnapshot>& snaps, const ModelConfig& cfg,
                           double window_lo, double window_hi);

} // namespace aahbath::obs
