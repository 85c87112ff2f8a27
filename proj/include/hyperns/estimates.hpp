#pragma once

#include "hyperns/constants.hpp"
#include "hyperns/mild_solver.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hyperns {

enum class EstimateId {
    dispersive,
    smoothing_p,
    smoothing_pq,
    div_smoothing,
    G_bound,
    Ln_decay,
    Lq_weighted,
    grad_weighted,
    LrLq_member,
    Lp_decay,
    tmdcy2_rate,
};

std::string_view estimate_name(EstimateId id);
std::optional<EstimateId> parse_estimate_id(std::string_view name);

/// Parameters outside the hypotheses of the estimate being checked.
class HypothesisViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Direction of the inequality a report checks.
enum class Bound {
    upper,  // measured <= predicted
    lower,  // measured >= predicted
};

/// One checked inequality. margin >= 0 exactly when the inequality holds; pass also
/// requires a finite measurement.
struct EstimateReport {
    EstimateId id = EstimateId::dispersive;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    double measured = 0.0;
    double predicted = 0.0;
    double margin = 0.0;
    bool pass = false;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

EstimateReport make_report(EstimateId id, nlohmann::ordered_json params, double measured, double predicted,
                           Bound bound, nlohmann::ordered_json details = nlohmann::ordered_json::object());

/// Quadratic time lattice with its doubling.
struct TimeGrid {
    double T = 5.0;
    std::size_t J = 32;

    [[nodiscard]] std::vector<double> times() const { return quadratic_lattice(T, J); }
    [[nodiscard]] TimeGrid refined() const { return {T, 2 * J}; }
};

/// A sup counts as bounded when it changes by less than these factors under refinement.
inline constexpr double kTimeRefinementVariation = 2.0;
inline constexpr double kSpaceRefinementVariation = 1.3;
inline constexpr double kRateTolerance = 0.05;

struct FitWindow {
    double lo = 1.0;
    double hi = 4.0;
};
inline constexpr FitWindow kLargeTimeWindow{1.0, 4.0};
inline constexpr FitWindow kSmallTimeWindow{0.01, 0.1};

/// max(a, b) / min(a, b); 1 when both vanish, infinite when only one does or either is not finite.
double variation(double a, double b);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log(t^w v(t)) against t over the window. Throws on an empty window or non-positive values.
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values, double weight_power,
                      FitWindow window);

/// Slope of log v(t) against log t over the window.
double fit_power_exponent(const std::vector<double>& times, const std::vector<double>& values, FitWindow window);

/// R(t_j) = ||e^{t_j L} a||_q t_j^{(n/2)(1/p-1/q)} e^{t_j beta1(p,q)} / ||a||_p.
std::vector<double> dispersive_ratios(const OneForm& a, double p, double q, const std::vector<double>& times,
                                      const DecayConstants& constants);

/// Same construction for ||nabla e^{tL} a||_q: weight t^{1/2} e^{t beta2(p)} when p = q,
/// t^{(n/2)(1/p-1/q+1/n)} e^{t beta3(p,q)} otherwise.
std::vector<double> smoothing_ratios(const OneForm& a, double p, double q, const std::vector<double>& times,
                                     const DecayConstants& constants);

/// ||e^{tL} nabla^* T_0||_q with T_0 = a (x) a, weighted as smoothing_ratios for p < q
/// and divided by ||T_0||_p.
std::vector<double> div_smoothing_ratios(const OneForm& a, double p, double q, const std::vector<double>& times,
                                         const DecayConstants& constants);

/// The three linear checks pass when the sup of the ratio is finite and varies less
/// than kTimeRefinementVariation between the grid and its refinement.
EstimateReport verify_dispersive(const OneForm& a, double p, double q, const TimeGrid& grid,
                                 const DecayConstants& constants);
EstimateReport verify_smoothing(const OneForm& a, double p, double q, const TimeGrid& grid,
                                const DecayConstants& constants);
EstimateReport verify_div_smoothing(const OneForm& a, double p, double q, const TimeGrid& grid,
                                    const DecayConstants& constants);

/// Passes when the fitted rate of log(t^w v) is <= -beta_expected + tolerance and
/// sup t^w e^{t beta_expected} v(t) is finite.
EstimateReport measure_decay(EstimateId id, const std::vector<double>& times, const std::vector<double>& values,
                             double weight_power, double beta_expected, FitWindow window,
                             double tolerance = kRateTolerance);
EstimateReport measure_decay(EstimateId id, const Trajectory& u, double q, double weight_power,
                             double beta_expected, FitWindow window, bool gradient = false,
                             double tolerance = kRateTolerance);

/// ||u(t_end)||_q <= fraction ||u(0)||_q.
EstimateReport verify_end_value(EstimateId id, const Trajectory& u, double q, double fraction);

/// sup_t t^w e^{t beta} ||u(t)||_q (or ||nabla u||_q) on two resolutions of the same run;
/// passes when both are finite and their variation is below max_variation.
EstimateReport verify_weighted_bound(EstimateId id, const Trajectory& coarse, const Trajectory& fine, double q,
                                     double weight_power, double beta, bool gradient, double max_variation,
                                     const std::string& refinement);

/// Largest ratio between consecutive values of t^w ||u(t)||_q over the three smallest
/// positive lattice times; below 1 when the weighted norm decreases toward t = 0.
EstimateReport verify_small_time_vanishing(EstimateId id, const Trajectory& u, double q, double weight_power,
                                           bool gradient);

/// int_0^t (t-s)^{-kappa} e^{-(t-s) beta4} product(s) ds for kappa < 1.
double G_bound_integral(double t, double kappa, double beta4, const std::function<double(double)>& product);

struct GBoundSides {
    double left = 0.0;
    double right = 0.0;
    /// left / right, 0 when both vanish.
    double constant = 0.0;
};

/// Both sides of ||Gu(t)||_{n/gamma} <= C int_0^t (t-s)^{-(alpha+zeta-gamma+1)/2}
/// e^{-(t-s) beta4} ||u||_{n/alpha} ||u||_{n/zeta} ds, beta4 = beta3(n/(alpha+zeta), n/gamma).
/// Gu is evaluated on the lattice, so t must be a lattice time. Requires
/// 0 < gamma <= alpha + zeta < n and alpha + zeta - gamma < 1 (integrable weight).
GBoundSides G_bound_sides(const Trajectory& u, double alpha, double gamma, double zeta, double t,
                          const DecayConstants& constants);

/// Implied constant on two resolutions; passes when it varies by less than max_variation.
EstimateReport verify_G_bound(const Trajectory& coarse, const Trajectory& fine, double alpha, double gamma,
                              double zeta, double t, const DecayConstants& constants,
                              double max_variation = kSpaceRefinementVariation);

enum class MembershipClass {
    critical,     // n < q, 1/r = 1/2 - n/2q
    subcritical,  // n < q, 1/r > 1/2 - n/2q
    at_n,         // q = n, 1 <= r
};

std::string_view membership_name(MembershipClass c);
MembershipClass classify_membership(int n, double r, double q);

/// int_0^T ||u(t)||_q^r dt from lattice norms. On the first lattice interval the integrand is
/// modelled as c t^{1-a}, a = r(1/2 - n/2q), i.e. the weighted norm t^{1/2-n/2q} ||u||_q
/// vanishing linearly at t = 0; at q = n the integrand is taken as bounded. Later intervals
/// integrate a cubic interpolant of log ||u||_q^r.
double space_time_integral(const std::vector<double>& times, const std::vector<double>& norms, double r, double q,
                           int n);

/// The solved trajectory with u(t_1 / 2) inserted, obtained by iterating the Duhamel
/// equation on the lattice {0, t_1/2, t_1} from the interpolated guess.
Trajectory refine_first_step(const PicardResult& result, int sweeps = 3);

inline constexpr double kEndpointTolerance = 1e-2;

/// Finite integral whose relative change when the smallest lattice time is halved stays below tolerance.
EstimateReport verify_space_time_membership(const Trajectory& u, const Trajectory& refined, double r, double q,
                                            const DecayConstants& constants,
                                            double tolerance = kEndpointTolerance);

/// Exponents and constants for the long-time decay of an L^p solution in L^q (or of
/// its gradient). When n/2p - n/2q (+ 1/2 for the gradient) reaches 1, p is replaced by
///   p' = n q / (2 (1 - eps) q + n)      (solution)
///   p' = n q / ((1 - 2 eps) q + n)      (gradient)
/// so that the exponent equals 1 - eps with p < p' < n and p' <= q.
struct LongTimeDecayPlan {
    int n = 2;
    double p = 2.0;
    double q = 2.0;
    bool gradient = false;
    bool shifted = false;
    double p_eff = 2.0;
    double eps = 0.0;
    double delta = 0.5;
    double delta_p = 0.75;
    double delta_s = 0.5;
    /// Power of t in the weight.
    double time_power = 0.0;
    double beta_tilde = 0.0;
};

inline constexpr double kDefaultShiftEps = 0.05;

/// Selects the branch and the delta triple. Throws AdmissibilityError if no admissible
/// triple exists (p <= 1 or p > q).
LongTimeDecayPlan plan_long_time_decay(const DecayConstants& constants, double p, double q, bool gradient,
                                       double eps = kDefaultShiftEps);

/// sup over t in [1, T] of t^{time_power} e^{t beta~} ||u(t)||_q (||nabla u(t)||_q) on two
/// resolutions; passes when finite with variation below max_variation.
EstimateReport verify_tmdcy2(const Trajectory& coarse, const Trajectory& fine, double p, double q, bool gradient,
                             const DecayConstants& constants, double max_variation = kTimeRefinementVariation);

}  // namespace hyperns
