#ifndef SL2R_ODE_HPP
#define SL2R_ODE_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

// Deterministic explicit integrators (Dormand-Prince 5(4) with PI step
// control, fixed RK4), event location by bisection on the dense output,
// and direction-field sampling for phase portraits.

namespace sl2r::ode {

using State = std::vector<double>;
using Rhs = std::function<void(double s, const State& y, State& dy)>;
using DomainPredicate = std::function<bool(double s, const State& y)>;

struct OdeSystem {
    int dim = 0;
    Rhs rhs;
    DomainPredicate in_domain;  // optional; empty means all of R^dim

    bool contains(double s, const State& y) const { return !in_domain || in_domain(s, y); }
    State eval(double s, const State& y) const {
        State dy(dim);
        rhs(s, y, dy);
        return dy;
    }
};

enum class Method { Rk4Fixed, Rk45Adaptive };

struct IntegratorConfig {
    Method method = Method::Rk45Adaptive;
    double initial_step = 0.0;  // <= 0: choose automatically
    double fixed_step = 1e-3;   // RK4 only
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    long max_steps = 1000000;
    double event_tol = 1e-9;
};

// Scalar event function; a root g(s, y) = 0 crossed in the requested
// direction stops the integration when terminal.
struct EventSpec {
    std::string name;
    std::function<double(double s, const State& y)> value;
    int direction = 0;  // -1: + -> -, +1: - -> +, 0: any crossing
    bool terminal = true;
};

enum class Termination { ReachedEnd, Event, StepFailure };

struct Trajectory {
    std::vector<double> s;
    std::vector<State> states;
    std::vector<State> derivs;  // RHS at each sample
    // Continuous-extension coefficients per accepted step (adaptive runs);
    // dense_h holds the original signed step the coefficients refer to.
    std::vector<std::array<State, 5>> dense;
    std::vector<double> dense_h;
    Termination reason = Termination::ReachedEnd;
    std::string event_name;  // filled when reason == Event
    std::string failure;     // filled when reason == StepFailure

    std::size_t size() const { return s.size(); }
    double s_begin() const { return s.front(); }
    double s_end() const { return s.back(); }

    // Dense evaluation: the method's continuous extension where available,
    // cubic Hermite otherwise (fixed-step runs).
    State state_at(double si) const;
};

Trajectory integrate(const OdeSystem& system, const State& y0, double s0, double s1,
                     const IntegratorConfig& config = {},
                     const std::vector<EventSpec>& events = {});

// Unit-normalized RHS directions at the given states; out-of-domain points
// are skipped.  Input order is preserved.
std::vector<std::pair<State, State>> sample_direction_field(const OdeSystem& system,
                                                            const std::vector<State>& points);

}  // namespace sl2r::ode

#endif
