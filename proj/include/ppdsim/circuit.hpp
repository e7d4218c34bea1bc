#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "ppdsim/errors.hpp"

namespace ppdsim {

/// Lumped element values of the source -> router -> load chain.
///
/// The source side connects E through a switch of on-resistance r to a
/// midpoint node carrying the measurement load R1, then through a second
/// r to the router capacitor C1. The output side connects C1 through
/// another switch r to the load capacitor C2 with the resistive load R2
/// in parallel.
struct CircuitParams {
    double r = 22e-3;     // switch on-resistance, ohms
    double R1 = 1.5e3;    // measurement load, ohms
    double R2 = 10.0;     // resistive load, ohms
    double C1 = 4700e-6;  // router capacitor, farads
    double C2 = 4700e-6;  // load capacitor, farads
    double E = 20.0;      // source voltage, volts
    double v_diode = 0.0; // series diode drop while the source conducts, volts

    void validate() const;
};

/// Switch mode P_ij: the router's input logic is i and output logic is j.
/// P00/P11 realize Through, P01/P10 realize NOT.
enum class Mode : std::uint8_t { P11 = 0, P00 = 1, P10 = 2, P01 = 3 };

inline constexpr std::array<Mode, 4> kAllModes = {Mode::P11, Mode::P00,
                                                  Mode::P10, Mode::P01};

/// Mode for input logic i and output logic j.
Mode mode_for(bool input_one, bool output_one);

/// True when the mode connects the source (input logic 1).
constexpr bool source_connected(Mode m) {
    return m == Mode::P11 || m == Mode::P10;
}

/// True when the mode connects the router capacitor to the load
/// (output logic 1).
constexpr bool output_connected(Mode m) {
    return m == Mode::P11 || m == Mode::P01;
}

std::string mode_name(Mode m);

/// Capacitor voltage pair [V1, V2].
struct StateVector {
    double v1 = 0.0;  // router capacitor, volts
    double v2 = 0.0;  // load capacitor, volts

    bool operator==(const StateVector&) const = default;
};

/// Row-major 2x2 matrix.
struct Mat2 {
    double a[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    static Mat2 identity();
    StateVector apply(const StateVector& x) const;
    Mat2 mul(const Mat2& other) const;
};

using Vec2 = std::array<double, 2>;

/// Continuous dynamics of one mode: xi' = M xi + N E.
struct ContinuousModel {
    Mat2 M;
    Vec2 N = {0.0, 0.0};

    std::string to_json() const;
    static ContinuousModel from_json(const std::string& text);
};

/// Zero-order-hold discretization of one mode over a slot of duration T:
/// xi(k+1) = A xi(k) + B E.
struct DiscreteModel {
    Mat2 A;
    Vec2 B = {0.0, 0.0};
    double T = 0.0;  // seconds

    std::string to_json() const;
    static DiscreteModel from_json(const std::string& text);
};

/// Continuous model (M, N) of the requested mode.
///
/// P11: both switches closed, source feeds the load through C1.
/// P00: both open, C1 holds its charge and C2 discharges through R2.
/// P10: source charges C1, load side open.
/// P01: C1 discharges into the load, source side open.
ContinuousModel mode_matrices(const CircuitParams& params, Mode mode);

/// Exact ZOH pair (A, B) via the exponential of the augmented matrix
/// [[M, N], [0, 0]] * T, which handles singular M uniformly. Throws
/// NonFinite if the exponential overflows.
DiscreteModel discretize(const ContinuousModel& model, double T);

/// One discrete step: A xi + B E.
StateVector step(const DiscreteModel& dm, const StateVector& xi, double E);

/// Output map C = [0 1]: the load voltage V2.
double load_voltage(const StateVector& xi);

/// Stored energy of a capacitor: c v^2 / 2. Requires c > 0.
double capacitor_energy(double v, double c);

/// Per-slot energy bookkeeping. All entries in joules; load_delivered is
/// the V2^2/R2 share of dissipated, reported separately but included in
/// the dissipated total, so source_in = stored_delta + dissipated.
struct EnergyLedger {
    double source_in = 0.0;
    double stored_delta = 0.0;
    double dissipated = 0.0;
    double load_delivered = 0.0;

    EnergyLedger& operator+=(const EnergyLedger& other);
    /// |source_in - stored_delta - dissipated|.
    double imbalance() const;
};

/// Relative tolerance of the per-slot balance check.
inline constexpr double kLedgerRelTol = 1e-3;

/// Energy accountant for one (params, T) pair. Integrates the closed-form
/// slot trajectory with a 64-node Gauss-Legendre rule; the node
/// propagators are precomputed per mode, so per-slot evaluation is a
/// handful of 2x2 products.
class SlotEnergyModel {
  public:
    SlotEnergyModel(const CircuitParams& params, double T);

    /// Ledger for one slot starting from xi_before under the given mode.
    /// Throws BalanceViolation if the balance residual exceeds
    /// kLedgerRelTol relative to the largest ledger entry.
    EnergyLedger ledger(Mode mode, const StateVector& xi_before) const;

    /// Energy carried through the output switch into the load node during
    /// one slot; zero for modes with the output side open.
    double output_port_energy(Mode mode, const StateVector& xi_before) const;

    const DiscreteModel& discrete(Mode mode) const;
    const CircuitParams& params() const { return params_; }
    double slot_duration() const { return T_; }

  private:
    struct NodeProp {
        Mat2 A;
        Vec2 B;
    };

    StateVector state_at_node(Mode mode, const StateVector& xi0, int node) const;

    CircuitParams params_;
    double T_;
    std::array<DiscreteModel, 4> discrete_;
    // exp(M t_i) and the matching input response at each quadrature node
    std::array<std::array<NodeProp, 64>, 4> nodes_;
};

/// Convenience wrapper over SlotEnergyModel for a single slot.
/// xi_after must be the exact ZOH step of xi_before under the mode; it is
/// used for the stored-energy difference.
EnergyLedger energy_ledger(Mode mode, const CircuitParams& params,
                           const StateVector& xi_before,
                           const StateVector& xi_after, double T);

/// Source voltage effective during a slot of the given mode: E less the
/// diode drop while the source conducts. Modes that leave the source
/// disconnected see plain E (their B is zero, so the value is inert).
double effective_source(const CircuitParams& params, Mode mode);

}  // namespace ppdsim
