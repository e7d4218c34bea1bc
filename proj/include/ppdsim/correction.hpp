#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ppdsim/circuit.hpp"
#include "ppdsim/logic.hpp"
#include "ppdsim/packet.hpp"

namespace ppdsim {

/// The router's model of its own circuit: the four discretized modes plus
/// the source voltage, all built from one parameter set and one slot
/// duration. The output row is fixed at C = [0 1].
struct InternalModel {
    std::array<DiscreteModel, 4> modes;
    CircuitParams params;

    const DiscreteModel& of(Mode m) const {
        return modes[static_cast<std::size_t>(m)];
    }
};

InternalModel make_internal_model(const CircuitParams& params, double T);

/// Which trajectory the operation selector tracks. Demand keys the
/// reference recursion to the load requirement; Input keys it to the
/// actual input logic of the slot.
enum class SelectorTarget : std::uint8_t { Demand = 0, Input = 1 };

/// Reference and actual trajectories on the shared slot grid.
struct TrackingState {
    StateVector xi_l;  // reference: source output always meets the demand
    StateVector xi_r;  // actual: driven by the random source
    SlotIndex k = 0;
};

/// Predicted next-slot load-voltage error magnitudes for the two
/// candidate unary operations given the current input logic.
struct PredictedErrors {
    double err_keep = 0.0;  // Through: output logic equals the input
    double err_flip = 0.0;  // Not: output logic inverts the input
};

/// One-step prediction: the reference advances with the mode matching
/// the slot's demand (or the input, under SelectorTarget::Input), the
/// actual state advances under both candidate output logics, and each
/// candidate's |V2_r(k+1) - V2_l(k+1)| is returned.
PredictedErrors predict(LogicValue input, const TrackingState& ts,
                        const InternalModel& im, LogicValue demand,
                        SelectorTarget target = SelectorTarget::Demand);

/// Not iff it strictly wins; Through otherwise, ties included.
UnaryOp select_operation(const PredictedErrors& pe);

/// Commit one slot: the actual state steps with mode P_{input, output},
/// the reference with its keyed mode, and the slot index advances.
TrackingState advance(TrackingState ts, LogicValue input, UnaryOp chosen,
                      const InternalModel& im, LogicValue demand,
                      SelectorTarget target = SelectorTarget::Demand);

struct TraceRow {
    SlotIndex k = 0;              // slot being stepped
    LogicValue input = LogicValue::Zero;
    LogicValue demand = LogicValue::Zero;
    UnaryOp chosen = UnaryOp::Through;
    StateVector xi_r;             // state after the step
    StateVector xi_l;
    double abs_err = 0.0;         // |V2_r - V2_l| after the step
};

struct TrackingTrace {
    std::vector<TraceRow> rows;
    double avg_abs_err = 0.0;
};

/// Run the full slot sequence. With the algorithm off the router's output
/// logic equals the demand at every slot; with it on, the selector
/// governs. Sequences must be the same length and non-empty.
TrackingTrace run_tracking(const std::vector<LogicValue>& demand,
                           const std::vector<LogicValue>& inputs,
                           const InternalModel& im, const TrackingState& ts0,
                           bool use_algorithm,
                           SelectorTarget target = SelectorTarget::Demand);

}  // namespace ppdsim
