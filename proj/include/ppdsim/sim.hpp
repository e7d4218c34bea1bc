#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppdsim/circuit.hpp"
#include "ppdsim/correction.hpp"
#include "ppdsim/logic.hpp"
#include "ppdsim/packet.hpp"
#include "ppdsim/router.hpp"

namespace ppdsim {

/// Demand pattern of the load, one logic value per slot.
struct DemandSpec {
    enum class Kind : std::uint8_t { AlternatingPairs, Constant, Explicit };
    Kind kind = Kind::AlternatingPairs;
    LogicValue constant = LogicValue::Zero;
    std::vector<LogicValue> bits;  // for Kind::Explicit
};

/// Source behaviour: an explicit slot pattern or seeded Bernoulli draws.
struct InputSpec {
    enum class Kind : std::uint8_t { Bernoulli, Explicit };
    Kind kind = Kind::Bernoulli;
    double p = 0.5;
    std::vector<LogicValue> bits;  // for Kind::Explicit
};

/// Full simulation configuration. A run is reproducible from the scenario
/// alone, seed included.
struct Scenario {
    CircuitParams params;
    double T = 400e-6;          // slot duration, seconds
    std::uint32_t slots = 1000;
    StateVector initial_state{18.0, 15.0};
    double threshold = 0.5;     // logic threshold, volts
    DemandSpec demand;
    InputSpec inputs;
    OperationCode operation = OperationCode::Nand;
    bool algorithm_on = true;
    std::uint64_t seed = 1;
    SelectorTarget selector_target = SelectorTarget::Demand;
    /// Quanta preloaded in the energy buffer ("the storage is already
    /// charged"); only the logic experiment consumes it.
    double initial_buffer_quanta = 2.0;

    /// Error-correction defaults: 22 mohm switch, 1.5 kohm measurement
    /// load, 4700 uF capacitors, 10 ohm load, 20 V source, state [18, 15].
    static Scenario correction_default();

    /// Static logic-operation defaults: 18.4 V source, 16 mohm switch,
    /// 0.8 V diode drop, 10 ohm load, storage charged, load empty.
    static Scenario logic_default();

    std::string to_json() const;
    static Scenario from_json(const std::string& text);
};

/// Demand sequence for the given slot count.
std::vector<LogicValue> make_demand(const DemandSpec& spec, std::uint32_t slots);

/// Input sequence for the given slot count; Bernoulli draws come from the
/// fixed xorshift64* generator, so the sequence is bit-reproducible from
/// (spec, seed).
std::vector<LogicValue> make_inputs(const InputSpec& spec, std::uint64_t seed,
                                    std::uint32_t slots);

/// Normalized per-slot energy, rows {input, output}, values in [0, 1].
struct HeatMap {
    std::vector<double> input;
    std::vector<double> output;

    std::string to_csv() const;
};

/// Divide both rows by the maximum entry of the input row, clamping to
/// [0, 1 + 1e-9] against rounding. Throws DegenerateNormalization when
/// the input row has no energy.
HeatMap heatmap(const std::vector<double>& input_energy,
                const std::vector<double>& output_energy);

/// One line of the router event log (payload slots only).
struct RouterEvent {
    SlotIndex k = 0;  // grid slot index
    std::uint32_t node_id = 0;
    LogicValue in_logic = LogicValue::Zero;
    OperationCode op = OperationCode::Through;
    std::optional<LogicValue> out_logic;  // empty for binary f slots
    BufferAction action = BufferAction::NoAction;
    double buffer_charge = 0.0;
};

std::string events_csv(const std::vector<RouterEvent>& events);

/// Grid slot kinds of the logic experiment: packets are framed as
/// [header][payload...][footer], tags carry no energy.
enum class SlotKind : std::uint8_t { Header = 0, Payload = 1, Footer = 2 };

struct LogicExperimentResult {
    std::vector<RouterEvent> events;       // one per payload slot
    HeatMap heat;                          // over the full framed grid
    std::vector<SlotKind> slot_kinds;      // per grid slot
    std::vector<Mode> slot_modes;          // per grid slot
    std::vector<EnergyLedger> slot_ledgers;// per grid slot
    std::vector<double> input_energy;      // payload-level, joules
    std::vector<double> output_energy;
    /// Expected outputs from the plain Boolean table, one per pair (or per
    /// slot for unary operations), and whether the run matched them.
    std::vector<LogicValue> expected_outputs;
    std::vector<LogicValue> actual_outputs;
    bool oracle_match = false;
};

/// Drive the scenario's input pattern through one router executing the
/// scenario's operation. Binary operations need an even payload count.
/// Propagates BufferUnderflow; the heat map throws
/// DegenerateNormalization when no slot carries input energy.
LogicExperimentResult run_logic_experiment(const Scenario& sc);

struct Metrics {
    double avg_abs_err_with = 0.0;
    double avg_abs_err_without = 0.0;
    EnergyLedger energy;            // totals over the algorithm-on run
    std::uint32_t underflow_count = 0;
    std::uint64_t seed = 0;
    double p = 0.0;                 // NaN for explicit input patterns
    std::uint32_t slots = 0;

    std::string to_json() const;
};

struct ErrorCorrectionResult {
    TrackingTrace with_algorithm;
    TrackingTrace without_algorithm;
    std::vector<Mode> slot_modes;           // algorithm-on run
    std::vector<EnergyLedger> slot_ledgers; // algorithm-on run
    Metrics metrics;
};

/// Run the tracking scenario twice on identical demand/input streams,
/// once with the selector and once following the demand directly.
/// Throws EmptyRun for a zero-slot scenario.
ErrorCorrectionResult run_error_correction(const Scenario& sc);

/// Fixed-width number formatting shared by every CSV writer: 9
/// significant digits, so artifacts diff cleanly across platforms.
std::string format_number(double v);

std::string trace_csv(const TrackingTrace& trace);
std::string ledger_csv(const std::vector<Mode>& modes,
                       const std::vector<EnergyLedger>& ledgers);

}  // namespace ppdsim
