#include "ppdsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "ppdsim/prng.hpp"

namespace ppdsim {

namespace {

std::vector<LogicValue> bits_from_string(const std::string& text) {
    std::vector<LogicValue> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c == '0')
            bits.push_back(LogicValue::Zero);
        else if (c == '1')
            bits.push_back(LogicValue::One);
        else
            throw std::invalid_argument("pattern must contain only 0 and 1");
    }
    return bits;
}

std::string bits_to_string(const std::vector<LogicValue>& bits) {
    std::string out;
    out.reserve(bits.size());
    for (LogicValue v : bits) out.push_back(v == LogicValue::One ? '1' : '0');
    return out;
}

}  // namespace

Scenario Scenario::correction_default() { return Scenario{}; }

Scenario Scenario::logic_default() {
    Scenario sc;
    sc.params.r = 16e-3;
    sc.params.R1 = 1e6;  // no measurement tap in this setup
    sc.params.R2 = 10.0;
    sc.params.C1 = 4700e-6;
    sc.params.C2 = 4700e-6;
    sc.params.E = 18.4;
    sc.params.v_diode = 0.8;
    sc.T = 400e-6;
    sc.slots = 8;
    sc.initial_state = {17.6, 0.0};  // storage charged, load empty
    sc.operation = OperationCode::Nand;
    sc.inputs.kind = InputSpec::Kind::Explicit;
    sc.inputs.bits = bits_from_string("00011110");
    return sc;
}

std::vector<LogicValue> make_demand(const DemandSpec& spec, std::uint32_t slots) {
    std::vector<LogicValue> out;
    out.reserve(slots);
    switch (spec.kind) {
        case DemandSpec::Kind::AlternatingPairs:
            // 1,1,0,0,... -- the requirement is held over pairs of slots.
            for (std::uint32_t k = 0; k < slots; ++k)
                out.push_back(from_bool((k / 2) % 2 == 0));
            break;
        case DemandSpec::Kind::Constant:
            out.assign(slots, spec.constant);
            break;
        case DemandSpec::Kind::Explicit:
            if (spec.bits.size() < slots)
                throw std::invalid_argument("explicit demand shorter than slot count");
            out.assign(spec.bits.begin(), spec.bits.begin() + slots);
            break;
    }
    return out;
}

std::vector<LogicValue> make_inputs(const InputSpec& spec, std::uint64_t seed,
                                    std::uint32_t slots) {
    std::vector<LogicValue> out;
    out.reserve(slots);
    switch (spec.kind) {
        case InputSpec::Kind::Bernoulli: {
            if (!(spec.p >= 0.0 && spec.p <= 1.0))
                throw std::invalid_argument("probability p must be in [0, 1]");
            Xorshift64Star gen(seed);
            for (std::uint32_t k = 0; k < slots; ++k)
                out.push_back(from_bool(gen.bernoulli(spec.p)));
            break;
        }
        case InputSpec::Kind::Explicit:
            if (spec.bits.size() < slots)
                throw std::invalid_argument("explicit inputs shorter than slot count");
            out.assign(spec.bits.begin(), spec.bits.begin() + slots);
            break;
    }
    return out;
}

HeatMap heatmap(const std::vector<double>& input_energy,
                const std::vector<double>& output_energy) {
    if (input_energy.size() != output_energy.size())
        throw std::invalid_argument("input and output energy rows differ in length");

    double max_in = 0.0;
    for (double e : input_energy) max_in = std::max(max_in, e);
    if (!(max_in > 0.0))
        throw DegenerateNormalization("no slot carries input energy");

    auto normalize = [max_in](double e) {
        return std::clamp(e / max_in, 0.0, 1.0 + 1e-9);
    };

    HeatMap hm;
    hm.input.reserve(input_energy.size());
    hm.output.reserve(output_energy.size());
    for (double e : input_energy) hm.input.push_back(normalize(e));
    for (double e : output_energy) hm.output.push_back(normalize(e));
    return hm;
}

std::string HeatMap::to_csv() const {
    std::ostringstream out;
    out << "input";
    for (double v : input) out << ',' << format_number(v);
    out << "\noutput";
    for (double v : output) out << ',' << format_number(v);
    out << '\n';
    return out.str();
}

LogicExperimentResult run_logic_experiment(const Scenario& sc) {
    sc.params.validate();
    const std::vector<LogicValue> bits =
        sc.inputs.kind == InputSpec::Kind::Explicit
            ? sc.inputs.bits
            : make_inputs(sc.inputs, sc.seed, sc.slots);
    if (bits.empty()) throw EmptyRun("logic experiment over zero slots");

    const bool unary = is_unary(sc.operation);
    if (!unary && bits.size() % 2 != 0)
        throw std::invalid_argument(
            "binary operations consume slot pairs; pattern length must be even");

    const double payload_voltage = sc.params.E - sc.params.v_diode;
    const double quantum = payload_voltage * payload_voltage * sc.T / sc.params.R2;

    RouterState router;
    router.node_id = 1;
    router.forward_address = 0;
    router.active_op = sc.operation;
    router.cap_voltage = sc.initial_state.v1;
    router.buffer = EnergyBuffer{sc.initial_buffer_quanta * quantum, quantum, {}};

    const SlotEnergyModel energy_model(sc.params, sc.T);

    LogicExperimentResult res;
    StateVector xi = sc.initial_state;
    SlotIndex k = 0;

    auto run_slot = [&](SlotKind kind, std::optional<PowerPacket> incoming) {
        Mode mode = Mode::P00;  // tags request no circuit configuration
        std::optional<LogicValue> out_logic;
        double out_energy = 0.0;
        double in_energy = 0.0;

        if (kind == SlotKind::Payload) {
            router.cap_voltage = xi.v1;
            const bool f_slot = !unary && !router.pending_f.has_value();
            SlotOutcome outcome = on_slot(router, incoming, k);
            router = outcome.state;
            if (!f_slot) out_logic = outcome.out_logic;

            mode = mode_for(to_bool(outcome.in_logic), to_bool(outcome.out_logic));
            if (outcome.in_logic == LogicValue::One)
                in_energy = payload_voltage * payload_voltage * sc.T / sc.params.R2;
            if (outcome.emitted) {
                const double v = outcome.emitted->payload.voltage_level;
                out_energy = v * v * sc.T / sc.params.R2;
            }

            res.events.push_back(RouterEvent{k, router.node_id, outcome.in_logic,
                                             router.active_op, out_logic,
                                             outcome.action, router.buffer.charge});
            if (out_logic) res.actual_outputs.push_back(*out_logic);
        }

        res.slot_kinds.push_back(kind);
        res.slot_modes.push_back(mode);
        res.slot_ledgers.push_back(energy_model.ledger(mode, xi));
        res.input_energy.push_back(in_energy);
        res.output_energy.push_back(out_energy);
        xi = step(energy_model.discrete(mode), xi, effective_source(sc.params, mode));
        ++k;
    };

    const std::size_t group = unary ? 1 : 2;
    for (std::size_t i = 0; i < bits.size(); i += group) {
        run_slot(SlotKind::Header, std::nullopt);
        for (std::size_t j = 0; j < group; ++j) {
            const LogicValue bit = bits[i + j];
            PowerPacket p;
            p.header.destination_address = router.node_id;
            p.header.operation_code = sc.operation;
            p.payload.logic = bit;
            p.payload.voltage_level =
                bit == LogicValue::One ? payload_voltage : 0.0;
            p.payload.slot_index = k;
            run_slot(SlotKind::Payload, p);
        }
        run_slot(SlotKind::Footer, std::nullopt);
    }

    if (unary) {
        for (LogicValue bit : bits)
            res.expected_outputs.push_back(
                eval_unary(unary_from_code(sc.operation), bit));
    } else {
        for (std::size_t i = 0; i < bits.size(); i += 2)
            res.expected_outputs.push_back(eval_binary(
                binary_from_code(sc.operation), SlotPair{bits[i], bits[i + 1]}));
    }
    res.oracle_match = res.expected_outputs == res.actual_outputs;

    res.heat = heatmap(res.input_energy, res.output_energy);
    return res;
}

ErrorCorrectionResult run_error_correction(const Scenario& sc) {
    sc.params.validate();
    if (sc.slots == 0) throw EmptyRun("error-correction run over zero slots");

    const std::vector<LogicValue> demand = make_demand(sc.demand, sc.slots);
    const std::vector<LogicValue> inputs = make_inputs(sc.inputs, sc.seed, sc.slots);

    const InternalModel im = make_internal_model(sc.params, sc.T);
    const TrackingState ts0{sc.initial_state, sc.initial_state, 0};

    ErrorCorrectionResult res;
    res.with_algorithm =
        run_tracking(demand, inputs, im, ts0, true, sc.selector_target);
    res.without_algorithm =
        run_tracking(demand, inputs, im, ts0, false, sc.selector_target);

    // Energy bookkeeping over the algorithm-on trajectory.
    const SlotEnergyModel energy_model(sc.params, sc.T);
    StateVector xi = sc.initial_state;
    EnergyLedger totals;
    std::uint32_t underflows = 0;
    res.slot_modes.reserve(sc.slots);
    res.slot_ledgers.reserve(sc.slots);
    for (const TraceRow& row : res.with_algorithm.rows) {
        const LogicValue output = eval_unary(row.chosen, row.input);
        const Mode mode = mode_for(to_bool(row.input), to_bool(output));
        const EnergyLedger ledger = energy_model.ledger(mode, xi);
        totals += ledger;
        res.slot_modes.push_back(mode);
        res.slot_ledgers.push_back(ledger);
        xi = step(energy_model.discrete(mode), xi, effective_source(sc.params, mode));
        if (output == LogicValue::One && row.xi_r.v2 <= sc.threshold) ++underflows;
    }

    res.metrics.avg_abs_err_with = res.with_algorithm.avg_abs_err;
    res.metrics.avg_abs_err_without = res.without_algorithm.avg_abs_err;
    res.metrics.energy = totals;
    res.metrics.underflow_count = underflows;
    res.metrics.seed = sc.seed;
    res.metrics.p = sc.inputs.kind == InputSpec::Kind::Bernoulli
                        ? sc.inputs.p
                        : std::numeric_limits<double>::quiet_NaN();
    res.metrics.slots = sc.slots;
    return res;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string trace_csv(const TrackingTrace& trace) {
    std::ostringstream out;
    out << "k,input,demand,chosen_op,V1_r,V2_r,V1_l,V2_l,abs_err\n";
    for (const TraceRow& row : trace.rows) {
        out << row.k << ',' << static_cast<int>(row.input) << ','
            << static_cast<int>(row.demand) << ','
            << (row.chosen == UnaryOp::Through ? "through" : "not") << ','
            << format_number(row.xi_r.v1) << ',' << format_number(row.xi_r.v2) << ','
            << format_number(row.xi_l.v1) << ',' << format_number(row.xi_l.v2) << ','
            << format_number(row.abs_err) << '\n';
    }
    return out.str();
}

std::string events_csv(const std::vector<RouterEvent>& events) {
    std::ostringstream out;
    out << "k,node_id,in_logic,op,out_logic,buffer_action,buffer_charge\n";
    for (const RouterEvent& e : events) {
        out << e.k << ',' << e.node_id << ',' << static_cast<int>(e.in_logic) << ','
            << op_name(e.op) << ',';
        if (e.out_logic)
            out << static_cast<int>(*e.out_logic);
        else
            out << '-';
        out << ',' << action_name(e.action) << ',' << format_number(e.buffer_charge)
            << '\n';
    }
    return out.str();
}

std::string ledger_csv(const std::vector<Mode>& modes,
                       const std::vector<EnergyLedger>& ledgers) {
    if (modes.size() != ledgers.size())
        throw std::invalid_argument("mode and ledger rows differ in length");
    std::ostringstream out;
    out << "k,mode,source_in,stored_delta,dissipated,load_delivered\n";
    for (std::size_t k = 0; k < ledgers.size(); ++k) {
        const EnergyLedger& l = ledgers[k];
        out << k << ',' << mode_name(modes[k]) << ',' << format_number(l.source_in)
            << ',' << format_number(l.stored_delta) << ','
            << format_number(l.dissipated) << ',' << format_number(l.load_delivered)
            << '\n';
    }
    return out.str();
}

std::string Metrics::to_json() const {
    nlohmann::json j{
        {"seed", seed},
        {"p", p},
        {"slots", slots},
        {"avg_err_with", avg_abs_err_with},
        {"avg_err_without", avg_abs_err_without},
        {"energy",
         {{"source_in", energy.source_in},
          {"stored_delta", energy.stored_delta},
          {"dissipated", energy.dissipated},
          {"load_delivered", energy.load_delivered}}},
        {"underflow_count", underflow_count}};
    return j.dump(2);
}

namespace {

nlohmann::json demand_json(const DemandSpec& d) {
    switch (d.kind) {
        case DemandSpec::Kind::AlternatingPairs:
            return {{"type", "alternating_pairs"}};
        case DemandSpec::Kind::Constant:
            return {{"type", "constant"}, {"value", static_cast<int>(d.constant)}};
        case DemandSpec::Kind::Explicit:
            return {{"type", "explicit"}, {"bits", bits_to_string(d.bits)}};
    }
    throw std::invalid_argument("invalid demand kind");
}

DemandSpec demand_from(const nlohmann::json& j) {
    DemandSpec d;
    const std::string type = j.at("type").get<std::string>();
    if (type == "alternating_pairs") {
        d.kind = DemandSpec::Kind::AlternatingPairs;
    } else if (type == "constant") {
        d.kind = DemandSpec::Kind::Constant;
        const int v = j.at("value").get<int>();
        if (v != 0 && v != 1)
            throw std::invalid_argument("demand constant must be 0 or 1");
        d.constant = static_cast<LogicValue>(v);
    } else if (type == "explicit") {
        d.kind = DemandSpec::Kind::Explicit;
        d.bits = bits_from_string(j.at("bits").get<std::string>());
    } else {
        throw std::invalid_argument("unknown demand type: " + type);
    }
    return d;
}

nlohmann::json inputs_json(const InputSpec& s) {
    if (s.kind == InputSpec::Kind::Bernoulli)
        return {{"type", "bernoulli"}, {"p", s.p}};
    return {{"type", "explicit"}, {"bits", bits_to_string(s.bits)}};
}

InputSpec inputs_from(const nlohmann::json& j) {
    InputSpec s;
    const std::string type = j.at("type").get<std::string>();
    if (type == "bernoulli") {
        s.kind = InputSpec::Kind::Bernoulli;
        s.p = j.at("p").get<double>();
    } else if (type == "explicit") {
        s.kind = InputSpec::Kind::Explicit;
        s.bits = bits_from_string(j.at("bits").get<std::string>());
    } else {
        throw std::invalid_argument("unknown input type: " + type);
    }
    return s;
}

}  // namespace

std::string Scenario::to_json() const {
    nlohmann::json j{
        {"params",
         {{"r", params.r},
          {"R1", params.R1},
          {"R2", params.R2},
          {"C1", params.C1},
          {"C2", params.C2},
          {"E", params.E},
          {"v_diode", params.v_diode}}},
        {"T", T},
        {"slots", slots},
        {"initial_state", {initial_state.v1, initial_state.v2}},
        {"threshold", threshold},
        {"demand", demand_json(demand)},
        {"inputs", inputs_json(inputs)},
        {"operation", op_name(operation)},
        {"algorithm", algorithm_on},
        {"seed", seed},
        {"selector_target",
         selector_target == SelectorTarget::Demand ? "demand" : "input"},
        {"initial_buffer_quanta", initial_buffer_quanta}};
    return j.dump(2);
}

Scenario Scenario::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Scenario sc;
    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (p.contains("r")) sc.params.r = p.at("r").get<double>();
        if (p.contains("R1")) sc.params.R1 = p.at("R1").get<double>();
        if (p.contains("R2")) sc.params.R2 = p.at("R2").get<double>();
        if (p.contains("C1")) sc.params.C1 = p.at("C1").get<double>();
        if (p.contains("C2")) sc.params.C2 = p.at("C2").get<double>();
        if (p.contains("E")) sc.params.E = p.at("E").get<double>();
        if (p.contains("v_diode")) sc.params.v_diode = p.at("v_diode").get<double>();
    }
    if (j.contains("T")) sc.T = j.at("T").get<double>();
    if (j.contains("slots")) sc.slots = j.at("slots").get<std::uint32_t>();
    if (j.contains("initial_state")) {
        sc.initial_state.v1 = j.at("initial_state").at(0).get<double>();
        sc.initial_state.v2 = j.at("initial_state").at(1).get<double>();
    }
    if (j.contains("threshold")) sc.threshold = j.at("threshold").get<double>();
    if (j.contains("demand")) sc.demand = demand_from(j.at("demand"));
    if (j.contains("inputs")) sc.inputs = inputs_from(j.at("inputs"));
    if (j.contains("operation"))
        sc.operation = op_from_name(j.at("operation").get<std::string>());
    if (j.contains("algorithm")) sc.algorithm_on = j.at("algorithm").get<bool>();
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("selector_target")) {
        const std::string t = j.at("selector_target").get<std::string>();
        if (t == "demand")
            sc.selector_target = SelectorTarget::Demand;
        else if (t == "input")
            sc.selector_target = SelectorTarget::Input;
        else
            throw std::invalid_argument("selector_target must be demand or input");
    }
    if (j.contains("initial_buffer_quanta"))
        sc.initial_buffer_quanta = j.at("initial_buffer_quanta").get<double>();
    if (!(sc.threshold >= 0.0))
        throw std::invalid_argument("threshold must be >= 0");
    if (!(sc.T > 0.0)) throw std::invalid_argument("slot duration T must be > 0");
    sc.params.validate();
    return sc;
}

}  // namespace ppdsim
