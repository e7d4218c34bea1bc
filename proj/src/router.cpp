#include "ppdsim/router.hpp"

#include <string>

namespace ppdsim {

namespace {

PowerPacket make_emission(const RouterState& state,
                          const std::optional<PowerPacket>& incoming,
                          LogicValue out, SlotIndex k) {
    PowerPacket p;
    p.header.destination_address = state.forward_address;
    p.header.operation_code = state.active_op;
    p.payload.logic = out;
    p.payload.slot_index = k;
    // A pass-through payload keeps its voltage; a buffered one is issued
    // at the capacitor level.
    if (incoming && incoming->payload.logic == LogicValue::One)
        p.payload.voltage_level = incoming->payload.voltage_level;
    else
        p.payload.voltage_level = state.cap_voltage;
    return p;
}

}  // namespace

SlotOutcome on_slot(RouterState state, const std::optional<PowerPacket>& incoming,
                    SlotIndex k) {
    if (incoming && incoming->header.destination_address != state.node_id)
        throw AddressMismatch("packet addressed to " +
                              std::to_string(incoming->header.destination_address) +
                              " delivered to node " + std::to_string(state.node_id));

    if (incoming && incoming->header.operation_code != state.active_op) {
        if (state.pending_f)
            throw OperationBusy("operation " +
                                op_name(incoming->header.operation_code) +
                                " requested mid-pair at node " +
                                std::to_string(state.node_id));
        state.active_op = incoming->header.operation_code;
    }

    SlotOutcome out;
    out.in_logic = incoming ? incoming->payload.logic : LogicValue::Zero;

    if (is_unary(state.active_op)) {
        const UnaryOp op = unary_from_code(state.active_op);
        out.out_logic = eval_unary(op, out.in_logic);
        if (out.out_logic == LogicValue::One)
            out.emitted = make_emission(state, incoming, out.out_logic, k);
        out.state = std::move(state);
        return out;
    }

    const BinaryOp op = binary_from_code(state.active_op);
    if (!state.pending_f) {
        // f slot: latch, store a One, emit nothing.
        state.pending_f = out.in_logic;
        if (out.in_logic == LogicValue::One) {
            out.action = BufferAction::Store;
            state.buffer = apply_action(state.buffer, out.action);
        }
        out.state = std::move(state);
        return out;
    }

    // b slot: the pair is complete.
    const SlotPair pair{*state.pending_f, out.in_logic};
    const LogicOutcome outcome = buffer_policy(op, pair);
    state.pending_f.reset();
    out.out_logic = outcome.output_b;
    out.action = outcome.action_b;
    state.buffer = apply_action(state.buffer, outcome.action_b);
    if (outcome.output_b == LogicValue::One)
        out.emitted = make_emission(state, incoming, outcome.output_b, k);
    out.state = std::move(state);
    return out;
}

PortSelection select_port(const PacketHeader& header,
                          const std::map<std::uint8_t, PortId>& routing) {
    auto it = routing.find(header.destination_address);
    if (it == routing.end())
        throw NoRoute("no route for address " +
                      std::to_string(header.destination_address));
    return PortSelection{it->second};
}

RouterState set_operation(RouterState state, OperationCode op) {
    state.active_op = op;
    state.pending_f.reset();
    return state;
}

}  // namespace ppdsim
