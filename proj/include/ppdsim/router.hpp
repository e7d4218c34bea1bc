#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "ppdsim/logic.hpp"
#include "ppdsim/packet.hpp"

namespace ppdsim {

using PortId = std::uint32_t;

struct PortSelection {
    PortId output_port = 0;
};

/// One router node. The state machine is synchronous: all routers share
/// the slot clock, and a slot's emission is computed from the previous
/// slot's outputs.
struct RouterState {
    std::uint32_t node_id = 0;
    /// Destination written on emitted packets; 0 addresses the attached
    /// load sink.
    std::uint8_t forward_address = 0;
    OperationCode active_op = OperationCode::Through;
    double cap_voltage = 0.0;  // router capacitor V1, volts
    EnergyBuffer buffer;
    /// Present iff a binary operation has latched its f slot and awaits b.
    std::optional<LogicValue> pending_f;
};

/// What one slot did, alongside the emission the contract requires.
struct SlotOutcome {
    RouterState state;
    std::optional<PowerPacket> emitted;
    LogicValue in_logic = LogicValue::Zero;
    /// Output logic of this slot; binary f slots emit nothing and are Zero.
    LogicValue out_logic = LogicValue::Zero;
    BufferAction action = BufferAction::NoAction;
};

/// Advance the router by one slot. An absent packet is a logic-Zero slot.
///
/// Unary operations emit their result in the same slot; binary operations
/// latch the f slot and emit at b, applying the buffer policy. Emissions
/// of logic Zero produce no packet. A One emitted from the buffer is
/// issued at the capacitor voltage, a pass-through One at the incoming
/// payload voltage.
///
/// Throws AddressMismatch for misdelivered packets, OperationBusy when a
/// packet with a different operation code arrives mid-pair, and
/// propagates BufferUnderflow from the buffer.
SlotOutcome on_slot(RouterState state, const std::optional<PowerPacket>& incoming,
                    SlotIndex k);

/// Deterministic output-port choice by destination address. Throws
/// NoRoute for an unknown address.
PortSelection select_port(const PacketHeader& header,
                          const std::map<std::uint8_t, PortId>& routing);

/// Install a new operation; any half-finished pair is abandoned.
RouterState set_operation(RouterState state, OperationCode op);

}  // namespace ppdsim
