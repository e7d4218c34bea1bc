#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppdsim/errors.hpp"

namespace ppdsim {

/// Logic value of one time slot: One means a payload above the threshold
/// voltage exists in the slot, Zero means it does not.
enum class LogicValue : std::uint8_t { Zero = 0, One = 1 };

constexpr LogicValue complement(LogicValue v) {
    return v == LogicValue::One ? LogicValue::Zero : LogicValue::One;
}

constexpr bool to_bool(LogicValue v) { return v == LogicValue::One; }

constexpr LogicValue from_bool(bool b) {
    return b ? LogicValue::One : LogicValue::Zero;
}

/// Operation requested in a packet header.
enum class OperationCode : std::uint8_t {
    Through = 0,
    Not = 1,
    And = 2,
    Or = 3,
    Nand = 4,
    Nor = 5,
    Xor = 6,
    Xnor = 7,
};

constexpr bool is_unary(OperationCode op) {
    return op == OperationCode::Through || op == OperationCode::Not;
}

/// Lower-case name used in CSV files and on the command line.
std::string op_name(OperationCode op);

/// Inverse of op_name. Throws UnknownOperation.
OperationCode op_from_name(const std::string& name);

/// Slot index on the TDM grid; one slot lasts the scenario's slot
/// duration T.
using SlotIndex = std::uint32_t;

/// Information tag preceding the payload. Carried as a voltage waveform
/// without current, so it contributes no energy.
struct PacketHeader {
    std::uint8_t destination_address = 0;
    OperationCode operation_code = OperationCode::Through;
    std::vector<std::uint8_t> control_codes;  // opaque, length <= 8

    bool operator==(const PacketHeader&) const = default;
};

/// End-of-packet tag. A single reserved sentinel in framed form.
struct PacketFooter {
    bool operator==(const PacketFooter&) const = default;
};

/// Maximum length of the opaque control code field.
inline constexpr std::size_t kMaxControlCodes = 8;

/// Sentinel byte that terminates every framed packet.
inline constexpr std::uint8_t kEndMarker = 0x7E;

/// The power-carrying slot of a packet.
struct Payload {
    LogicValue logic = LogicValue::Zero;
    double voltage_level = 0.0;  // volts, >= 0
    SlotIndex slot_index = 0;

    bool operator==(const Payload&) const = default;
};

/// One power packet: header tag, payload slot, footer tag.
struct PowerPacket {
    PacketHeader header;
    Payload payload;
    PacketFooter footer;

    bool operator==(const PowerPacket&) const = default;
};

/// Classify a voltage sample against the threshold. One iff the sample is
/// strictly higher than the threshold; the boundary resolves to Zero.
/// Throws NonFinite for NaN/inf samples, std::invalid_argument for a
/// negative threshold.
LogicValue classify(double voltage_sample, double threshold);

/// Build a payload whose logic value is consistent with its voltage.
Payload classified_payload(double voltage, double threshold, SlotIndex slot);

/// Serialize a packet to its framed byte layout:
///
///   [0]        destination address
///   [1]        operation code
///   [2]        control code length L (<= 8)
///   [3..3+L)   control codes
///   [3+L]      payload logic (0x00 or 0x01)
///   [4+L..12+L) payload voltage, IEEE-754 binary64 big-endian
///   [12+L..16+L) payload slot index, uint32 big-endian
///   [16+L]     end marker 0x7E
std::vector<std::uint8_t> encode(const PowerPacket& packet);

/// Inverse of encode on its image. Throws MalformedFrame on truncated
/// input, oversized control field, unknown operation or logic byte,
/// invalid voltage, missing end marker, or trailing bytes.
PowerPacket decode(const std::vector<std::uint8_t>& frame);

using LineId = std::uint32_t;

/// Collision-free assignment of packets to (line, slot) pairs.
class TdmSchedule {
  public:
    /// Occupy (line, k) with p. Throws SlotCollision if already taken;
    /// a collision is a configuration error, power is never dropped.
    void reserve(LineId line, SlotIndex k, const PowerPacket& p);

    std::optional<PowerPacket> at(LineId line, SlotIndex k) const;
    std::size_t size() const { return slots_.size(); }

    /// JSON array of {line, slot, packet}, ordered by (line, slot).
    std::string to_json() const;
    static TdmSchedule from_json(const std::string& text);

    bool operator==(const TdmSchedule&) const = default;

  private:
    std::map<std::pair<LineId, SlotIndex>, PowerPacket> slots_;
};

/// Functional form of TdmSchedule::reserve.
TdmSchedule reserve_slot(TdmSchedule schedule, LineId line, SlotIndex k,
                         const PowerPacket& p);

/// JSON object for one packet ({address, op, control, logic, voltage,
/// slot}); control codes as a hex string.
std::string packet_to_json(const PowerPacket& p);
PowerPacket packet_from_json(const std::string& text);

}  // namespace ppdsim
