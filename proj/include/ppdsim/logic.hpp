#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ppdsim/errors.hpp"
#include "ppdsim/packet.hpp"

namespace ppdsim {

enum class UnaryOp : std::uint8_t { Through = 0, Not = 1 };

enum class BinaryOp : std::uint8_t {
    And = 0,
    Or = 1,
    Nand = 2,
    Nor = 3,
    Xor = 4,
    Xnor = 5,
};

inline constexpr std::array<BinaryOp, 6> kAllBinaryOps = {
    BinaryOp::And, BinaryOp::Or,  BinaryOp::Nand,
    BinaryOp::Nor, BinaryOp::Xor, BinaryOp::Xnor};

BinaryOp binary_from_code(OperationCode code);    // throws UnknownOperation
UnaryOp unary_from_code(OperationCode code);      // throws UnknownOperation
OperationCode code_for(BinaryOp op);
OperationCode code_for(UnaryOp op);

/// The two consecutive slots consumed by a binary operation: f(orward)
/// first, then b(ackward). The result occupies slot b.
struct SlotPair {
    LogicValue f = LogicValue::Zero;
    LogicValue b = LogicValue::Zero;
};

/// What a slot does to the energy buffer.
enum class BufferAction : std::uint8_t { NoAction = 0, Store = 1, Discharge = 2 };

std::string action_name(BufferAction a);

/// Storage that absorbs a payload when the logic result suppresses the
/// output and supplies one when the result requires an output with no
/// input. Charge moves in whole quanta.
struct EnergyBuffer {
    double charge = 0.0;   // joules, never negative
    double quantum = 0.0;  // energy of one payload at nominal voltage
    std::optional<double> capacity;  // optional cap in joules
};

/// Result of one operation: for binary ops the output occupies slot b
/// only (output_f stays empty); for unary ops the result is per single
/// slot and is reported in output_f.
struct LogicOutcome {
    std::optional<LogicValue> output_f;
    LogicValue output_b = LogicValue::Zero;
    BufferAction action_f = BufferAction::NoAction;
    BufferAction action_b = BufferAction::NoAction;

    bool operator==(const LogicOutcome&) const = default;
};

/// Through passes the slot unchanged, Not inverts it.
LogicValue eval_unary(UnaryOp op, LogicValue x);

/// Conventional Boolean table over the pair; the result is the logic of
/// slot b's output.
LogicValue eval_binary(BinaryOp op, SlotPair pair);

/// The store/discharge table for NAND, transcribed row by row:
///   (0,0) -> 1, discharge at b
///   (0,1) -> 1, no action
///   (1,1) -> 0, store at f and at b
///   (1,0) -> 1, store at f, discharge at b
LogicOutcome nand_outcome(SlotPair pair);

/// Buffer policy generated from the conservation rule for any binary
/// operation: an input One at slot f is always stored; at slot b an input
/// One whose output is Zero is stored, an input Zero whose output is One
/// draws a discharge, and matching input/output passes through. For NAND
/// this reproduces nand_outcome exactly.
LogicOutcome buffer_policy(BinaryOp op, SlotPair pair);

/// Apply one action. Store adds a quantum (BufferOverflow past a
/// configured capacity), Discharge removes one (BufferUnderflow when the
/// charge is short), NoAction returns the buffer unchanged.
EnergyBuffer apply_action(EnergyBuffer buf, BufferAction a);

/// CSV rendering of all six binary truth-and-policy tables, one row per
/// (op, input pair): op,f,b,out_b,action_f,action_b.
std::string policy_table_csv();

}  // namespace ppdsim
