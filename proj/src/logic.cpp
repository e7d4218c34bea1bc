#include "ppdsim/logic.hpp"

#include <sstream>

namespace ppdsim {

BinaryOp binary_from_code(OperationCode code) {
    switch (code) {
        case OperationCode::And: return BinaryOp::And;
        case OperationCode::Or: return BinaryOp::Or;
        case OperationCode::Nand: return BinaryOp::Nand;
        case OperationCode::Nor: return BinaryOp::Nor;
        case OperationCode::Xor: return BinaryOp::Xor;
        case OperationCode::Xnor: return BinaryOp::Xnor;
        default:
            throw UnknownOperation("not a binary operation: " + op_name(code));
    }
}

UnaryOp unary_from_code(OperationCode code) {
    switch (code) {
        case OperationCode::Through: return UnaryOp::Through;
        case OperationCode::Not: return UnaryOp::Not;
        default:
            throw UnknownOperation("not a unary operation: " + op_name(code));
    }
}

OperationCode code_for(BinaryOp op) {
    switch (op) {
        case BinaryOp::And: return OperationCode::And;
        case BinaryOp::Or: return OperationCode::Or;
        case BinaryOp::Nand: return OperationCode::Nand;
        case BinaryOp::Nor: return OperationCode::Nor;
        case BinaryOp::Xor: return OperationCode::Xor;
        case BinaryOp::Xnor: return OperationCode::Xnor;
    }
    throw UnknownOperation("invalid binary op");
}

OperationCode code_for(UnaryOp op) {
    return op == UnaryOp::Through ? OperationCode::Through : OperationCode::Not;
}

std::string action_name(BufferAction a) {
    switch (a) {
        case BufferAction::NoAction: return "-";
        case BufferAction::Store: return "store";
        case BufferAction::Discharge: return "discharge";
    }
    throw UnknownOperation("invalid buffer action");
}

LogicValue eval_unary(UnaryOp op, LogicValue x) {
    return op == UnaryOp::Through ? x : complement(x);
}

LogicValue eval_binary(BinaryOp op, SlotPair pair) {
    const bool f = to_bool(pair.f);
    const bool b = to_bool(pair.b);
    switch (op) {
        case BinaryOp::And: return from_bool(f && b);
        case BinaryOp::Or: return from_bool(f || b);
        case BinaryOp::Nand: return from_bool(!(f && b));
        case BinaryOp::Nor: return from_bool(!(f || b));
        case BinaryOp::Xor: return from_bool(f != b);
        case BinaryOp::Xnor: return from_bool(f == b);
    }
    throw UnknownOperation("invalid binary op");
}

LogicOutcome nand_outcome(SlotPair pair) {
    LogicOutcome out;
    const bool f = to_bool(pair.f);
    const bool b = to_bool(pair.b);
    if (!f && !b) {
        out.output_b = LogicValue::One;
        out.action_b = BufferAction::Discharge;
    } else if (!f && b) {
        out.output_b = LogicValue::One;
    } else if (f && b) {
        out.output_b = LogicValue::Zero;
        out.action_f = BufferAction::Store;
        out.action_b = BufferAction::Store;
    } else {  // f && !b
        out.output_b = LogicValue::One;
        out.action_f = BufferAction::Store;
        out.action_b = BufferAction::Discharge;
    }
    return out;
}

LogicOutcome buffer_policy(BinaryOp op, SlotPair pair) {
    LogicOutcome out;
    out.output_b = eval_binary(op, pair);

    // Slot f never carries the output, so a One there is always stored.
    if (pair.f == LogicValue::One) out.action_f = BufferAction::Store;

    if (pair.b == LogicValue::One && out.output_b == LogicValue::Zero)
        out.action_b = BufferAction::Store;
    else if (pair.b == LogicValue::Zero && out.output_b == LogicValue::One)
        out.action_b = BufferAction::Discharge;

    return out;
}

EnergyBuffer apply_action(EnergyBuffer buf, BufferAction a) {
    switch (a) {
        case BufferAction::NoAction:
            return buf;
        case BufferAction::Store:
            if (buf.capacity && buf.charge + buf.quantum > *buf.capacity)
                throw BufferOverflow("buffer capacity exceeded");
            buf.charge += buf.quantum;
            return buf;
        case BufferAction::Discharge:
            if (buf.charge < buf.quantum)
                throw BufferUnderflow(
                    "discharge requested with less than one quantum stored");
            buf.charge -= buf.quantum;
            return buf;
    }
    throw UnknownOperation("invalid buffer action");
}

std::string policy_table_csv() {
    std::ostringstream out;
    out << "op,f,b,out_b,action_f,action_b\n";
    for (BinaryOp op : kAllBinaryOps) {
        for (SlotPair pair : {SlotPair{LogicValue::Zero, LogicValue::Zero},
                              SlotPair{LogicValue::Zero, LogicValue::One},
                              SlotPair{LogicValue::One, LogicValue::One},
                              SlotPair{LogicValue::One, LogicValue::Zero}}) {
            const LogicOutcome o = buffer_policy(op, pair);
            out << op_name(code_for(op)) << ',' << static_cast<int>(pair.f) << ','
                << static_cast<int>(pair.b) << ',' << static_cast<int>(o.output_b)
                << ',' << action_name(o.action_f) << ',' << action_name(o.action_b)
                << '\n';
        }
    }
    return out.str();
}

}  // namespace ppdsim
