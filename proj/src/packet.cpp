#include "ppdsim/packet.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>

#include "json.hpp"

namespace ppdsim {

namespace {

constexpr std::array<const char*, 8> kOpNames = {
    "through", "not", "and", "or", "nand", "nor", "xor", "xnor"};

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) |
           (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) |
           static_cast<std::uint32_t>(p[3]);
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(const std::string& text) {
    if (text.size() % 2 != 0) throw MalformedFrame("odd hex string length");
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw MalformedFrame("invalid hex digit");
    };
    std::vector<std::uint8_t> out(text.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nibble(text[2 * i]) << 4) |
                                           nibble(text[2 * i + 1]));
    return out;
}

}  // namespace

std::string op_name(OperationCode op) {
    auto idx = static_cast<std::size_t>(op);
    if (idx >= kOpNames.size()) throw UnknownOperation("operation code out of range");
    return kOpNames[idx];
}

OperationCode op_from_name(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (std::size_t i = 0; i < kOpNames.size(); ++i)
        if (lower == kOpNames[i]) return static_cast<OperationCode>(i);
    throw UnknownOperation("unknown operation name: " + name);
}

LogicValue classify(double voltage_sample, double threshold) {
    if (!std::isfinite(voltage_sample))
        throw NonFinite("voltage sample is not finite");
    if (!(threshold >= 0.0))
        throw std::invalid_argument("threshold must be >= 0");
    return from_bool(voltage_sample > threshold);
}

Payload classified_payload(double voltage, double threshold, SlotIndex slot) {
    return Payload{classify(voltage, threshold), voltage, slot};
}

std::vector<std::uint8_t> encode(const PowerPacket& packet) {
    const auto& ctrl = packet.header.control_codes;
    if (ctrl.size() > kMaxControlCodes)
        throw MalformedFrame("control codes longer than 8 bytes");

    std::vector<std::uint8_t> out;
    out.reserve(17 + ctrl.size());
    out.push_back(packet.header.destination_address);
    out.push_back(static_cast<std::uint8_t>(packet.header.operation_code));
    out.push_back(static_cast<std::uint8_t>(ctrl.size()));
    out.insert(out.end(), ctrl.begin(), ctrl.end());
    out.push_back(static_cast<std::uint8_t>(packet.payload.logic));

    std::uint64_t bits = std::bit_cast<std::uint64_t>(packet.payload.voltage_level);
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(bits >> shift));

    put_u32_be(out, packet.payload.slot_index);
    out.push_back(kEndMarker);
    return out;
}

PowerPacket decode(const std::vector<std::uint8_t>& frame) {
    if (frame.size() < 17) throw MalformedFrame("frame shorter than minimum length");

    PowerPacket p;
    p.header.destination_address = frame[0];
    if (frame[1] > static_cast<std::uint8_t>(OperationCode::Xnor))
        throw MalformedFrame("unknown operation code");
    p.header.operation_code = static_cast<OperationCode>(frame[1]);

    const std::size_t ctrl_len = frame[2];
    if (ctrl_len > kMaxControlCodes) throw MalformedFrame("control length exceeds 8");
    if (frame.size() != 17 + ctrl_len)
        throw MalformedFrame("frame length does not match control length");
    p.header.control_codes.assign(frame.begin() + 3, frame.begin() + 3 + ctrl_len);

    std::size_t at = 3 + ctrl_len;
    if (frame[at] > 1) throw MalformedFrame("invalid logic byte");
    p.payload.logic = static_cast<LogicValue>(frame[at]);
    ++at;

    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits = (bits << 8) | frame[at + i];
    p.payload.voltage_level = std::bit_cast<double>(bits);
    if (!std::isfinite(p.payload.voltage_level) || p.payload.voltage_level < 0.0)
        throw MalformedFrame("payload voltage not finite and non-negative");
    at += 8;

    p.payload.slot_index = get_u32_be(frame.data() + at);
    at += 4;

    if (frame[at] != kEndMarker) throw MalformedFrame("missing end marker");
    return p;
}

void TdmSchedule::reserve(LineId line, SlotIndex k, const PowerPacket& p) {
    auto [it, inserted] = slots_.emplace(std::make_pair(line, k), p);
    if (!inserted)
        throw SlotCollision("slot " + std::to_string(k) + " on line " +
                            std::to_string(line) + " already occupied");
}

std::optional<PowerPacket> TdmSchedule::at(LineId line, SlotIndex k) const {
    auto it = slots_.find({line, k});
    if (it == slots_.end()) return std::nullopt;
    return it->second;
}

TdmSchedule reserve_slot(TdmSchedule schedule, LineId line, SlotIndex k,
                         const PowerPacket& p) {
    schedule.reserve(line, k, p);
    return schedule;
}

namespace {

nlohmann::json packet_json(const PowerPacket& p) {
    return nlohmann::json{{"address", p.header.destination_address},
                          {"op", op_name(p.header.operation_code)},
                          {"control", to_hex(p.header.control_codes)},
                          {"logic", static_cast<int>(p.payload.logic)},
                          {"voltage", p.payload.voltage_level},
                          {"slot", p.payload.slot_index}};
}

PowerPacket packet_from(const nlohmann::json& j) {
    PowerPacket p;
    p.header.destination_address = j.at("address").get<std::uint8_t>();
    p.header.operation_code = op_from_name(j.at("op").get<std::string>());
    p.header.control_codes = from_hex(j.at("control").get<std::string>());
    int logic = j.at("logic").get<int>();
    if (logic != 0 && logic != 1) throw MalformedFrame("invalid logic value in JSON");
    p.payload.logic = static_cast<LogicValue>(logic);
    p.payload.voltage_level = j.at("voltage").get<double>();
    p.payload.slot_index = j.at("slot").get<SlotIndex>();
    return p;
}

}  // namespace

std::string packet_to_json(const PowerPacket& p) { return packet_json(p).dump(); }

PowerPacket packet_from_json(const std::string& text) {
    return packet_from(nlohmann::json::parse(text));
}

std::string TdmSchedule::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [key, packet] : slots_)
        arr.push_back(nlohmann::json{{"line", key.first},
                                     {"slot", key.second},
                                     {"packet", packet_json(packet)}});
    return arr.dump();
}

TdmSchedule TdmSchedule::from_json(const std::string& text) {
    TdmSchedule out;
    for (const auto& entry : nlohmann::json::parse(text)) {
        out.reserve(entry.at("line").get<LineId>(), entry.at("slot").get<SlotIndex>(),
                    packet_from(entry.at("packet")));
    }
    return out;
}

}  // namespace ppdsim
