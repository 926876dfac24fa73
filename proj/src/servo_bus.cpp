#include <wristsim/servo_bus.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wristsim {

namespace {

uint8_t frame_checksum(uint8_t id, uint8_t len, uint8_t instr,
                       const std::vector<uint8_t>& params) {
  unsigned sum = static_cast<unsigned>(id) + len + instr;
  for (uint8_t p : params) sum += p;
  return static_cast<uint8_t>(~sum & 0xFFu);
}

}  // namespace

std::vector<uint8_t> encode_frame(const Frame& f) {
  if (f.id == 0xFF) throw protocol_error("invalid unit id 255");
  if (f.params.size() > 253) {
    throw protocol_error("frame parameters exceed 253 bytes");
  }
  const auto len = static_cast<uint8_t>(f.params.size() + 2);
  std::vector<uint8_t> out{0xFF, 0xFF, f.id, len, f.instruction};
  out.insert(out.end(), f.params.begin(), f.params.end());
  out.push_back(frame_checksum(f.id, len, f.instruction, f.params));
  return out;
}

Frame decode_frame(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 6) throw protocol_error("frame shorter than 6 bytes");
  if (bytes[0] != 0xFF || bytes[1] != 0xFF) {
    throw protocol_error("missing frame header");
  }
  Frame f;
  f.id = bytes[2];
  if (f.id == 0xFF) throw protocol_error("invalid unit id 255");
  const uint8_t len = bytes[3];
  if (static_cast<size_t>(len) + 4 != bytes.size()) {
    throw protocol_error("frame length field does not cover the buffer");
  }
  f.instruction = bytes[4];
  f.params.assign(bytes.begin() + 5, bytes.end() - 1);
  if (bytes.back() != frame_checksum(f.id, len, f.instruction, f.params)) {
    throw protocol_error("frame checksum mismatch");
  }
  return f;
}

std::vector<uint8_t> make_ping(uint8_t id) {
  return encode_frame({id, kInstrPing, {}});
}

std::vector<uint8_t> make_read(uint8_t id, uint8_t addr, uint8_t count) {
  return encode_frame({id, kInstrRead, {addr, count}});
}

std::vector<uint8_t> make_write16(uint8_t id, uint8_t addr, uint16_t value) {
  return encode_frame({id, kInstrWrite,
                       {addr, static_cast<uint8_t>(value & 0xFF),
                        static_cast<uint8_t>(value >> 8)}});
}

std::vector<uint8_t> make_sync_write16(
    uint8_t addr, const std::vector<std::pair<uint8_t, uint16_t>>& goals) {
  Frame f{kBroadcastId, kInstrSyncWrite, {addr, 2}};
  for (const auto& [id, value] : goals) {
    f.params.push_back(id);
    f.params.push_back(static_cast<uint8_t>(value & 0xFF));
    f.params.push_back(static_cast<uint8_t>(value >> 8));
  }
  return encode_frame(f);
}

std::string bytes_to_hex(const std::vector<uint8_t>& bytes) {
  std::string out;
  char buf[4];
  for (size_t i = 0; i < bytes.size(); ++i) {
    std::snprintf(buf, sizeof buf, i ? " %02x" : "%02x", bytes[i]);
    out += buf;
  }
  return out;
}

std::vector<uint8_t> hex_to_bytes(const std::string& hex) {
  std::vector<uint8_t> out;
  std::istringstream in(hex);
  std::string tok;
  while (in >> tok) {
    if (tok.size() != 2 || !std::isxdigit(static_cast<unsigned char>(tok[0])) ||
        !std::isxdigit(static_cast<unsigned char>(tok[1]))) {
      throw protocol_error("bad hex byte: " + tok);
    }
    out.push_back(static_cast<uint8_t>(std::stoul(tok, nullptr, 16)));
  }
  return out;
}

void SimServo::step(double dt_s) {
  const double max_move = speed_ticks_per_s * dt_s;
  const double delta = goal_ticks - position_ticks;
  position_ticks += std::clamp(delta, -max_move, max_move);
  position_ticks = std::clamp(position_ticks, 0.0, 4095.0);
}

SimBus::SimBus(std::vector<SimServo> servos) : servos_(std::move(servos)) {}

SimServo* SimBus::find(uint8_t id) {
  for (auto& s : servos_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

namespace {

uint16_t read_u16(const std::vector<uint8_t>& p, size_t at) {
  return static_cast<uint16_t>(p[at] | (p[at + 1] << 8));
}

int reg_read(const SimServo& s, uint8_t addr) {
  const auto lo = [](double v) {
    return static_cast<int>(std::llround(std::clamp(v, 0.0, 4095.0)));
  };
  switch (addr) {
    case kRegGoalPosition: return lo(s.goal_ticks) & 0xFF;
    case kRegGoalPosition + 1: return lo(s.goal_ticks) >> 8;
    case kRegGoalSpeed:
      return static_cast<int>(std::llround(s.speed_ticks_per_s)) & 0xFF;
    case kRegGoalSpeed + 1:
      return static_cast<int>(std::llround(s.speed_ticks_per_s)) >> 8;
    case kRegPresentPosition: return lo(s.position_ticks) & 0xFF;
    case kRegPresentPosition + 1: return lo(s.position_ticks) >> 8;
    default: return -1;
  }
}

}  // namespace

void SimBus::apply_write(const Frame& cmd, SimServo& servo, uint8_t& status) {
  if (cmd.params.size() != 3) {
    status = kStatusBadValue;
    return;
  }
  const uint8_t addr = cmd.params[0];
  const uint16_t value = read_u16(cmd.params, 1);
  if (addr == kRegGoalPosition) {
    if (value > 4095) {
      status = kStatusBadValue;
      return;
    }
    servo.goal_ticks = value;
  } else if (addr == kRegGoalSpeed) {
    if (value == 0) {
      status = kStatusBadValue;
      return;
    }
    servo.speed_ticks_per_s = value;
  } else {
    status = kStatusBadAddress;
  }
}

std::vector<uint8_t> SimBus::handle(const Frame& cmd, SimServo& servo) {
  uint8_t status = kStatusOk;
  std::vector<uint8_t> data;
  switch (cmd.instruction) {
    case kInstrPing:
      break;
    case kInstrRead: {
      if (cmd.params.size() != 2) {
        status = kStatusBadValue;
        break;
      }
      const uint8_t addr = cmd.params[0];
      const uint8_t count = cmd.params[1];
      for (uint8_t k = 0; k < count; ++k) {
        const int v = reg_read(servo, static_cast<uint8_t>(addr + k));
        if (v < 0) {
          status = kStatusBadAddress;
          data.clear();
          break;
        }
        data.push_back(static_cast<uint8_t>(v));
      }
      break;
    }
    case kInstrWrite:
      apply_write(cmd, servo, status);
      break;
    case kInstrSyncWrite:
      // Only valid on the broadcast id; a unit addressed directly balks.
      status = kStatusBadInstruction;
      break;
    default:
      status = kStatusBadInstruction;
      break;
  }
  return encode_frame({servo.id, status, data});
}

std::optional<std::vector<uint8_t>> SimBus::transact(
    const std::vector<uint8_t>& tx) {
  const Frame cmd = decode_frame(tx);  // throws on any corruption
  transcript_.push_back("tx " + bytes_to_hex(tx));

  if (cmd.id == kBroadcastId) {
    if (cmd.instruction == kInstrSyncWrite) {
      // params: addr, bytes_per_unit, then id + data per unit.
      if (cmd.params.size() < 2) {
        throw protocol_error("sync write needs an address and a width");
      }
      const uint8_t addr = cmd.params[0];
      const uint8_t width = cmd.params[1];
      if (width != 2 || (cmd.params.size() - 2) % 3 != 0) {
        throw protocol_error("sync write payload must be 16-bit per unit");
      }
      for (size_t at = 2; at + 3 <= cmd.params.size(); at += 3) {
        SimServo* s = find(cmd.params[at]);
        if (!s) continue;
        uint8_t status = kStatusOk;
        Frame unit{s->id, kInstrWrite,
                   {addr, cmd.params[at + 1], cmd.params[at + 2]}};
        apply_write(unit, *s, status);
      }
    } else {
      for (auto& s : servos_) {
        uint8_t status = kStatusOk;
        if (cmd.instruction == kInstrWrite) {
          apply_write(cmd, s, status);
        } else if (cmd.instruction != kInstrPing) {
          status = kStatusBadInstruction;
        }
        (void)status;  // broadcast commands get no reply to report into
      }
    }
    return std::nullopt;
  }

  SimServo* servo = find(cmd.id);
  if (!servo) return std::nullopt;
  std::vector<uint8_t> reply = handle(cmd, *servo);
  transcript_.push_back("rx " + bytes_to_hex(reply));
  return reply;
}

void SimBus::step(double dt_s) {
  if (!(dt_s >= 0.0) || !std::isfinite(dt_s)) {
    throw protocol_error("step time must be finite and non-negative");
  }
  for (auto& s : servos_) s.step(dt_s);
  char buf[64];
  std::snprintf(buf, sizeof buf, "step %.6f", dt_s);
  transcript_.push_back(buf);
}

std::vector<std::string> run_bus_script(SimBus& bus,
                                        const std::string& script) {
  const size_t base = bus.transcript().size();
  std::istringstream in(script);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string cmd;
    if (!(ls >> cmd)) continue;
    if (cmd == "tx") {
      std::string rest;
      std::getline(ls, rest);
      bus.transact(hex_to_bytes(rest));
    } else if (cmd == "step") {
      double dt = 0.0;
      if (!(ls >> dt)) {
        throw protocol_error("line " + std::to_string(line_no) +
                             ": step needs a duration in seconds");
      }
      bus.step(dt);
    } else {
      throw protocol_error("line " + std::to_string(line_no) +
                           ": unknown script command: " + cmd);
    }
  }
  return {bus.transcript().begin() + static_cast<long>(base),
          bus.transcript().end()};
}

}  // namespace wristsim
