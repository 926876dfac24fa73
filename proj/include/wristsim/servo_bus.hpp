#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Half-duplex serial servo protocol and a deterministic bus simulator.
// Frame layout: FF FF id len instr params... checksum, where len counts
// instr + params + checksum and checksum = ~(id + len + instr + sum(params)).

namespace wristsim {

struct protocol_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr uint8_t kBroadcastId = 254;

constexpr uint8_t kInstrPing = 0x01;
constexpr uint8_t kInstrRead = 0x02;
constexpr uint8_t kInstrWrite = 0x03;
constexpr uint8_t kInstrSyncWrite = 0x83;

// Register map (byte addresses, little endian 16-bit values).
constexpr uint8_t kRegGoalPosition = 42;
constexpr uint8_t kRegGoalSpeed = 46;
constexpr uint8_t kRegPresentPosition = 56;

// Reply status codes carried in the instruction slot.
constexpr uint8_t kStatusOk = 0;
constexpr uint8_t kStatusBadAddress = 1;
constexpr uint8_t kStatusBadValue = 2;
constexpr uint8_t kStatusBadInstruction = 4;

/// One frame in either direction. In replies `instruction` carries the
/// status code instead.
struct Frame {
  uint8_t id = 0;
  uint8_t instruction = 0;
  std::vector<uint8_t> params;

  bool operator==(const Frame&) const = default;
};

/// Serializes a frame. Throws protocol_error for id 255 or oversized params.
std::vector<uint8_t> encode_frame(const Frame& f);

/// Parses exactly one frame covering the whole buffer. Any defect (bad
/// header, short or trailing bytes, id 255, checksum mismatch) throws
/// protocol_error, so every single-bit corruption is rejected.
Frame decode_frame(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> make_ping(uint8_t id);
std::vector<uint8_t> make_read(uint8_t id, uint8_t addr, uint8_t count);
std::vector<uint8_t> make_write16(uint8_t id, uint8_t addr, uint16_t value);
std::vector<uint8_t> make_sync_write16(
    uint8_t addr, const std::vector<std::pair<uint8_t, uint16_t>>& goals);

std::string bytes_to_hex(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> hex_to_bytes(const std::string& hex);

/// A position servo integrated in tick space.
struct SimServo {
  uint8_t id = 1;
  double position_ticks = 2048.0;
  double goal_ticks = 2048.0;
  double speed_ticks_per_s = 500.0;

  void step(double dt_s);
};

/// Simulated bus holding the servo units. Transactions are strict: a frame
/// that fails to decode throws rather than being silently dropped.
class SimBus {
 public:
  explicit SimBus(std::vector<SimServo> servos);

  /// Handles one command frame. Returns the reply bytes, or nullopt when no
  /// unit answers (broadcast or unknown id).
  std::optional<std::vector<uint8_t>> transact(const std::vector<uint8_t>& tx);

  /// Advances every servo by dt seconds.
  void step(double dt_s);

  const std::vector<SimServo>& servos() const { return servos_; }
  SimServo* find(uint8_t id);

  /// Everything seen on the bus so far: "tx <hex>", "rx <hex>" and
  /// "step <seconds>" lines in order.
  const std::vector<std::string>& transcript() const { return transcript_; }

 private:
  std::vector<uint8_t> handle(const Frame& cmd, SimServo& servo);
  void apply_write(const Frame& cmd, SimServo& servo, uint8_t& status);

  std::vector<SimServo> servos_;
  std::vector<std::string> transcript_;
};

/// Executes a line-oriented script against the bus: `tx <hex>` sends a
/// frame, `step <seconds>` advances time, `#` starts a comment, blank lines
/// are skipped. Returns the bus transcript produced by the run. Unknown
/// commands or malformed arguments throw protocol_error.
std::vector<std::string> run_bus_script(SimBus& bus, const std::string& script);

}  // namespace wristsim
