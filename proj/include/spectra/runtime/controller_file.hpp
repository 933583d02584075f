#pragma once

// Binary ".spcc" controller files.
//
// Layout, little-endian throughout:
//   "SPCC" u16 version u16 reserved(0)
//   u32 #env  u32 #sys  u32 memory_bits, then one string per kernel bit
//   u32 #variables, per variable: name, u8 kind, u8 type, u8 source,
//       u32 origin element, u8 origin kind, i64 lower, i64 upper,
//       u32 #values + strings, u32 #bits + strings
//   u32 #nodes, 16-byte records (u32 id, u32 level, u32 low, u32 high);
//       ids run 2, 3, ... in order (0 and 1 are the constants), children
//       always precede their parents
//   u32 root of init, trans, env_init, env_trans
//   u32 #assumptions, per assumption: name, u8 kind, u32 line,
//       u32 column, u32 root
// Strings are u32 length + UTF-8 bytes.

#include "spectra/gr1/game.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra::runtime {

inline constexpr std::uint16_t spcc_version = 1;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> save(const gr1::SymbolicController& ctrl);

/// Rebuilds the controller in `manager` (a fresh one when null). Throws
/// FormatError on a bad magic or version, a truncated or oversized file,
/// or a node table that is not dense, ordered and reduced.
gr1::SymbolicController load(const std::vector<std::uint8_t>& bytes,
                             std::shared_ptr<bdd::Manager> manager = nullptr);

void save_file(const gr1::SymbolicController& ctrl, const std::string& path);
gr1::SymbolicController load_file(const std::string& path);

} // namespace spectra::runtime
