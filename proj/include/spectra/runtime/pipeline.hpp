#pragma once

// Front-to-back driver: read, resolve imports, check, lower, solve and,
// when realizable, extract the controller.

#include "spectra/gr1/game.hpp"
#include "spectra/lowering/kernel.hpp"
#include "spectra/sema/check.hpp"

#include <memory>
#include <optional>
#include <string>

namespace spectra::runtime {

/// Parses `path` with its imports and checks it. Throws SpecError.
sema::CheckedSpec check_file(const std::string& path);
sema::CheckedSpec check_text(const std::string& text, const std::string& file_name = "<input>");

struct SynthesisResult {
    lowering::KernelSpec kernel;
    bool realizable = false;
    /// Set when realizable.
    std::shared_ptr<gr1::SymbolicController> controller;
};

/// Every stage in a fresh decision-diagram manager (node cap from
/// SPECTRA_BDD_NODES). Throws SpecError or gr1::ResourceError.
SynthesisResult synthesize(const sema::CheckedSpec& checked);

} // namespace spectra::runtime
