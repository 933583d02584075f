#include "spectra/runtime/pipeline.hpp"

#include "spectra/lowering/passes.hpp"
#include "spectra/sema/imports.hpp"
#include "spectra/syntax/parser.hpp"

namespace spectra::runtime {

sema::CheckedSpec check_file(const std::string& path) {
    return sema::check(sema::resolve_imports(path, sema::filesystem_loader()));
}

sema::CheckedSpec check_text(const std::string& text, const std::string& file_name) {
    return sema::check(sema::resolve_imports(syntax::parse(text, file_name), file_name, sema::filesystem_loader()));
}

SynthesisResult synthesize(const sema::CheckedSpec& checked) {
    SynthesisResult r;
    r.kernel = lowering::lower(checked);
    auto game = gr1::to_gr1(r.kernel);
    auto solution = gr1::solve(game);
    r.realizable = solution.realizable;
    if (r.realizable)
        r.controller = std::make_shared<gr1::SymbolicController>(
            gr1::synthesize_symbolic(game, solution.memo, r.kernel));
    return r;
}

} // namespace spectra::runtime
