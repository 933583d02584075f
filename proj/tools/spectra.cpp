// spectra: command-line front end.
//
// Exit codes: 0 success, 1 diagnostics or unrealizable, 2 usage error.

#include "spectra/analysis/analyses.hpp"
#include "spectra/gr1/game.hpp"
#include "spectra/lowering/passes.hpp"
#include "spectra/runtime/controller_file.hpp"
#include "spectra/runtime/pipeline.hpp"
#include "spectra/service/service.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace spectra;

namespace {

constexpr int ok = 0, failed = 1, usage = 2;

void report(const Span& span, Severity severity, const std::string& message) {
    Diagnostic d;
    d.span = span;
    d.severity = severity;
    d.message = message;
    std::cout << format(d) << "\n";
}

int cmd_check(const std::string& file) {
    runtime::check_file(file);
    std::cout << file << ": ok\n";
    return ok;
}

void print_concrete(const gr1::SymbolicController& c, const gr1::ConcreteController& cc) {
    runtime::WalkSession view(std::make_shared<gr1::SymbolicController>(c));
    std::cout << "Concrete controller: " << cc.states.size() << " states, " << cc.initial.size()
              << " initial\n";
    auto show = [&](const std::vector<bool>& state) {
        std::string s;
        auto value = [&](const lowering::VarInfo* v) {
            std::vector<bool> bits;
            for (const auto& b : v->bits)
                bits.push_back(state[c.level(b) / 2]);
            return lowering::to_string(*v->decode(bits));
        };
        for (const auto* v : view.inputs())
            s += (s.empty() ? "" : " ") + v->name + "=" + value(v);
        for (const auto* v : view.outputs())
            s += (s.empty() ? "" : " ") + v->name + "=" + value(v);
        return s;
    };
    for (const auto& [x, id] : cc.initial)
        std::cout << "init -> s" << id << "\n";
    for (std::size_t s = 0; s < cc.states.size(); ++s) {
        std::cout << "s" << s << ": " << show(cc.states[s]) << "\n";
        for (const auto& [x2, t] : cc.successors[s])
            std::cout << "  -> s" << t << "\n";
    }
}

int cmd_synth(const std::string& file, const std::string& out, bool concrete, std::size_t max_states,
              bool emit_kernel) {
    auto checked = runtime::check_file(file);
    auto r = runtime::synthesize(checked);
    if (emit_kernel)
        std::cout << lowering::print(r.kernel) << "\n";
    if (!r.realizable) {
        std::cout << "Unrealizable\n";
        std::cout << "hint: run `spectra core " << file << "` for a minimal set of conflicting guarantees\n";
        return failed;
    }
    std::cout << "Realizable\n";
    if (!out.empty()) {
        runtime::save_file(*r.controller, out);
        std::cout << "controller written to " << out << "\n";
    }
    if (concrete) {
        try {
            print_concrete(*r.controller, gr1::enumerate_concrete(*r.controller, max_states));
        } catch (const gr1::StateLimitExceeded& e) {
            std::cerr << "error: " << e.what() << "\n";
            return failed;
        }
    }
    return ok;
}

int cmd_core(const std::string& file) {
    auto checked = runtime::check_file(file);
    analysis::CoreReport r;
    try {
        r = analysis::unrealizable_core(checked);
    } catch (const analysis::Realizable& e) {
        std::cerr << file << ": " << e.what() << "\n";
        return failed;
    }
    std::cout << "Unrealizable core of " << r.core.size() << " guarantee" << (r.core.size() == 1 ? "" : "s")
              << " (" << r.checks << " realizability checks)\n";
    for (const auto& c : r.core)
        report(c.span, Severity::Note, "core guarantee '" + c.label + "'");
    if (r.core.empty())
        std::cout << "the assumptions and generated constraints alone are unrealizable\n";
    return ok;
}

int cmd_lint(const std::string& file) {
    auto checked = runtime::check_file(file);
    int findings = 0;
    for (const auto& f : analysis::find_trivial(checked)) {
        ++findings;
        report(f.constraint.span, Severity::Warning,
               "'" + f.constraint.label + "' is trivially " +
                   (f.verdict == analysis::Triviality::TriviallyTrue ? "true" : "false"));
    }
    for (std::size_t i = 0; i < checked.ast.elements.size(); ++i) {
        const auto* m = std::get_if<syntax::Monitor>(&checked.ast.elements[i].node);
        if (!m)
            continue;
        auto v = analysis::check_monitor(checked, m->name);
        if (v.deterministic && v.complete)
            continue;
        ++findings;
        std::string msg = "monitor '" + m->name + "' is";
        if (!v.deterministic)
            msg += " not deterministic";
        if (!v.complete)
            msg += std::string(v.deterministic ? "" : " and") + " not complete";
        if (v.restricts_others)
            msg += " (it restricts other variables)";
        msg += "; " + v.violation + " fails at";
        for (const auto& [name, value] : v.witness)
            msg += " " + name + "=" + (value ? "1" : "0");
        report(checked.ast.elements[i].span, Severity::Warning, msg);
    }
    if (findings == 0)
        std::cout << file << ": no findings\n";
    return findings ? failed : ok;
}

int run_server(service::Service& svc, const std::string& host, int port, const std::string& session) {
    service::serve(svc, host, port, [&](int bound) {
        std::cout << "serving on http://" << host << ":" << bound << "/sessions\n";
        if (!session.empty())
            std::cout << "session: http://" << host << ":" << bound << "/sessions/" << session << "/state\n";
        std::cout.flush();
    });
    return ok;
}

int cmd_walk(const std::string& file, const std::string& host, int port) {
    std::shared_ptr<const gr1::SymbolicController> ctrl;
    if (file.size() > 5 && file.compare(file.size() - 5, 5, ".spcc") == 0) {
        ctrl = std::make_shared<gr1::SymbolicController>(runtime::load_file(file));
    } else {
        auto r = runtime::synthesize(runtime::check_file(file));
        if (!r.realizable) {
            std::cout << "Unrealizable\n";
            return failed;
        }
        ctrl = r.controller;
    }
    service::Service svc;
    auto id = svc.open(ctrl, file);
    return run_server(svc, host, port, id);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra specification toolchain"};
    app.require_subcommand(1);
    std::string file, out, host = "127.0.0.1";
    bool concrete = false, emit_kernel = false;
    std::size_t max_states = gr1::default_max_states;
    int port = 8080;
    long idle = 3600;

    auto* check = app.add_subcommand("check", "parse and check a specification");
    check->add_option("file", file, "specification")->required()->check(CLI::ExistingFile);
    auto* synth = app.add_subcommand("synth", "decide realizability and synthesize a controller");
    synth->add_option("file", file, "specification")->required()->check(CLI::ExistingFile);
    synth->add_option("-o,--output", out, "write the controller (.spcc)");
    synth->add_flag("--concrete", concrete, "print the explicit controller automaton");
    synth->add_option("--max-states", max_states, "state cap of --concrete")->check(CLI::PositiveNumber);
    synth->add_flag("--emit-kernel", emit_kernel, "print the lowered kernel specification");
    auto* core = app.add_subcommand("core", "minimal unrealizable subset of guarantees");
    core->add_option("file", file, "specification")->required()->check(CLI::ExistingFile);
    auto* lint = app.add_subcommand("lint", "trivial constraints and monitor checks");
    lint->add_option("file", file, "specification")->required()->check(CLI::ExistingFile);
    auto* walk = app.add_subcommand("walk", "serve a walk session for a specification or controller");
    walk->add_option("file", file, "specification or .spcc controller")->required()->check(CLI::ExistingFile);
    walk->add_option("--port", port, "port (0 picks a free one)");
    walk->add_option("--host", host, "address to bind");
    auto* serve = app.add_subcommand("serve", "run the walker service");
    serve->add_option("--port", port, "port (0 picks a free one)");
    serve->add_option("--host", host, "address to bind");
    serve->add_option("--idle-timeout", idle, "seconds before an idle session expires")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*check)
            return cmd_check(file);
        if (*synth)
            return cmd_synth(file, out, concrete, max_states, emit_kernel);
        if (*core)
            return cmd_core(file);
        if (*lint)
            return cmd_lint(file);
        if (*walk)
            return cmd_walk(file, host, port);
        service::Service svc{std::chrono::seconds(idle)};
        return run_server(svc, host, port, "");
    } catch (const SpecError& e) {
        std::cout << format(e.diagnostics());
        return failed;
    } catch (const gr1::ResourceError& e) {
        std::cerr << "error: " << e.what() << " (raise SPECTRA_BDD_NODES to allow more nodes)\n";
        return failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failed;
    }
}
