// Acceptance run: one PASS/FAIL line per primary criterion, each with its
// measured value, the pinned tolerance and the elapsed time.

#include "test_support.hpp"

#include "spectra/analysis/analyses.hpp"
#include "spectra/runtime/controller_file.hpp"
#include "spectra/runtime/pipeline.hpp"
#include "spectra/runtime/session.hpp"
#include "spectra/sema/imports.hpp"
#include "spectra/syntax/lexer.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace spectra;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> problems;

    void fail(std::string why) {
        pass = false;
        if (problems.size() < 8)
            problems.push_back(std::move(why));
    }
};

// Runs one criterion; `limit` in seconds, 0 for none.
void criterion(const std::string& name, double limit, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const SpecError& e) {
        o.fail("specification rejected: " + format(e.diagnostics()));
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (limit > 0 && secs > limit)
        o.fail("took " + std::to_string(secs) + " s");
    failures += !o.pass;
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << secs << " s";
    if (limit > 0)
        line << ", limit " << limit << " s";
    line << "]";
    std::cout << line.str() << "\n";
    for (const auto& p : o.problems)
        std::cout << "    " << p << "\n";
    std::cout.flush();
}

// ------------------------------------------------------------------ corpus

const fs::path corpus_dir = SPECTRA_CORPUS_DIR;

std::vector<fs::path> corpus_files(bool with_libraries) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(corpus_dir))
        if (e.path().extension() == ".spectra" &&
            (with_libraries || e.path().parent_path() == corpus_dir))
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string stem(const fs::path& p) { return p.stem().string(); }

// Value of a "// key: value" header comment, if present.
std::optional<std::string> header(const fs::path& p, const std::string& key) {
    std::istringstream in(support::read_file(p.string()));
    std::string line;
    const std::string tag = "// " + key + ": ";
    while (std::getline(in, line))
        if (line.rfind(tag, 0) == 0)
            return line.substr(tag.size());
    return std::nullopt;
}

std::size_t kernel_bits(const lowering::KernelSpec& k) { return k.env_vars.size() + k.sys_vars.size(); }

// ---------------------------------------------------------------- coverage

class Coverage {
public:
    std::set<std::string> seen;

    void spec(const syntax::SpecAst& s) {
        if (!s.imports.empty())
            seen.insert("import");
        for (const auto& el : s.elements)
            element(el);
    }

    void keywords(const std::string& text, const std::string& file) {
        for (const auto& t : syntax::tokenize(text, file))
            if (syntax::keyword(t.text))
                seen.insert("kw " + t.text);
        if (text.find("//") != std::string::npos)
            seen.insert("line comment");
        if (text.find("/*") != std::string::npos)
            seen.insert("block comment");
    }

private:
    void element(const syntax::Element& el) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, syntax::VarDecl>) {
                    seen.insert(x.kind == syntax::VarKind::Env ? "env decl" : "sys decl");
                    type(x.type);
                } else if constexpr (std::is_same_v<T, syntax::Constraint>) {
                    seen.insert(x.role == syntax::Role::Assumption ? "asm" : "gar");
                    if (x.name)
                        seen.insert("named constraint");
                    temp(x.body);
                } else if constexpr (std::is_same_v<T, syntax::Define>) {
                    seen.insert("define");
                    expr(*x.expr);
                } else if constexpr (std::is_same_v<T, syntax::TypeDef>) {
                    seen.insert("typedef");
                    type(x.type);
                } else if constexpr (std::is_same_v<T, syntax::Predicate>) {
                    seen.insert("predicate");
                    for (const auto& p : x.params) {
                        seen.insert("typed parameter");
                        type(p.type);
                    }
                    expr(*x.body);
                } else if constexpr (std::is_same_v<T, syntax::Monitor>) {
                    seen.insert("monitor");
                    type(x.type);
                    for (const auto& c : x.constraints)
                        temp(c);
                } else if constexpr (std::is_same_v<T, syntax::Pattern>) {
                    seen.insert("pattern");
                    if (!x.vars.empty())
                        seen.insert("pattern var");
                    for (const auto& v : x.vars)
                        type(v.type);
                    for (const auto& c : x.constraints)
                        temp(c);
                }
            },
            el.node);
    }

    void type(const syntax::TypeExpr& t) {
        static const char* names[] = {"type boolean", "type enum", "type int", "type name"};
        seen.insert(names[t.node.index()]);
    }

    void temp(const syntax::TempConstraint& c) {
        static const char* names[] = {"no keyword", "ini", "trans", "alw", "alwEv"};
        seen.insert(names[static_cast<int>(c.kind)]);
        expr(*c.expr);
    }

    void expr(const syntax::Expr& e) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, syntax::BoolConst>) {
                    seen.insert(x.value ? "true" : "false");
                } else if constexpr (std::is_same_v<T, syntax::IntLit>) {
                    seen.insert("int literal");
                } else if constexpr (std::is_same_v<T, syntax::NameRef>) {
                    seen.insert("name");
                } else if constexpr (std::is_same_v<T, syntax::Instance>) {
                    seen.insert("instance");
                    for (const auto& a : x.args)
                        expr(*a);
                } else if constexpr (std::is_same_v<T, syntax::Unary>) {
                    seen.insert(std::string("unary ") + syntax::spelling(x.op));
                    expr(*x.operand);
                } else {
                    seen.insert(std::string("binary ") + syntax::spelling(x.op));
                    expr(*x.lhs);
                    expr(*x.rhs);
                }
            },
            e.node);
    }
};

std::vector<std::string> required_productions() {
    std::vector<std::string> r = {
        "import", "env decl", "sys decl", "asm", "gar", "named constraint", "define", "typedef",
        "predicate", "typed parameter", "monitor", "pattern", "pattern var", "type boolean",
        "type enum", "type int", "type name", "ini", "trans", "alw", "alwEv", "true", "false",
        "int literal", "name", "instance", "line comment", "block comment"};
    for (auto op : {syntax::UnaryOp::Not, syntax::UnaryOp::Next, syntax::UnaryOp::Neg, syntax::UnaryOp::Prev,
                    syntax::UnaryOp::Historically, syntax::UnaryOp::Once})
        r.push_back(std::string("unary ") + syntax::spelling(op));
    for (int op = 0; op <= static_cast<int>(syntax::BinaryOp::Since); ++op)
        r.push_back(std::string("binary ") + syntax::spelling(static_cast<syntax::BinaryOp>(op)));
    // every keyword, both spellings where the language has two
    for (const char* kw :
         {"spec", "import", "sys", "output", "env", "input", "boolean", "Int", "asm", "assumption", "gar",
          "guarantee", "ini", "initially", "trans", "alw", "always", "alwEv", "alwaysEventually", "define",
          "type", "predicate", "monitor", "pattern", "var", "true", "false", "next", "mod", "Y", "PREV", "H",
          "HISTORICALLY", "O", "ONCE", "S", "SINCE"})
        r.push_back(std::string("kw ") + kw);
    return r;
}

// ----------------------------------------------------------------- features

// Language features removed by the lowering passes that a checked spec uses.
std::set<std::string> features(const syntax::SpecAst& s, const lowering::KernelSpec& k) {
    std::set<std::string> f;
    std::function<void(const syntax::Expr&)> walk = [&](const syntax::Expr& e) {
        if (const auto* u = std::get_if<syntax::Unary>(&e.node)) {
            if (u->op == syntax::UnaryOp::Prev || u->op == syntax::UnaryOp::Once ||
                u->op == syntax::UnaryOp::Historically)
                f.insert("pastltl");
            walk(*u->operand);
        } else if (const auto* b = std::get_if<syntax::Binary>(&e.node)) {
            if (b->op == syntax::BinaryOp::Since)
                f.insert("pastltl");
            walk(*b->lhs);
            walk(*b->rhs);
        } else if (const auto* i = std::get_if<syntax::Instance>(&e.node)) {
            for (const auto& a : i->args)
                walk(*a);
        }
    };
    for (const auto& el : s.elements) {
        if (std::holds_alternative<syntax::Define>(el.node))
            f.insert("define");
        if (std::holds_alternative<syntax::TypeDef>(el.node))
            f.insert("typedef");
        if (std::holds_alternative<syntax::Predicate>(el.node))
            f.insert("predicate");
        if (std::holds_alternative<syntax::Pattern>(el.node))
            f.insert("pattern");
        if (const auto* m = std::get_if<syntax::Monitor>(&el.node)) {
            f.insert("monitor");
            for (const auto& c : m->constraints) {
                if (c.kind == syntax::ConstraintKind::Alw)
                    f.insert("alw");
                walk(*c.expr);
            }
        }
        if (const auto* c = std::get_if<syntax::Constraint>(&el.node)) {
            if (c->body.kind == syntax::ConstraintKind::Alw)
                f.insert("alw");
            walk(*c->body.expr);
        }
        if (const auto* d = std::get_if<syntax::Define>(&el.node))
            walk(*d->expr);
    }
    for (const auto& v : k.variables) {
        if (v.type == lowering::VarInfo::Type::Enum)
            f.insert("enum");
        if (v.type == lowering::VarInfo::Type::Int)
            f.insert("int");
    }
    return f;
}

// -------------------------------------------------------------- synthesis

struct Synthesized {
    fs::path path;
    runtime::SynthesisResult result;
};

// Every top-level corpus spec through the pipeline, once.
const std::vector<Synthesized>& synthesized_corpus() {
    static std::vector<Synthesized> all = [] {
        std::vector<Synthesized> out;
        for (const auto& p : corpus_files(false))
            out.push_back({p, runtime::synthesize(runtime::check_file(p.string()))});
        return out;
    }();
    return all;
}

using Named = std::map<std::string, bool>;

Named named_state(const gr1::SymbolicController& c, const std::vector<bool>& raw) {
    Named out;
    for (std::size_t i = 0; i < c.env_vars.size(); ++i)
        out[c.env_vars[i]] = raw[i];
    for (std::size_t i = 0; i < c.sys_vars.size(); ++i)
        out[c.sys_vars[i]] = raw[c.env_vars.size() + i];
    return out;
}

bool holds(const lowering::KernelConstraint& k, const Named& cur, const Named* prev) {
    return oracle::eval(*k.expr, [&](const std::string& n, bool primed) {
        return primed || !prev ? cur.at(n) : prev->at(n);
    });
}

// First violated ini (prev null) or trans guarantee on a step.
std::optional<std::string> violated_guarantee(const lowering::KernelSpec& k, const Named& cur, const Named* prev) {
    const auto want = prev ? syntax::ConstraintKind::Trans : syntax::ConstraintKind::Ini;
    for (const auto& g : k.guarantees)
        if (g.kind == want && !holds(g, cur, prev))
            return g.name.empty() ? std::string("unnamed guarantee") : g.name;
    return std::nullopt;
}

bool assumptions_hold(const lowering::KernelSpec& k, const Named& cur, const Named* prev) {
    const auto want = prev ? syntax::ConstraintKind::Trans : syntax::ConstraintKind::Ini;
    for (const auto& a : k.assumptions)
        if (a.kind == want && !holds(a, cur, prev))
            return false;
    return true;
}

std::vector<std::vector<bool>> justice_labels(const std::vector<lowering::KernelConstraint>& cs,
                                              const gr1::SymbolicController& c,
                                              const gr1::ConcreteController& cc) {
    std::vector<std::vector<bool>> out;
    for (const auto& k : cs) {
        if (k.kind != syntax::ConstraintKind::AlwEv)
            continue;
        out.emplace_back();
        for (const auto& s : cc.states)
            out.back().push_back(holds(k, named_state(c, s), nullptr));
    }
    if (out.empty())
        out.emplace_back(cc.states.size(), true);
    return out;
}

// ----------------------------------------------------------------- criteria

Outcome grammar_coverage() {
    Outcome o;
    Coverage cov;
    auto files = corpus_files(true);
    for (const auto& p : files) {
        const std::string text = support::read_file(p.string());
        cov.keywords(text, p.string());
        auto a = syntax::parse(text, p.string());
        cov.spec(a);
        const std::string printed = syntax::print(a);
        auto b = syntax::parse(printed, p.string());
        if (!syntax::equal(a, b) || syntax::print(b) != printed) {
            o.fail(stem(p) + ": print/parse is not a fixpoint");
            continue;
        }
        auto loader = sema::filesystem_loader();
        auto ca = sema::check(sema::resolve_imports(a, p.string(), loader));
        auto cb = sema::check(sema::resolve_imports(b, p.string(), loader));
        if (syntax::print(ca.ast) != syntax::print(cb.ast) || ca.types.size() != cb.types.size())
            o.fail(stem(p) + ": re-check differs");
    }
    std::size_t missing = 0;
    for (const auto& r : required_productions())
        if (!cov.seen.count(r)) {
            ++missing;
            o.fail("not exercised: " + r);
        }
    if (files.size() < 30)
        o.fail("corpus has " + std::to_string(files.size()) + " specs, need 30");
    o.detail = std::to_string(files.size()) + " specs (need >= 30), " +
               std::to_string(required_productions().size() - missing) + "/" +
               std::to_string(required_productions().size()) + " productions and keywords, round-trip fixpoint";
    return o;
}

Outcome lowering_suite() {
    Outcome o;
    std::size_t suite = 0, hand = 0;
    std::set<std::string> covered;
    for (const auto& p : corpus_files(false)) {
        auto checked = runtime::check_file(p.string());
        auto kernel = lowering::lower(checked);
        if (kernel_bits(kernel) > oracle::max_bits)
            continue;
        ++suite;
        auto f = features(checked.ast, kernel);
        covered.insert(f.begin(), f.end());
        const bool symbolic = gr1::solve(gr1::to_gr1(kernel)).realizable;
        const bool explicit_ = oracle::solve_explicit(kernel);
        if (symbolic != explicit_)
            o.fail(stem(p) + ": solver says " + (symbolic ? "realizable" : "unrealizable") + ", oracle disagrees");
        if (auto expect = header(p, "expect")) {
            ++hand;
            if ((*expect == "realizable") != explicit_)
                o.fail(stem(p) + ": hand analysis says " + *expect);
        }
    }
    for (const char* feat : {"define", "typedef", "predicate", "pattern", "monitor", "alw", "pastltl", "enum", "int"})
        if (!covered.count(feat))
            o.fail(std::string("no suite spec uses ") + feat);
    if (suite < 20)
        o.fail("only " + std::to_string(suite) + " specs within " + std::to_string(oracle::max_bits) + " bits");
    o.detail = std::to_string(suite) + " specs <= 12 kernel booleans (need >= 20), " +
               std::to_string(covered.size()) + " lowering features, solver = oracle on all, " +
               std::to_string(hand) + " also match hand verdicts";
    return o;
}

Outcome pastltl_translation() {
    Outcome o;
    std::mt19937 rng(7103);
    std::size_t positions = 0;
    for (int n = 0; n < 1000; ++n) {
        auto f = support::random_past(rng, 3);
        std::string text = "spec R env boolean a; env boolean b; env boolean c; sys boolean out; "
                           "gar alw out <-> (" + syntax::print(*f) + ");";
        auto kernel = support::lower_text(text);
        oracle::Trace trace;
        const std::size_t len = 1 + rng() % 8;
        for (std::size_t i = 0; i < len; ++i)
            trace.states.push_back({{"a", bool(rng() % 2)}, {"b", bool(rng() % 2)}, {"c", bool(rng() % 2)}});
        auto run = support::run_guarantees(kernel, trace.states);
        for (std::size_t i = 0; i < len; ++i, ++positions)
            if (run[i].at("out") != oracle::eval_pastltl(*f, trace, i))
                o.fail(syntax::print(*f) + " differs at step " + std::to_string(i));
    }
    o.detail = "1000 formula/trace pairs, " + std::to_string(positions) + " positions, exact agreement";
    return o;
}

Outcome encoding() {
    Outcome o;
    std::size_t vars = 0;
    bool motor = false;
    for (const auto& p : corpus_files(false)) {
        auto kernel = lowering::lower(runtime::check_file(p.string()));
        for (const auto& v : kernel.variables) {
            if (v.type == lowering::VarInfo::Type::Boolean)
                continue;
            ++vars;
            const lowering::KernelConstraint* valid = nullptr;
            for (const auto* list : {&kernel.assumptions, &kernel.guarantees})
                for (const auto& k : *list)
                    if (k.name == std::string(lowering::fresh_prefix) + "_valid_" + v.name + "_ini")
                        valid = &k;
            std::uint64_t decoded = 0, admitted = 0;
            const std::uint64_t codes = std::uint64_t{1} << v.bits.size();
            for (std::uint64_t code = 0; code < codes; ++code) {
                std::vector<bool> bits;
                Named named;
                for (std::size_t b = 0; b < v.bits.size(); ++b) {
                    bits.push_back((code >> b) & 1u);
                    named[v.bits[b]] = bits.back();
                }
                auto value = v.decode(bits);
                const bool ok = valid ? holds(*valid, named, nullptr) : true;
                admitted += ok;
                if (value) {
                    ++decoded;
                    if (v.encode(*value) != bits)
                        o.fail(stem(p) + ": " + v.name + " encode(decode) differs");
                }
                if (ok != value.has_value())
                    o.fail(stem(p) + ": " + v.name + " validity constraint disagrees with decode");
            }
            if (decoded != v.cardinality() || admitted != v.cardinality())
                o.fail(stem(p) + ": " + v.name + " has " + std::to_string(admitted) + " valid codes");
            if (stem(p) == "forklift" && v.name == "mLeft") {
                motor = true;
                if (codes != 4 || admitted != 3)
                    o.fail("MotorCmd: " + std::to_string(admitted) + " of " + std::to_string(codes) + " codes valid");
            }
        }
    }
    if (!motor)
        o.fail("forklift MotorCmd variable not found");
    o.detail = std::to_string(vars) + " enum/int variables, bijection and valid-code count exact, MotorCmd 3 of 4";
    return o;
}

Outcome bdd_canonicity() {
    Outcome o;
    std::mt19937 rng(661);
    bdd::Manager m;
    const std::vector<std::string> atoms = {"v0", "v1", "v2", "v3", "v4", "v5"};
    std::vector<std::uint64_t> tables;
    std::vector<bdd::Bdd> handles;
    for (int n = 0; n < 1000; ++n) {
        const unsigned nv = 1 + rng() % 6;
        auto e = syntax::parse_expression(
            support::random_formula(rng, std::vector<std::string>(atoms.begin(), atoms.begin() + nv), 4));
        auto level = [](const std::string& name) { return static_cast<std::uint32_t>(name[1] - '0'); };
        handles.push_back(gr1::translate(m, *e, level));
        std::uint64_t table = 0;
        for (unsigned a = 0; a < 64; ++a)
            if (oracle::eval(*e, [&](const std::string& name, bool) { return (a >> level(name)) & 1u; }))
                table |= std::uint64_t{1} << a;
        tables.push_back(table);
    }
    std::size_t equal_pairs = 0;
    for (std::size_t i = 0; i < handles.size(); ++i)
        for (std::size_t j = i + 1; j < handles.size(); ++j) {
            const bool same_table = tables[i] == tables[j];
            equal_pairs += same_table;
            if ((handles[i] == handles[j]) != same_table)
                o.fail("formulas " + std::to_string(i) + " and " + std::to_string(j) + " break canonicity");
        }
    if (auto audit = m.audit(); !audit.empty())
        o.fail("unique table: " + audit);
    o.detail = "1000 formulas over <= 6 variables, 499500 pairs (" + std::to_string(equal_pairs) +
               " equivalent), handle equality <=> truth-table equality";
    return o;
}

Outcome controller_soundness() {
    Outcome o;
    std::mt19937 rng(424242);
    std::size_t specs = 0, steps = 0, restarts = 0, products = 0, product_states = 0;
    constexpr std::size_t steps_per_spec = 10000;
    for (const auto& s : synthesized_corpus()) {
        if (!s.result.realizable)
            continue;
        ++specs;
        const auto& k = s.result.kernel;
        const auto& ctrl = s.result.controller;
        // random legal environment play
        std::optional<runtime::WalkSession> walk;
        std::optional<Named> prev;
        for (std::size_t n = 0; n < steps_per_spec; ++n) {
            if (!walk)
                walk.emplace(ctrl);
            auto opts = walk->env_options();
            if (opts.options.empty()) { // the environment has no legal move left
                ++restarts;
                walk.reset();
                prev.reset();
                continue;
            }
            const auto& choice = opts.options[rng() % opts.options.size()];
            if (walk->started())
                walk->step(choice);
            else
                walk->initial(choice);
            ++steps;
            auto cur = named_state(*ctrl, walk->raw_state(walk->cursor()));
            if (!assumptions_hold(k, cur, prev ? &*prev : nullptr))
                o.fail(stem(s.path) + ": offered input breaks an assumption");
            if (auto g = violated_guarantee(k, cur, prev ? &*prev : nullptr))
                o.fail(stem(s.path) + ": step " + std::to_string(n) + " violates " + *g);
            prev = cur;
        }
        // explicit closed loop: safety on every edge, fairness on every SCC
        gr1::ConcreteController cc;
        try {
            cc = gr1::enumerate_concrete(*ctrl, 10000);
        } catch (const gr1::StateLimitExceeded&) {
            continue;
        }
        ++products;
        product_states += cc.states.size();
        oracle::Graph g;
        for (const auto& [x, id] : cc.initial) {
            g.initial.push_back(id);
            if (violated_guarantee(k, named_state(*ctrl, cc.states[id]), nullptr))
                o.fail(stem(s.path) + ": initial state violates a guarantee");
        }
        for (std::size_t i = 0; i < cc.states.size(); ++i) {
            const auto from = named_state(*ctrl, cc.states[i]);
            g.succ.emplace_back();
            for (const auto& [x2, t] : cc.successors[i]) {
                g.succ.back().push_back(t);
                if (violated_guarantee(k, named_state(*ctrl, cc.states[t]), &from))
                    o.fail(stem(s.path) + ": product edge violates a guarantee");
            }
        }
        g.env_justice = justice_labels(k.assumptions, *ctrl, cc);
        g.sys_justice = justice_labels(k.guarantees, *ctrl, cc);
        if (auto bad = oracle::find_unfair_cycle(g))
            o.fail(stem(s.path) + ": fair SCC of " + std::to_string(bad->component.size()) +
                   " states misses guarantee justice " + std::to_string(bad->justice));
    }
    o.detail = std::to_string(specs) + " realizable specs x " + std::to_string(steps_per_spec) + " steps (" +
               std::to_string(steps) + " taken, " + std::to_string(restarts) +
               " env deadlocks restarted), 0 safety violations allowed; " + std::to_string(products) +
               " products (" + std::to_string(product_states) + " states) SCC-checked";
    return o;
}

Outcome known_verdicts() {
    Outcome o;
    struct Case {
        const char* file;
        bool realizable;
    };
    for (auto c : {Case{"mirror", true}, Case{"clairvoyant", false}, Case{"fair_assumed", true},
                   Case{"fair_unassumed", false}}) {
        auto kernel = lowering::lower(runtime::check_file((corpus_dir / (std::string(c.file) + ".spectra")).string()));
        if (gr1::solve(gr1::to_gr1(kernel)).realizable != c.realizable)
            o.fail(std::string(c.file) + ": expected " + (c.realizable ? "realizable" : "unrealizable"));
    }
    o.detail = "alw y<->x realizable, trans y<->next(x) unrealizable, alwEv(x&y) realizable iff asm alwEv x";
    return o;
}

Outcome ddmin_core() {
    Outcome o;
    std::size_t specs = 0, subsets = 0;
    for (const auto& p : corpus_files(false)) {
        if (stem(p).rfind("core_", 0) != 0)
            continue;
        ++specs;
        auto checked = runtime::check_file(p.string());
        auto report = analysis::unrealizable_core(checked);
        std::vector<std::size_t> gars; // element indices of guarantees
        for (const auto& c : analysis::source_constraints(checked.ast))
            if (c.role == syntax::Role::Guarantee)
                gars.push_back(c.element);
        if (gars.size() > 6) {
            o.fail(stem(p) + ": more than 6 guarantees");
            continue;
        }
        // verdict of every guarantee subset by the explicit oracle
        std::vector<bool> realizable(std::size_t{1} << gars.size());
        for (std::size_t mask = 0; mask < realizable.size(); ++mask, ++subsets) {
            syntax::SpecAst sub = checked.ast;
            sub.elements.clear();
            for (std::size_t i = 0; i < checked.ast.elements.size(); ++i) {
                auto at = std::find(gars.begin(), gars.end(), i);
                if (at == gars.end() || (mask >> (at - gars.begin())) & 1u)
                    sub.elements.push_back(checked.ast.elements[i]);
            }
            realizable[mask] = oracle::solve_explicit(lowering::lower(sema::check(std::move(sub))));
        }
        std::size_t core = 0;
        std::string names;
        for (const auto& c : report.core) {
            core |= std::size_t{1} << (std::find(gars.begin(), gars.end(), c.element) - gars.begin());
            names += (names.empty() ? "" : " ") + c.label;
        }
        if (realizable[core])
            o.fail(stem(p) + ": reported core is realizable");
        for (std::size_t b = 0; b < gars.size(); ++b)
            if ((core >> b) & 1u && !realizable[core & ~(std::size_t{1} << b)])
                o.fail(stem(p) + ": core is not 1-minimal");
        if (auto expect = header(p, "core"); expect && *expect != names)
            o.fail(stem(p) + ": core {" + names + "}, hand analysis {" + *expect + "}");
    }
    if (specs < 5)
        o.fail("only " + std::to_string(specs) + " core specs");
    o.detail = std::to_string(specs) + " unrealizable specs (need >= 5), " + std::to_string(subsets) +
               " subsets decided by the oracle, every core unrealizable and 1-minimal";
    return o;
}

Outcome forklift() {
    Outcome o;
    auto bits_of = [](const lowering::KernelSpec& k) {
        std::map<std::string, std::size_t> m;
        for (const auto& v : k.variables)
            m[v.name] = v.bits.size();
        return m;
    };
    // hand count: three-valued enums need 2 bits, booleans and the monitor
    // and pattern variables 1 each
    auto full = runtime::synthesize(runtime::check_file((corpus_dir / "forklift.spectra").string()));
    const std::map<std::string, std::size_t> full_hand = {
        {"atStation", 1}, {"cargo", 2}, {"obstacle", 2}, {"liftAck", 1}, {"emgOff", 1}, {"mLeft", 2},
        {"mRight", 2}, {"lift", 2}, {"waitingForLifting", 1}, {"loaded", 1}};
    auto full_bits = bits_of(full.kernel);
    for (const auto& [name, n] : full_hand)
        if (full_bits[name] != n)
            o.fail("forklift: " + name + " has " + std::to_string(full_bits[name]) + " bits, expected " +
                   std::to_string(n));
    if (full.kernel.env_vars.size() != 7 || full.kernel.sys_vars.size() != 9)
        o.fail("forklift: |X|=" + std::to_string(full.kernel.env_vars.size()) +
               " |Y|=" + std::to_string(full.kernel.sys_vars.size()) + ", expected 7 and 9");

    auto reduced_checked = runtime::check_file((corpus_dir / "forklift_reduced.spectra").string());
    auto reduced = lowering::lower(reduced_checked);
    if (reduced.env_vars.size() != 5 || reduced.sys_vars.size() != 7)
        o.fail("reduced: |X|=" + std::to_string(reduced.env_vars.size()) +
               " |Y|=" + std::to_string(reduced.sys_vars.size()) + ", expected 5 and 7");
    const bool symbolic = gr1::solve(gr1::to_gr1(reduced)).realizable;
    const bool explicit_ = oracle::solve_explicit(reduced);
    if (symbolic != explicit_)
        o.fail("reduced: solver and oracle disagree");
    auto verdict = [](bool r) { return r ? std::string("realizable") : std::string("unrealizable"); };
    o.detail = "full |X|=7 |Y|=9 as hand-counted, verdict " + verdict(full.realizable) +
               "; reduced |X|=5 |Y|=7, solver " + verdict(symbolic) + " = oracle " + verdict(explicit_);
    return o;
}

Outcome controller_files() {
    Outcome o;
    std::size_t n = 0, bytes = 0;
    for (const auto& s : synthesized_corpus()) {
        if (!s.result.realizable)
            continue;
        ++n;
        auto first = runtime::save(*s.result.controller);
        auto again = runtime::save(runtime::load(first));
        bytes += first.size();
        if (first != again)
            o.fail(stem(s.path) + ": re-save differs");
        auto shared = runtime::load(first, s.result.controller->manager);
        if (shared.init != s.result.controller->init || shared.trans != s.result.controller->trans)
            o.fail(stem(s.path) + ": reloaded diagrams differ");
    }
    o.detail = std::to_string(n) + " controllers (" + std::to_string(bytes) +
               " bytes), load(save(c)) re-saves bit-identically";
    return o;
}

} // namespace

int main() {
    std::cout << "spectra acceptance, corpus " << corpus_dir.string() << "\n";
    criterion("grammar-coverage", 5, grammar_coverage);
    criterion("lowering-vs-oracle", 60, lowering_suite);
    criterion("pastltl-translation", 0, pastltl_translation);
    criterion("enum-int-encoding", 0, encoding);
    criterion("bdd-canonicity", 0, bdd_canonicity);
    criterion("controller-soundness", 120, controller_soundness);
    criterion("known-verdict-games", 0, known_verdicts);
    criterion("ddmin-core", 0, ddmin_core);
    criterion("forklift-reconstruction", 0, forklift);
    criterion("controller-file-roundtrip", 0, controller_files);
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
              << "\n";
    return failures ? 1 : 0;
}
