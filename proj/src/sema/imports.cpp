#include "spectra/sema/imports.hpp"

#include "spectra/syntax/parser.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace spectra::sema {

using namespace syntax;
namespace fs = std::filesystem;

FileLoader filesystem_loader() {
    return [](const std::string& path) -> std::optional<std::string> {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
}

namespace {

struct Library {
    const Element* element;
    std::string file;
};

class Resolver {
public:
    explicit Resolver(const FileLoader& loader) : loader_(loader) {}

    SpecAst run(SpecAst entry, const std::string& entry_path) {
        const std::string entry_key = normalize(entry_path);
        active_.insert(entry_key);
        for (const auto& imp : entry.imports)
            load(resolve(entry_path, imp.path), imp.span);
        active_.erase(entry_key);

        std::set<std::string> local;
        for (const auto& el : entry.elements)
            local.insert(element_name(el));

        // Breadth-first over instance names reachable from the entry.
        std::vector<std::string> pending;
        for (const auto& el : entry.elements)
            collect_instances(el, pending);
        std::set<std::string> copied;
        std::vector<Element> appended;
        while (!pending.empty()) {
            std::string name = pending.back();
            pending.pop_back();
            if (local.count(name) || copied.count(name))
                continue;
            auto it = library_.find(name);
            if (it == library_.end())
                continue; // unknown names are reported by the checker
            copied.insert(name);
            const Element& el = *it->second.element;
            if (const auto* p = std::get_if<Predicate>(&el.node))
                check_imported_predicate(*p);
            appended.push_back(el);
            collect_instances(el, pending);
        }
        if (!diags_.empty())
            throw SpecError(std::move(diags_));
        // keep a stable order: library declaration order
        std::sort(appended.begin(), appended.end(), [this](const Element& a, const Element& b) {
            return order_.at(element_name(a)) < order_.at(element_name(b));
        });
        entry.imports.clear();
        for (auto& el : appended)
            entry.elements.push_back(std::move(el));
        return entry;
    }

private:
    const FileLoader& loader_;
    std::set<std::string> active_;
    std::set<std::string> done_;
    std::vector<std::unique_ptr<SpecAst>> files_;
    std::map<std::string, Library> library_;
    std::map<std::string, std::size_t> order_;
    std::vector<Diagnostic> diags_;

    static std::string normalize(const std::string& path) {
        return fs::path(path).lexically_normal().generic_string();
    }

    static std::string resolve(const std::string& from, const std::string& target) {
        fs::path t(target);
        if (t.is_absolute())
            return normalize(target);
        return normalize((fs::path(from).parent_path() / t).generic_string());
    }

    void error(const Span& span, std::string message) {
        diags_.push_back(Diagnostic{span, Severity::Error, std::move(message), {}});
    }

    void load(const std::string& path, const Span& use) {
        if (active_.count(path)) {
            error(use, "import cycle through '" + path + "'");
            return;
        }
        if (done_.count(path))
            return;
        auto text = loader_(path);
        if (!text) {
            error(use, "cannot read imported file '" + path + "'");
            return;
        }
        std::unique_ptr<SpecAst> ast;
        try {
            ast = std::make_unique<SpecAst>(parse(*text, path));
        } catch (const SpecError& e) {
            for (const auto& d : e.diagnostics())
                diags_.push_back(d);
            return;
        }
        active_.insert(path);
        for (const auto& imp : ast->imports)
            load(resolve(path, imp.path), imp.span);
        active_.erase(path);
        done_.insert(path);
        for (const auto& el : ast->elements) {
            if (!std::holds_alternative<Predicate>(el.node) &&
                !std::holds_alternative<Pattern>(el.node))
                continue;
            std::string name = element_name(el);
            auto [it, inserted] = library_.emplace(name, Library{&el, path});
            if (!inserted) {
                error(el.span, "pattern or predicate '" + name + "' is also defined in '" +
                                   it->second.file + "'");
                continue;
            }
            order_[name] = order_.size();
        }
        files_.push_back(std::move(ast));
    }

    static void instances_in(const Expr& e, std::vector<std::string>& out) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Instance>) {
                    out.push_back(x.name);
                    for (const auto& a : x.args)
                        instances_in(*a, out);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    instances_in(*x.operand, out);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    instances_in(*x.lhs, out);
                    instances_in(*x.rhs, out);
                }
            },
            e.node);
    }

    static void collect_instances(const Element& el, std::vector<std::string>& out) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Constraint>) {
                    instances_in(*x.body.expr, out);
                } else if constexpr (std::is_same_v<T, Define>) {
                    instances_in(*x.expr, out);
                } else if constexpr (std::is_same_v<T, Predicate>) {
                    instances_in(*x.body, out);
                } else if constexpr (std::is_same_v<T, Monitor> || std::is_same_v<T, Pattern>) {
                    for (const auto& c : x.constraints)
                        instances_in(*c.expr, out);
                }
            },
            el.node);
    }

    void names_in(const Expr& e, const std::set<std::string>& params, const std::string& pred) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, NameRef>) {
                    if (!params.count(x.name))
                        error(e.span, "imported predicate '" + pred + "' refers to '" + x.name +
                                          "'; imported predicates may only use their parameters "
                                          "and other predicates");
                } else if constexpr (std::is_same_v<T, Instance>) {
                    for (const auto& a : x.args)
                        names_in(*a, params, pred);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    names_in(*x.operand, params, pred);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    names_in(*x.lhs, params, pred);
                    names_in(*x.rhs, params, pred);
                }
            },
            e.node);
    }

    void check_imported_predicate(const Predicate& p) {
        std::set<std::string> params;
        for (const auto& q : p.params)
            params.insert(q.name);
        names_in(*p.body, params, p.name);
    }
};

} // namespace

SpecAst resolve_imports(SpecAst entry, const std::string& entry_path, const FileLoader& loader) {
    if (entry.imports.empty())
        return entry;
    return Resolver(loader).run(std::move(entry), entry_path);
}

SpecAst resolve_imports(const std::string& entry_path, const FileLoader& loader) {
    auto text = loader(entry_path);
    if (!text) {
        Span span;
        span.file = std::make_shared<const std::string>(entry_path);
        throw SpecError({Diagnostic{span, Severity::Error, "cannot read '" + entry_path + "'", {}}});
    }
    return resolve_imports(parse(*text, entry_path), entry_path, loader);
}

} // namespace spectra::sema
