#pragma once

#include "spectra/syntax/ast.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace spectra::lowering {

/// Called on each node top-down; a returned expression replaces the node
/// (and is not visited further), nullopt descends into the children.
using RewriteFn = std::function<std::optional<syntax::ExprPtr>(const syntax::ExprPtr&)>;

/// Rebuilds only the spine above replaced nodes; untouched subtrees are
/// shared with the input.
syntax::ExprPtr rewrite(const syntax::ExprPtr& e, const RewriteFn& pre);

/// Simultaneous replacement of NameRefs.
syntax::ExprPtr substitute(const syntax::ExprPtr& e,
                           const std::map<std::string, syntax::ExprPtr>& names);

/// Applies fn to the top-level expression of every constraint, define,
/// predicate body, and monitor/pattern constraint.
void for_each_expr(syntax::SpecAst& spec,
                   const std::function<syntax::ExprPtr(const syntax::ExprPtr&)>& fn);

/// Source of names that collide with nothing in a specification.
class NameSupply {
public:
    explicit NameSupply(const syntax::SpecAst& spec);

    /// "__aux_<hint>_<k>" for the first unused k.
    std::string fresh(const std::string& hint);
    /// `name` itself if unused, otherwise a fresh name derived from it.
    std::string prefer(const std::string& name);
    void take(const std::string& name);
    bool taken(const std::string& name) const;

private:
    std::set<std::string> taken_;
    std::map<std::string, int> counters_;
};

} // namespace spectra::lowering
