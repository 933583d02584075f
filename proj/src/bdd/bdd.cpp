#include "spectra/bdd/bdd.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <set>
#include <tuple>
#include <unordered_map>

namespace spectra::bdd {

namespace {

constexpr std::uint32_t free_level = 0xFFFFFFFEu;
constexpr std::uint32_t nil = 0; // chain terminator; node 0 is never chained

enum CacheOp : std::uint8_t {
    OpAnd = 0,
    OpOr,
    OpXor,
    OpImp,
    OpIff,
    OpNot,
    OpIte,
    OpExists,
    OpAndExists,
    OpRestrict,
    OpPrime,
    OpUnprime,
    OpRename,
};

[[noreturn]] void hard_failure(const char* what) {
    std::fprintf(stderr, "bdd: %s\n", what);
    std::abort();
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = a * 0x9E3779B97F4A7C15ull;
    h ^= b + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    h ^= c * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    h ^= h >> 29;
    return h;
}

std::size_t default_cap() {
    if (const char* env = std::getenv("SPECTRA_BDD_NODES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v >= 16)
            return static_cast<std::size_t>(v);
    }
    return 1000000;
}

} // namespace

NodeLimitExceeded::NodeLimitExceeded(std::size_t cap)
    : std::runtime_error("BDD node limit of " + std::to_string(cap) +
                         " live nodes exceeded (raise SPECTRA_BDD_NODES)"),
      cap_(cap) {}

// ------------------------------------------------------------------ Bdd

Bdd::Bdd(Manager* mgr, std::uint32_t id) : mgr_(mgr), id_(id) { mgr_->ref(id_); }

Bdd::Bdd(const Bdd& other) : mgr_(other.mgr_), id_(other.id_) {
    if (mgr_)
        mgr_->ref(id_);
}

Bdd::Bdd(Bdd&& other) noexcept : mgr_(other.mgr_), id_(other.id_) { other.mgr_ = nullptr; }

Bdd& Bdd::operator=(const Bdd& other) {
    if (other.mgr_)
        other.mgr_->ref(other.id_);
    if (mgr_)
        mgr_->deref(id_);
    mgr_ = other.mgr_;
    id_ = other.id_;
    return *this;
}

Bdd& Bdd::operator=(Bdd&& other) noexcept {
    if (this != &other) {
        if (mgr_)
            mgr_->deref(id_);
        mgr_ = other.mgr_;
        id_ = other.id_;
        other.mgr_ = nullptr;
    }
    return *this;
}

Bdd::~Bdd() {
    if (mgr_)
        mgr_->deref(id_);
}

bool Bdd::is_false() const { return mgr_ && id_ == Manager::false_id; }
bool Bdd::is_true() const { return mgr_ && id_ == Manager::true_id; }

Bdd Bdd::operator!() const { return mgr_->negate(*this); }
Bdd Bdd::operator&(const Bdd& o) const { return mgr_->apply(Op::And, *this, o); }
Bdd Bdd::operator|(const Bdd& o) const { return mgr_->apply(Op::Or, *this, o); }
Bdd Bdd::operator^(const Bdd& o) const { return mgr_->apply(Op::Xor, *this, o); }
Bdd Bdd::implies(const Bdd& o) const { return mgr_->apply(Op::Imp, *this, o); }
Bdd Bdd::iff(const Bdd& o) const { return mgr_->apply(Op::Iff, *this, o); }

// -------------------------------------------------------------- Manager

Manager::Manager(std::size_t node_cap) : cap_(node_cap ? node_cap : default_cap()) {
    nodes_.resize(std::min<std::size_t>(cap_ + 2, 1u << 12));
    refs_.assign(nodes_.size(), 0);
    nodes_[0] = {terminal_level, 0, 0, nil};
    nodes_[1] = {terminal_level, 1, 1, nil};
    refs_[0] = refs_[1] = 1; // terminals are permanent
    free_list_ = nil;
    for (std::size_t i = nodes_.size(); i-- > 2;) {
        nodes_[i] = {free_level, 0, 0, free_list_};
        free_list_ = static_cast<std::uint32_t>(i);
    }
    buckets_.assign(1u << 12, nil);
    cache_.assign(1u << 14, CacheEntry{0, 0, 0, 0xFF, 0});
}

Manager::~Manager() = default;

void Manager::check_owner(const Bdd& f) const {
    if (f.mgr_ != this)
        hard_failure(f.mgr_ ? "operand belongs to a different manager" : "invalid handle");
}

void Manager::ensure_vars(std::uint32_t n) { num_vars_ = std::max(num_vars_, n); }

std::size_t Manager::bucket_of(std::uint32_t level, std::uint32_t low, std::uint32_t high) const {
    return static_cast<std::size_t>(mix(level, low, high)) & (buckets_.size() - 1);
}

void Manager::grow() {
    std::size_t old = nodes_.size();
    std::size_t target = std::min(old * 2, cap_ + 2);
    if (target <= old)
        throw NodeLimitExceeded(cap_);
    nodes_.resize(target);
    refs_.resize(target, 0);
    for (std::size_t i = target; i-- > old;) {
        nodes_[i] = {free_level, 0, 0, free_list_};
        free_list_ = static_cast<std::uint32_t>(i);
    }
}

void Manager::rehash() {
    std::size_t size = buckets_.size();
    while (size < live_)
        size *= 2;
    buckets_.assign(size, nil);
    for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
        Node& n = nodes_[i];
        if (n.level == free_level)
            continue;
        std::size_t b = bucket_of(n.level, n.low, n.high);
        n.next = buckets_[b];
        buckets_[b] = i;
    }
    std::size_t csize = std::min<std::size_t>(std::max<std::size_t>(size, 1u << 14), 1u << 22);
    if (csize != cache_.size())
        cache_.assign(csize, CacheEntry{0, 0, 0, 0xFF, 0});
}

std::uint32_t Manager::mk(std::uint32_t level, std::uint32_t low, std::uint32_t high) {
    if (low == high)
        return low;
    std::size_t b = bucket_of(level, low, high);
    for (std::uint32_t i = buckets_[b]; i != nil; i = nodes_[i].next) {
        const Node& n = nodes_[i];
        if (n.level == level && n.low == low && n.high == high)
            return i;
    }
    if (live_ >= cap_ + 2)
        throw NodeLimitExceeded(cap_);
    if (free_list_ == nil)
        grow();
    std::uint32_t id = free_list_;
    free_list_ = nodes_[id].next;
    nodes_[id] = {level, low, high, buckets_[b]};
    buckets_[b] = id;
    ++live_;
    if (live_ > buckets_.size() * 2)
        rehash();
    return id;
}

bool Manager::cache_lookup(std::uint8_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                           std::uint32_t& out) const {
    const CacheEntry& e = cache_[mix(a, b, (std::uint64_t(c) << 8) | op) & (cache_.size() - 1)];
    if (e.op == op && e.a == a && e.b == b && e.c == c) {
        out = e.result;
        return true;
    }
    return false;
}

void Manager::cache_store(std::uint8_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                          std::uint32_t result) {
    cache_[mix(a, b, (std::uint64_t(c) << 8) | op) & (cache_.size() - 1)] =
        CacheEntry{a, b, c, op, result};
}

template <class F> Bdd Manager::guarded(F&& f) {
    try {
        return wrap(f());
    } catch (const NodeLimitExceeded&) {
        collect_garbage();
        return wrap(f());
    }
}

void Manager::collect_garbage() {
    std::vector<bool> mark(nodes_.size(), false);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i)
        if (refs_[i] > 0 && nodes_[i].level != free_level)
            stack.push_back(i);
    while (!stack.empty()) {
        std::uint32_t i = stack.back();
        stack.pop_back();
        if (mark[i])
            continue;
        mark[i] = true;
        if (i >= 2) {
            stack.push_back(nodes_[i].low);
            stack.push_back(nodes_[i].high);
        }
    }
    free_list_ = nil;
    live_ = 2;
    for (std::uint32_t i = static_cast<std::uint32_t>(nodes_.size()); i-- > 2;) {
        if (mark[i]) {
            ++live_;
        } else {
            nodes_[i] = {free_level, 0, 0, free_list_};
            free_list_ = i;
        }
    }
    std::fill(buckets_.begin(), buckets_.end(), nil);
    rehash();
    std::fill(cache_.begin(), cache_.end(), CacheEntry{0, 0, 0, 0xFF, 0});
    ++gc_runs_;
}

// ------------------------------------------------------------ builders

Bdd Manager::constant(bool value) { return wrap(value ? true_id : false_id); }

Bdd Manager::var(std::uint32_t level) {
    ensure_vars(level + 1);
    return guarded([&] { return mk(level, false_id, true_id); });
}

Bdd Manager::from_id(std::uint32_t id) {
    if (id >= nodes_.size() || nodes_[id].level == free_level)
        throw std::out_of_range("no live BDD node with id " + std::to_string(id));
    return wrap(id);
}

Bdd Manager::make_node(std::uint32_t level, const Bdd& low, const Bdd& high) {
    check_owner(low);
    check_owner(high);
    if (level >= free_level || nodes_[low.id_].level <= level || nodes_[high.id_].level <= level)
        throw std::invalid_argument("make_node: children must lie below level " +
                                    std::to_string(level));
    ensure_vars(level + 1);
    return guarded([&] { return mk(level, low.id_, high.id_); });
}

Bdd Manager::cube(const std::vector<std::uint32_t>& levels) {
    std::vector<std::pair<std::uint32_t, bool>> lits;
    for (auto l : levels)
        lits.emplace_back(l, true);
    return literal_cube(lits);
}

Bdd Manager::literal_cube(const std::vector<std::pair<std::uint32_t, bool>>& literals) {
    auto sorted = literals;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].first == sorted[i - 1].first && sorted[i].second != sorted[i - 1].second)
            return bdd_false();
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& l : sorted)
        ensure_vars(l.first + 1);
    return guarded([&] {
        std::uint32_t r = true_id;
        for (std::size_t i = sorted.size(); i-- > 0;)
            r = sorted[i].second ? mk(sorted[i].first, false_id, r) : mk(sorted[i].first, r, false_id);
        return r;
    });
}

// ---------------------------------------------------------- operations

std::uint32_t Manager::not_rec(std::uint32_t a) {
    if (a <= true_id)
        return a ^ 1u;
    std::uint32_t r;
    if (cache_lookup(OpNot, a, 0, 0, r))
        return r;
    const Node n = nodes_[a];
    std::uint32_t lo = not_rec(n.low);
    std::uint32_t hi = not_rec(n.high);
    r = mk(n.level, lo, hi);
    cache_store(OpNot, a, 0, 0, r);
    return r;
}

std::uint32_t Manager::apply_rec(Op op, std::uint32_t a, std::uint32_t b) {
    switch (op) {
    case Op::And:
        if (a == false_id || b == false_id)
            return false_id;
        if (a == true_id || a == b)
            return b;
        if (b == true_id)
            return a;
        break;
    case Op::Or:
        if (a == true_id || b == true_id)
            return true_id;
        if (a == false_id || a == b)
            return b;
        if (b == false_id)
            return a;
        break;
    case Op::Xor:
        if (a == b)
            return false_id;
        if (a == false_id)
            return b;
        if (b == false_id)
            return a;
        if (a == true_id)
            return not_rec(b);
        if (b == true_id)
            return not_rec(a);
        break;
    case Op::Imp:
        if (a == false_id || b == true_id || a == b)
            return true_id;
        if (a == true_id)
            return b;
        if (b == false_id)
            return not_rec(a);
        break;
    case Op::Iff:
        if (a == b)
            return true_id;
        if (a == true_id)
            return b;
        if (b == true_id)
            return a;
        if (a == false_id)
            return not_rec(b);
        if (b == false_id)
            return not_rec(a);
        break;
    }
    if (op != Op::Imp && a > b)
        std::swap(a, b);
    std::uint8_t code = static_cast<std::uint8_t>(op);
    std::uint32_t r;
    if (cache_lookup(code, a, b, 0, r))
        return r;
    const Node na = nodes_[a], nb = nodes_[b];
    std::uint32_t level = std::min(na.level, nb.level);
    std::uint32_t a0 = na.level == level ? na.low : a, a1 = na.level == level ? na.high : a;
    std::uint32_t b0 = nb.level == level ? nb.low : b, b1 = nb.level == level ? nb.high : b;
    std::uint32_t lo = apply_rec(op, a0, b0);
    std::uint32_t hi = apply_rec(op, a1, b1);
    r = mk(level, lo, hi);
    cache_store(code, a, b, 0, r);
    return r;
}

std::uint32_t Manager::ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h) {
    if (f == true_id)
        return g;
    if (f == false_id)
        return h;
    if (g == h)
        return g;
    if (g == true_id && h == false_id)
        return f;
    if (g == false_id && h == true_id)
        return not_rec(f);
    if (g == true_id)
        return apply_rec(Op::Or, f, h);
    if (h == false_id)
        return apply_rec(Op::And, f, g);
    std::uint32_t r;
    if (cache_lookup(OpIte, f, g, h, r))
        return r;
    const Node nf = nodes_[f], ng = nodes_[g], nh = nodes_[h];
    std::uint32_t level = std::min({nf.level, ng.level, nh.level});
    auto lo = [&](std::uint32_t x, const Node& n) { return n.level == level ? n.low : x; };
    auto hi = [&](std::uint32_t x, const Node& n) { return n.level == level ? n.high : x; };
    std::uint32_t r0 = ite_rec(lo(f, nf), lo(g, ng), lo(h, nh));
    std::uint32_t r1 = ite_rec(hi(f, nf), hi(g, ng), hi(h, nh));
    r = mk(level, r0, r1);
    cache_store(OpIte, f, g, h, r);
    return r;
}

std::uint32_t Manager::exists_rec(std::uint32_t f, std::uint32_t vars) {
    if (f <= true_id)
        return f;
    const std::uint32_t level = nodes_[f].level;
    while (vars != true_id && nodes_[vars].level < level)
        vars = nodes_[vars].high;
    if (vars == true_id)
        return f;
    std::uint32_t r;
    if (cache_lookup(OpExists, f, vars, 0, r))
        return r;
    const Node n = nodes_[f];
    if (nodes_[vars].level == level) {
        std::uint32_t rest = nodes_[vars].high;
        std::uint32_t r0 = exists_rec(n.low, rest);
        r = r0 == true_id ? true_id : apply_rec(Op::Or, r0, exists_rec(n.high, rest));
    } else {
        std::uint32_t r0 = exists_rec(n.low, vars);
        std::uint32_t r1 = exists_rec(n.high, vars);
        r = mk(level, r0, r1);
    }
    cache_store(OpExists, f, vars, 0, r);
    return r;
}

std::uint32_t Manager::and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t vars) {
    if (f == false_id || g == false_id)
        return false_id;
    if (f == true_id && g == true_id)
        return true_id;
    if (f == true_id || f == g)
        return exists_rec(g, vars);
    if (g == true_id)
        return exists_rec(f, vars);
    if (f > g)
        std::swap(f, g);
    const Node nf = nodes_[f], ng = nodes_[g];
    const std::uint32_t level = std::min(nf.level, ng.level);
    while (vars != true_id && nodes_[vars].level < level)
        vars = nodes_[vars].high;
    if (vars == true_id)
        return apply_rec(Op::And, f, g);
    std::uint32_t r;
    if (cache_lookup(OpAndExists, f, g, vars, r))
        return r;
    std::uint32_t f0 = nf.level == level ? nf.low : f, f1 = nf.level == level ? nf.high : f;
    std::uint32_t g0 = ng.level == level ? ng.low : g, g1 = ng.level == level ? ng.high : g;
    if (nodes_[vars].level == level) {
        std::uint32_t rest = nodes_[vars].high;
        std::uint32_t r0 = and_exists_rec(f0, g0, rest);
        r = r0 == true_id ? true_id : apply_rec(Op::Or, r0, and_exists_rec(f1, g1, rest));
    } else {
        std::uint32_t r0 = and_exists_rec(f0, g0, vars);
        std::uint32_t r1 = and_exists_rec(f1, g1, vars);
        r = mk(level, r0, r1);
    }
    cache_store(OpAndExists, f, g, vars, r);
    return r;
}

std::uint32_t Manager::restrict_rec(std::uint32_t f, std::uint32_t lits) {
    if (f <= true_id)
        return f;
    const Node n = nodes_[f];
    auto step = [&](std::uint32_t c) {
        return nodes_[c].low == false_id ? nodes_[c].high : nodes_[c].low;
    };
    while (lits != true_id && nodes_[lits].level < n.level)
        lits = step(lits);
    if (lits == true_id)
        return f;
    std::uint32_t r;
    if (cache_lookup(OpRestrict, f, lits, 0, r))
        return r;
    if (nodes_[lits].level == n.level) {
        bool positive = nodes_[lits].low == false_id;
        r = restrict_rec(positive ? n.high : n.low, step(lits));
    } else {
        std::uint32_t r0 = restrict_rec(n.low, lits);
        std::uint32_t r1 = restrict_rec(n.high, lits);
        r = mk(n.level, r0, r1);
    }
    cache_store(OpRestrict, f, lits, 0, r);
    return r;
}

std::uint32_t Manager::shift_rec(std::uint32_t f, int delta, std::uint8_t op) {
    if (f <= true_id)
        return f;
    std::uint32_t r;
    if (cache_lookup(op, f, 0, 0, r))
        return r;
    const Node n = nodes_[f];
    bool even = n.level % 2 == 0;
    if (delta > 0 ? !even : even)
        hard_failure(delta > 0 ? "rename_prime on a function over primed variables"
                               : "rename_unprime on a function over unprimed variables");
    std::uint32_t lo = shift_rec(n.low, delta, op);
    std::uint32_t hi = shift_rec(n.high, delta, op);
    r = mk(static_cast<std::uint32_t>(static_cast<std::int64_t>(n.level) + delta), lo, hi);
    cache_store(op, f, 0, 0, r);
    return r;
}

std::uint32_t Manager::rename_rec(std::uint32_t f, std::uint8_t op) {
    if (f <= true_id)
        return f;
    std::uint32_t r;
    if (cache_lookup(op, f, 0, 0, r))
        return r;
    const Node n = nodes_[f];
    std::uint32_t lo = rename_rec(n.low, op);
    std::uint32_t hi = rename_rec(n.high, op);
    std::uint32_t target = n.level < rename_map_.size() ? rename_map_[n.level] : n.level;
    r = ite_rec(mk(target, false_id, true_id), hi, lo);
    cache_store(op, f, 0, 0, r);
    return r;
}

Bdd Manager::apply(Op op, const Bdd& a, const Bdd& b) {
    check_owner(a);
    check_owner(b);
    return guarded([&] { return apply_rec(op, a.id_, b.id_); });
}

Bdd Manager::negate(const Bdd& a) {
    check_owner(a);
    return guarded([&] { return not_rec(a.id_); });
}

Bdd Manager::ite(const Bdd& f, const Bdd& g, const Bdd& h) {
    check_owner(f);
    check_owner(g);
    check_owner(h);
    return guarded([&] { return ite_rec(f.id_, g.id_, h.id_); });
}

Bdd Manager::exists(const Bdd& f, const Bdd& vars) {
    check_owner(f);
    check_owner(vars);
    return guarded([&] { return exists_rec(f.id_, vars.id_); });
}

Bdd Manager::forall(const Bdd& f, const Bdd& vars) {
    check_owner(f);
    check_owner(vars);
    return guarded([&] { return not_rec(exists_rec(not_rec(f.id_), vars.id_)); });
}

Bdd Manager::and_exists(const Bdd& f, const Bdd& g, const Bdd& vars) {
    check_owner(f);
    check_owner(g);
    check_owner(vars);
    return guarded([&] { return and_exists_rec(f.id_, g.id_, vars.id_); });
}

Bdd Manager::restrict(const Bdd& f, const Bdd& literals) {
    check_owner(f);
    check_owner(literals);
    if (literals.is_false())
        hard_failure("restrict by an unsatisfiable cube");
    return guarded([&] { return restrict_rec(f.id_, literals.id_); });
}

Bdd Manager::rename_prime(const Bdd& f) {
    check_owner(f);
    auto sup = support(f);
    if (!sup.empty())
        ensure_vars(sup.back() + 2);
    return guarded([&] { return shift_rec(f.id_, +1, OpPrime); });
}

Bdd Manager::rename_unprime(const Bdd& f) {
    check_owner(f);
    return guarded([&] { return shift_rec(f.id_, -1, OpUnprime); });
}

Bdd Manager::rename(const Bdd& f, const std::vector<std::uint32_t>& map) {
    check_owner(f);
    auto sup = support(f);
    std::set<std::uint32_t> targets;
    for (auto l : sup) {
        std::uint32_t t = l < map.size() ? map[l] : l;
        if (!targets.insert(t).second)
            throw std::invalid_argument("rename: map is not injective on the support");
        ensure_vars(t + 1);
    }
    rename_map_ = map;
    // cached rename results are only valid for this map
    for (auto& e : cache_)
        if (e.op == OpRename)
            e.op = 0xFF;
    return guarded([&] { return rename_rec(f.id_, OpRename); });
}

// --------------------------------------------------------------- queries

std::vector<std::uint32_t> Manager::support(const Bdd& f) {
    check_owner(f);
    std::set<std::uint32_t> levels;
    std::vector<std::uint32_t> stack{f.id_};
    std::unordered_map<std::uint32_t, bool> seen;
    while (!stack.empty()) {
        std::uint32_t i = stack.back();
        stack.pop_back();
        if (i <= true_id || !seen.emplace(i, true).second)
            continue;
        levels.insert(nodes_[i].level);
        stack.push_back(nodes_[i].low);
        stack.push_back(nodes_[i].high);
    }
    return {levels.begin(), levels.end()};
}

std::size_t Manager::dag_size(const Bdd& f) {
    check_owner(f);
    std::vector<std::uint32_t> stack{f.id_};
    std::unordered_map<std::uint32_t, bool> seen;
    while (!stack.empty()) {
        std::uint32_t i = stack.back();
        stack.pop_back();
        if (i <= true_id || !seen.emplace(i, true).second)
            continue;
        stack.push_back(nodes_[i].low);
        stack.push_back(nodes_[i].high);
    }
    return seen.size();
}

std::optional<std::vector<bool>> Manager::sat_one(const Bdd& f,
                                                  const std::vector<std::uint32_t>& levels) {
    check_owner(f);
    if (f.is_false())
        return std::nullopt;
    std::unordered_map<std::uint32_t, std::size_t> index;
    for (std::size_t i = 0; i < levels.size(); ++i)
        index.emplace(levels[i], i);
    std::vector<bool> out(levels.size(), false);
    std::uint32_t i = f.id_;
    while (i > true_id) {
        const Node& n = nodes_[i];
        auto it = index.find(n.level);
        if (it == index.end())
            throw std::invalid_argument("sat_one: level " + std::to_string(n.level) +
                                        " is in the support but not in the variable list");
        if (n.low != false_id) {
            i = n.low;
        } else {
            out[it->second] = true;
            i = n.high;
        }
    }
    return out;
}

double Manager::sat_count(const Bdd& f, const std::vector<std::uint32_t>& levels) {
    check_owner(f);
    std::vector<std::uint32_t> sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    auto pos = [&](std::uint32_t id) -> std::size_t {
        if (id <= true_id)
            return sorted.size();
        auto it = std::lower_bound(sorted.begin(), sorted.end(), nodes_[id].level);
        if (it == sorted.end() || *it != nodes_[id].level)
            throw std::invalid_argument("sat_count: support not covered by the variable list");
        return static_cast<std::size_t>(it - sorted.begin());
    };
    std::unordered_map<std::uint32_t, double> memo;
    auto count = [&](auto&& self, std::uint32_t id) -> double {
        if (id == false_id)
            return 0.0;
        if (id == true_id)
            return 1.0;
        if (auto it = memo.find(id); it != memo.end())
            return it->second;
        std::size_t p = pos(id);
        const Node n = nodes_[id];
        double c = self(self, n.low) * std::ldexp(1.0, int(pos(n.low) - p - 1)) +
                   self(self, n.high) * std::ldexp(1.0, int(pos(n.high) - p - 1));
        memo.emplace(id, c);
        return c;
    };
    return count(count, f.id_) * std::ldexp(1.0, int(pos(f.id_)));
}

bool Manager::eval(const Bdd& f, const std::vector<bool>& assignment) {
    check_owner(f);
    std::uint32_t i = f.id_;
    while (i > true_id) {
        const Node& n = nodes_[i];
        bool v = n.level < assignment.size() && assignment[n.level];
        i = v ? n.high : n.low;
    }
    return i == true_id;
}

std::string Manager::audit() const {
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> triples;
    std::size_t live = 2;
    auto level = [&](std::uint32_t id) { return nodes_[id].level; };
    for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.level == free_level)
            continue;
        ++live;
        std::string at = "node " + std::to_string(i) + ": ";
        if (n.low == n.high)
            return at + "redundant (low == high)";
        if (n.low >= nodes_.size() || n.high >= nodes_.size() || level(n.low) == free_level ||
            level(n.high) == free_level)
            return at + "dangling child";
        if (level(n.low) <= n.level || level(n.high) <= n.level)
            return at + "child not below parent";
        if (!triples.emplace(n.level, n.low, n.high).second)
            return at + "duplicate (level, low, high)";
        bool chained = false;
        for (std::uint32_t j = buckets_[bucket_of(n.level, n.low, n.high)]; j != nil;
             j = nodes_[j].next)
            chained = chained || j == i;
        if (!chained)
            return at + "missing from its unique-table chain";
    }
    if (live != live_)
        return "live count " + std::to_string(live_) + " but " + std::to_string(live) +
               " nodes in table";
    return "";
}

} // namespace spectra::bdd
