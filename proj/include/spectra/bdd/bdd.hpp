#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra::bdd {

class Manager;

/// Thrown when the live node count stays above the manager's node cap even
/// after garbage collection.
class NodeLimitExceeded : public std::runtime_error {
public:
    explicit NodeLimitExceeded(std::size_t cap);
    std::size_t cap() const { return cap_; }

private:
    std::size_t cap_;
};

/// Reference-counted handle to a node of a Manager. Handles keep their
/// node alive across garbage collections. Two handles of the same manager
/// are equal exactly when they denote the same Boolean function.
class Bdd {
public:
    Bdd() = default;
    Bdd(const Bdd& other);
    Bdd(Bdd&& other) noexcept;
    Bdd& operator=(const Bdd& other);
    Bdd& operator=(Bdd&& other) noexcept;
    ~Bdd();

    Manager* manager() const { return mgr_; }
    std::uint32_t id() const { return id_; }
    bool valid() const { return mgr_ != nullptr; }
    bool is_false() const;
    bool is_true() const;
    bool is_const() const { return is_false() || is_true(); }

    Bdd operator!() const;
    Bdd operator&(const Bdd& o) const;
    Bdd operator|(const Bdd& o) const;
    Bdd operator^(const Bdd& o) const;
    Bdd& operator&=(const Bdd& o) { return *this = *this & o; }
    Bdd& operator|=(const Bdd& o) { return *this = *this | o; }
    Bdd implies(const Bdd& o) const;
    Bdd iff(const Bdd& o) const;

    friend bool operator==(const Bdd& a, const Bdd& b) { return a.mgr_ == b.mgr_ && a.id_ == b.id_; }
    friend bool operator!=(const Bdd& a, const Bdd& b) { return !(a == b); }

private:
    friend class Manager;
    Bdd(Manager* mgr, std::uint32_t id);

    Manager* mgr_ = nullptr;
    std::uint32_t id_ = 0;
};

enum class Op : std::uint8_t { And, Or, Xor, Imp, Iff };

/// Reduced ordered BDD manager without complement edges. Variables are
/// identified by their level; level 0 is the top of every diagram. The
/// manager never reorders, so callers choose the order by the level they
/// assign (the game layer interleaves unprimed and primed copies: 2k, 2k+1).
///
/// A manager is single-threaded.
class Manager {
public:
    static constexpr std::uint32_t false_id = 0;
    static constexpr std::uint32_t true_id = 1;
    static constexpr std::uint32_t terminal_level = 0xFFFFFFFFu;

    /// `node_cap` bounds the number of live nodes; 0 reads SPECTRA_BDD_NODES
    /// (default 1 000 000).
    explicit Manager(std::size_t node_cap = 0);
    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;
    ~Manager();

    /// Number of variables (levels) created so far.
    std::uint32_t var_count() const { return num_vars_; }
    /// Ensures levels 0..n-1 exist.
    void ensure_vars(std::uint32_t n);

    Bdd constant(bool value);
    Bdd bdd_false() { return constant(false); }
    Bdd bdd_true() { return constant(true); }
    /// The function "variable at `level` is 1"; creates levels as needed.
    Bdd var(std::uint32_t level);
    Bdd nvar(std::uint32_t level) { return !var(level); }

    Bdd apply(Op op, const Bdd& a, const Bdd& b);
    Bdd negate(const Bdd& a);
    Bdd ite(const Bdd& f, const Bdd& g, const Bdd& h);

    /// Conjunction of the positive literals of `levels`, the form in which
    /// quantified variable sets are passed.
    Bdd cube(const std::vector<std::uint32_t>& levels);
    /// Conjunction of literals: level -> value.
    Bdd literal_cube(const std::vector<std::pair<std::uint32_t, bool>>& literals);

    Bdd exists(const Bdd& f, const Bdd& vars);
    Bdd forall(const Bdd& f, const Bdd& vars);
    /// exists(vars, f & g) without building f & g.
    Bdd and_exists(const Bdd& f, const Bdd& g, const Bdd& vars);

    /// Cofactor of f by a literal cube: every variable of the cube is fixed
    /// to its value there.
    Bdd restrict(const Bdd& f, const Bdd& literals);

    /// Substitutes each variable at even level 2k by level 2k+1. Aborts if f
    /// depends on an odd level.
    Bdd rename_prime(const Bdd& f);
    /// Inverse of rename_prime. Aborts if f depends on an even level.
    Bdd rename_unprime(const Bdd& f);
    /// General substitution of variables: map[level] is the new level for
    /// that variable (levels beyond the map stay put). The map need not be
    /// order-preserving but must be injective on the support of f.
    Bdd rename(const Bdd& f, const std::vector<std::uint32_t>& map);

    /// Levels that f depends on, ascending.
    std::vector<std::uint32_t> support(const Bdd& f);

    /// One satisfying assignment over `levels` (which must cover the support
    /// of f). Deterministic: along the path, a variable takes 0 whenever the
    /// 0-branch is satisfiable; variables off the path are 0.
    std::optional<std::vector<bool>> sat_one(const Bdd& f, const std::vector<std::uint32_t>& levels);
    /// Number of assignments to exactly `levels` that satisfy f (levels must
    /// cover the support). Exact up to 2^53.
    double sat_count(const Bdd& f, const std::vector<std::uint32_t>& levels);
    /// Value of f under `assignment`, indexed by level.
    bool eval(const Bdd& f, const std::vector<bool>& assignment);

    /// Number of distinct internal nodes reachable from f (terminals
    /// excluded).
    std::size_t dag_size(const Bdd& f);

    /// Node introspection used by serialization.
    std::uint32_t level_of(std::uint32_t id) const { return nodes_[id].level; }
    std::uint32_t low_of(std::uint32_t id) const { return nodes_[id].low; }
    std::uint32_t high_of(std::uint32_t id) const { return nodes_[id].high; }
    Bdd from_id(std::uint32_t id);
    /// Finds or creates the node (level, low, high); low/high must be live
    /// and below `level`.
    Bdd make_node(std::uint32_t level, const Bdd& low, const Bdd& high);

    /// Frees every node not reachable from a live handle.
    void collect_garbage();
    std::size_t live_nodes() const { return live_; }
    std::size_t node_cap() const { return cap_; }
    std::size_t gc_runs() const { return gc_runs_; }

    /// Walks the unique table and checks canonicity (no redundant node, no
    /// duplicate triple, children ordered below parents, hash chains
    /// consistent). Returns a description of the first violation, or "".
    std::string audit() const;

private:
    friend class Bdd;

    struct Node {
        std::uint32_t level;
        std::uint32_t low;
        std::uint32_t high;
        std::uint32_t next; // hash chain / free list
    };
    struct CacheEntry {
        std::uint32_t a, b, c;
        std::uint8_t op;
        std::uint32_t result;
    };

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> refs_; // external references per node
    std::vector<std::uint32_t> buckets_;
    std::vector<CacheEntry> cache_;
    std::uint32_t free_list_;
    std::size_t live_ = 2;
    std::size_t cap_;
    std::size_t gc_runs_ = 0;
    std::uint32_t num_vars_ = 0;
    std::vector<std::uint32_t> rename_map_;

    void ref(std::uint32_t id) { ++refs_[id]; }
    void deref(std::uint32_t id) { --refs_[id]; }
    Bdd wrap(std::uint32_t id) { return Bdd(this, id); }
    void check_owner(const Bdd& f) const;

    std::uint32_t mk(std::uint32_t level, std::uint32_t low, std::uint32_t high);
    void grow();
    void rehash();
    std::size_t bucket_of(std::uint32_t level, std::uint32_t low, std::uint32_t high) const;

    bool cache_lookup(std::uint8_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                      std::uint32_t& out) const;
    void cache_store(std::uint8_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                     std::uint32_t result);

    template <class F> Bdd guarded(F&& f);

    std::uint32_t apply_rec(Op op, std::uint32_t a, std::uint32_t b);
    std::uint32_t not_rec(std::uint32_t a);
    std::uint32_t ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h);
    std::uint32_t exists_rec(std::uint32_t f, std::uint32_t vars);
    std::uint32_t and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t vars);
    std::uint32_t restrict_rec(std::uint32_t f, std::uint32_t lits);
    std::uint32_t shift_rec(std::uint32_t f, int delta, std::uint8_t op);
    std::uint32_t rename_rec(std::uint32_t f, std::uint8_t op);
};

} // namespace spectra::bdd
