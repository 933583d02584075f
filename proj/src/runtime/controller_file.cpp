#include "spectra/runtime/controller_file.hpp"

#include <fstream>
#include <iterator>
#include <unordered_map>

namespace spectra::runtime {

using gr1::Bdd;
using gr1::SymbolicController;
using lowering::VarInfo;

namespace {

constexpr std::uint32_t no_element = 0xFFFFFFFFu;

class Writer {
public:
    std::vector<std::uint8_t> bytes;

    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v), 8); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes.insert(bytes.end(), s.begin(), s.end());
    }

private:
    void put(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i)
            bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1, "byte")); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2, "u16")); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4, "u32")); }
    std::int64_t i64() { return static_cast<std::int64_t>(get(8, "i64")); }
    std::string str() {
        std::uint32_t n = u32();
        need(n, "string");
        std::string s(b_.begin() + static_cast<std::ptrdiff_t>(pos_),
                      b_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return s;
    }
    /// A count of items each at least `min_size` bytes long; rejects counts
    /// the remaining bytes cannot hold before anything is allocated.
    std::uint32_t count(std::size_t min_size, const char* what) {
        std::uint32_t n = u32();
        if (static_cast<std::uint64_t>(n) * min_size > b_.size() - pos_)
            throw FormatError(std::string("truncated file: ") + what + " table of " + std::to_string(n) +
                              " entries does not fit");
        return n;
    }
    bool at_end() const { return pos_ == b_.size(); }
    std::size_t offset() const { return pos_; }

private:
    const std::vector<std::uint8_t>& b_;
    std::size_t pos_ = 0;

    void need(std::size_t n, const char* what) {
        if (b_.size() - pos_ < n)
            throw FormatError(std::string("truncated file: ") + what + " at offset " + std::to_string(pos_));
    }
    std::uint64_t get(int n, const char* what) {
        need(static_cast<std::size_t>(n), what);
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i)
            v |= static_cast<std::uint64_t>(b_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }
};

template <class E> E enum_in(std::uint8_t v, std::uint8_t count, const char* what) {
    if (v >= count)
        throw FormatError(std::string("invalid ") + what + " " + std::to_string(v));
    return static_cast<E>(v);
}

// Post-order numbering of every node reachable from the roots.
class NodeTable {
public:
    explicit NodeTable(bdd::Manager& m) : m_(m) {}

    std::uint32_t add(const Bdd& f) { return visit(f.id()); }

    void write(Writer& w) const {
        w.u32(static_cast<std::uint32_t>(order_.size()));
        for (std::size_t i = 0; i < order_.size(); ++i) {
            const std::uint32_t id = order_[i];
            w.u32(static_cast<std::uint32_t>(i + 2));
            w.u32(m_.level_of(id));
            w.u32(number_.at(m_.low_of(id)));
            w.u32(number_.at(m_.high_of(id)));
        }
    }

private:
    bdd::Manager& m_;
    std::unordered_map<std::uint32_t, std::uint32_t> number_{{0, 0}, {1, 1}};
    std::vector<std::uint32_t> order_;

    std::uint32_t visit(std::uint32_t root) {
        // explicit stack: diagrams can be deeper than the call stack allows
        std::vector<std::pair<std::uint32_t, bool>> stack{{root, false}};
        while (!stack.empty()) {
            auto [id, expanded] = stack.back();
            stack.pop_back();
            if (number_.count(id))
                continue;
            if (expanded) {
                number_[id] = static_cast<std::uint32_t>(order_.size() + 2);
                order_.push_back(id);
                continue;
            }
            stack.push_back({id, true});
            stack.push_back({m_.high_of(id), false});
            stack.push_back({m_.low_of(id), false});
        }
        return number_.at(root);
    }
};

} // namespace

std::vector<std::uint8_t> save(const SymbolicController& c) {
    Writer w;
    w.bytes = {'S', 'P', 'C', 'C'};
    w.u16(spcc_version);
    w.u16(0);
    w.u32(static_cast<std::uint32_t>(c.env_vars.size()));
    w.u32(static_cast<std::uint32_t>(c.sys_vars.size()));
    w.u32(c.memory_bits);
    for (const auto& n : c.env_vars)
        w.str(n);
    for (const auto& n : c.sys_vars)
        w.str(n);

    w.u32(static_cast<std::uint32_t>(c.variables.size()));
    for (const auto& v : c.variables) {
        w.str(v.name);
        w.u8(static_cast<std::uint8_t>(v.kind));
        w.u8(static_cast<std::uint8_t>(v.type));
        w.u8(static_cast<std::uint8_t>(v.source));
        w.u32(v.origin.element == syntax::Origin::none ? no_element
                                                        : static_cast<std::uint32_t>(v.origin.element));
        w.u8(static_cast<std::uint8_t>(v.origin.kind));
        w.i64(v.lower);
        w.i64(v.upper);
        w.u32(static_cast<std::uint32_t>(v.values.size()));
        for (const auto& s : v.values)
            w.str(s);
        w.u32(static_cast<std::uint32_t>(v.bits.size()));
        for (const auto& s : v.bits)
            w.str(s);
    }

    NodeTable nodes(*c.manager);
    std::vector<std::uint32_t> roots{nodes.add(c.init), nodes.add(c.trans), nodes.add(c.env_init),
                                     nodes.add(c.env_trans)};
    for (const auto& a : c.assumptions)
        roots.push_back(nodes.add(a.bdd));
    nodes.write(w);
    for (std::size_t i = 0; i < 4; ++i)
        w.u32(roots[i]);
    w.u32(static_cast<std::uint32_t>(c.assumptions.size()));
    for (std::size_t i = 0; i < c.assumptions.size(); ++i) {
        const auto& a = c.assumptions[i];
        w.str(a.name);
        w.u8(static_cast<std::uint8_t>(a.kind));
        w.u32(a.line);
        w.u32(a.column);
        w.u32(roots[4 + i]);
    }
    return std::move(w.bytes);
}

SymbolicController load(const std::vector<std::uint8_t>& bytes, std::shared_ptr<bdd::Manager> manager) {
    Reader r(bytes);
    if (bytes.size() < 4 || bytes[0] != 'S' || bytes[1] != 'P' || bytes[2] != 'C' || bytes[3] != 'C')
        throw FormatError("not a controller file (bad magic)");
    r.u32();
    const std::uint16_t version = r.u16();
    if (version != spcc_version)
        throw FormatError("unsupported controller file version " + std::to_string(version) + " (expected " +
                          std::to_string(spcc_version) + ")");
    r.u16();

    SymbolicController c;
    c.manager = manager ? std::move(manager) : std::make_shared<bdd::Manager>();
    const std::uint32_t nx = r.u32(), ny = r.u32();
    c.memory_bits = r.u32();
    const std::uint64_t levels = 2ull * (static_cast<std::uint64_t>(nx) + ny + c.memory_bits);
    if (levels > (1ull << 20))
        throw FormatError("implausible variable count " + std::to_string(levels / 2));
    for (std::uint32_t i = 0; i < nx + ny; ++i)
        (i < nx ? c.env_vars : c.sys_vars).push_back(r.str());

    const std::uint32_t nvars = r.count(4 + 3 + 4 + 1 + 16 + 8, "variable");
    for (std::uint32_t i = 0; i < nvars; ++i) {
        VarInfo v;
        v.name = r.str();
        v.kind = enum_in<syntax::VarKind>(r.u8(), 2, "variable kind");
        v.type = enum_in<VarInfo::Type>(r.u8(), 3, "variable type");
        v.source = enum_in<VarInfo::Source>(r.u8(), 4, "variable source");
        const std::uint32_t el = r.u32();
        v.origin.element = el == no_element ? syntax::Origin::none : el;
        v.origin.kind = enum_in<syntax::OriginKind>(r.u8(), 6, "origin kind");
        v.lower = r.i64();
        v.upper = r.i64();
        for (std::uint32_t k = r.count(4, "enum value"); k > 0; --k)
            v.values.push_back(r.str());
        for (std::uint32_t k = r.count(4, "bit name"); k > 0; --k)
            v.bits.push_back(r.str());
        c.variables.push_back(std::move(v));
    }

    auto& m = *c.manager;
    m.ensure_vars(static_cast<std::uint32_t>(levels));
    const std::uint32_t nnodes = r.count(16, "node");
    std::vector<Bdd> node{m.bdd_false(), m.bdd_true()};
    node.reserve(nnodes + 2);
    for (std::uint32_t i = 0; i < nnodes; ++i) {
        const std::uint32_t id = r.u32(), level = r.u32(), low = r.u32(), high = r.u32();
        const std::string where = "node " + std::to_string(id);
        if (id != i + 2)
            throw FormatError(where + ": ids must be dense and ascending (expected " + std::to_string(i + 2) + ")");
        if (level >= levels)
            throw FormatError(where + ": level " + std::to_string(level) + " out of range");
        for (auto child : {low, high}) {
            if (child >= id)
                throw FormatError(where + ": child id " + std::to_string(child) +
                                  " is dangling (not defined before the node)");
            if (child >= 2 && m.level_of(node[child].id()) <= level)
                throw FormatError(where + ": child " + std::to_string(child) + " is not below level " +
                                  std::to_string(level));
        }
        if (low == high)
            throw FormatError(where + ": redundant node (equal children)");
        node.push_back(m.make_node(level, node[low], node[high]));
    }
    auto root = [&](const char* what) {
        const std::uint32_t id = r.u32();
        if (id >= node.size())
            throw FormatError(std::string("root of ") + what + " refers to dangling node " + std::to_string(id));
        return node[id];
    };
    c.init = root("init");
    c.trans = root("trans");
    c.env_init = root("env_init");
    c.env_trans = root("env_trans");
    const std::uint32_t nasm = r.count(4 + 1 + 12, "assumption");
    for (std::uint32_t i = 0; i < nasm; ++i) {
        gr1::AssumptionInfo a;
        a.name = r.str();
        a.kind = enum_in<syntax::ConstraintKind>(r.u8(), 5, "constraint kind");
        a.line = r.u32();
        a.column = r.u32();
        a.bdd = root("assumption");
        c.assumptions.push_back(std::move(a));
    }
    if (!r.at_end())
        throw FormatError("trailing bytes after offset " + std::to_string(r.offset()));
    return c;
}

void save_file(const SymbolicController& ctrl, const std::string& path) {
    auto bytes = save(ctrl);
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
}

SymbolicController load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load(bytes);
}

} // namespace spectra::runtime
