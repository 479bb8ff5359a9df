// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/expr.hpp"
#include "honeyscan/keccak.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace honeyscan {

const Word& address_mask()
{
    static const Word mask = (Word(1) << 160) - 1;
    return mask;
}

const ExprNode& Expr::node() const
{
    return pool_->node(id_);
}

Expr Expr::child(size_t i) const
{
    return Expr(pool_, node().children[i]);
}

bool Expr::contains(const Expr& needle) const
{
    return contains_if([&](const Expr& e) { return e.id() == needle.id(); });
}

bool Expr::contains_if(const std::function<bool(const Expr&)>& pred) const
{
    // Iterative DFS with a visited set; the DAG can share subterms heavily.
    std::vector<uint32_t> stack{id_};
    std::vector<bool> seen(pool_->size(), false);
    while (!stack.empty())
    {
        const uint32_t id = stack.back();
        stack.pop_back();
        if (seen[id])
            continue;
        seen[id] = true;
        const Expr e(pool_, id);
        if (pred(e))
            return true;
        for (uint32_t c : e.node().children)
            stack.push_back(c);
    }
    return false;
}

std::string Expr::to_string() const
{
    const ExprNode& n = node();
    switch (n.kind)
    {
    case ExprKind::Const:
        return word_to_hex(*n.value);
    case ExprKind::Sym:
        return n.name;
    default:
        break;
    }
    static const char* names[] = {"const", "sym", "add", "sub", "mul", "div", "sdiv", "mod",
        "smod", "addmod", "mulmod", "exp", "signextend", "lt", "gt", "slt", "sgt", "eq",
        "iszero", "and", "or", "xor", "not", "byte", "keccak"};
    std::ostringstream os;
    os << "(" << names[static_cast<size_t>(n.kind)];
    if (n.kind == ExprKind::Keccak && n.value)
        os << "!" << word_to_hex(*n.value);
    for (uint32_t c : n.children)
        os << " " << Expr(pool_, c).to_string();
    os << ")";
    return os.str();
}

ExprPool::ExprPool() = default;

uint64_t ExprPool::node_key(const ExprNode& n) const
{
    uint64_t h = static_cast<uint64_t>(n.kind) * 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    if (n.kind == ExprKind::Const)
        mix(static_cast<uint64_t>(*n.value & 0xffffffffffffffffULL));
    if (n.kind == ExprKind::Sym)
        mix(std::hash<std::string>{}(n.name));
    for (uint32_t c : n.children)
        mix(c);
    mix(n.aux);
    return h;
}

bool ExprPool::node_equal(const ExprNode& a, const ExprNode& b) const
{
    if (a.kind != b.kind || a.children != b.children || a.aux != b.aux)
        return false;
    if (a.kind == ExprKind::Const)
        return *a.value == *b.value;
    if (a.kind == ExprKind::Sym)
        return a.name == b.name;
    return true;
}

Expr ExprPool::intern(ExprNode&& node)
{
    const uint64_t key = node_key(node);
    auto& bucket = buckets_[key];
    for (uint32_t id : bucket)
        if (node_equal(*nodes_[id], node))
            return Expr(this, id);
    node.id = static_cast<uint32_t>(nodes_.size());
    bucket.push_back(node.id);
    nodes_.push_back(std::make_unique<ExprNode>(std::move(node)));
    return Expr(this, nodes_.back()->id);
}

Expr ExprPool::constant(const Word& value)
{
    ExprNode n;
    n.kind = ExprKind::Const;
    n.value = value;
    return intern(std::move(n));
}

Expr ExprPool::symbol(const std::string& name, SymTag tag, uint32_t aux)
{
    ExprNode n;
    n.kind = ExprKind::Sym;
    n.tag = tag;
    n.name = name;
    n.aux = aux;
    return intern(std::move(n));
}

namespace {

bool both_const(const Expr& a, const Expr& b)
{
    return a.is_const_value() && b.is_const_value();
}

// Comparison-like results are known to be 0 or 1.
bool is_bit_valued(const Expr& e)
{
    switch (e.kind())
    {
    case ExprKind::Lt:
    case ExprKind::Gt:
    case ExprKind::Slt:
    case ExprKind::Sgt:
    case ExprKind::Eq:
    case ExprKind::IsZero:
        return true;
    default:
        return e.is_const_value() && (e.value() == 0 || e.value() == 1);
    }
}

} // namespace

Expr ExprPool::binary(ExprKind kind, Expr a, Expr b)
{
    ExprNode n;
    n.kind = kind;
    n.children = {a.id(), b.id()};
    return intern(std::move(n));
}

Expr ExprPool::ternary(ExprKind kind, Expr a, Expr b, Expr c)
{
    ExprNode n;
    n.kind = kind;
    n.children = {a.id(), b.id(), c.id()};
    return intern(std::move(n));
}

#define FOLD2(op)                                            \
    do                                                       \
    {                                                        \
        if (both_const(a, b))                                \
        {                                                    \
            Expr e = binary(kind, a, b);                     \
            const_cast<ExprNode&>(e.node()).value = (op);    \
            return e;                                        \
        }                                                    \
    } while (0)

Expr ExprPool::add(Expr a, Expr b)
{
    // No 0-identity rewrite: the +0 structure carries provenance (pointer
    // arithmetic, arithmetic-result tracking) that detectors inspect.
    const ExprKind kind = ExprKind::Add;
    FOLD2(Word(a.value() + b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::sub(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Sub;
    if (b.is_const_value() && b.value() == 0)
        return a;
    if (a == b)
        return constant(0);
    FOLD2(Word(a.value() - b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::mul(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Mul;
    FOLD2(Word(a.value() * b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::div(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Div;
    FOLD2(b.value() == 0 ? Word(0) : Word(a.value() / b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::sdiv_(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::SDiv;
    FOLD2(sdiv(a.value(), b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::mod(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Mod;
    FOLD2(b.value() == 0 ? Word(0) : Word(a.value() % b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::smod_(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::SMod;
    FOLD2(smod(a.value(), b.value()));
    return binary(kind, a, b);
}

namespace {
Word addmod_val(const Word& a, const Word& b, const Word& n)
{
    if (n == 0)
        return 0;
    using boost::multiprecision::uint512_t;
    return Word((uint512_t(a) + uint512_t(b)) % uint512_t(n));
}
Word mulmod_val(const Word& a, const Word& b, const Word& n)
{
    if (n == 0)
        return 0;
    using boost::multiprecision::uint512_t;
    return Word((uint512_t(a) * uint512_t(b)) % uint512_t(n));
}
} // namespace

Expr ExprPool::addmod(Expr a, Expr b, Expr n)
{
    if (a.is_const_value() && b.is_const_value() && n.is_const_value())
    {
        Expr e = ternary(ExprKind::AddMod, a, b, n);
        const_cast<ExprNode&>(e.node()).value = addmod_val(a.value(), b.value(), n.value());
        return e;
    }
    return ternary(ExprKind::AddMod, a, b, n);
}

Expr ExprPool::mulmod(Expr a, Expr b, Expr n)
{
    if (a.is_const_value() && b.is_const_value() && n.is_const_value())
    {
        Expr e = ternary(ExprKind::MulMod, a, b, n);
        const_cast<ExprNode&>(e.node()).value = mulmod_val(a.value(), b.value(), n.value());
        return e;
    }
    return ternary(ExprKind::MulMod, a, b, n);
}

Expr ExprPool::exp(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Exp;
    if (b.is_const_value() && b.value() == 0)
        return constant(1);
    if (b.is_const_value() && b.value() == 1)
        return a;
    FOLD2(wexp(a.value(), b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::signextend_(Expr b, Expr x)
{
    if (both_const(b, x))
    {
        Expr e = binary(ExprKind::SignExtend, b, x);
        const_cast<ExprNode&>(e.node()).value = signextend(b.value(), x.value());
        return e;
    }
    return binary(ExprKind::SignExtend, b, x);
}

Expr ExprPool::lt(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Lt;
    FOLD2(Word(a.value() < b.value() ? 1 : 0));
    return binary(kind, a, b);
}

Expr ExprPool::gt(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Gt;
    FOLD2(Word(a.value() > b.value() ? 1 : 0));
    return binary(kind, a, b);
}

Expr ExprPool::slt_(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Slt;
    FOLD2(Word(slt(a.value(), b.value()) ? 1 : 0));
    return binary(kind, a, b);
}

Expr ExprPool::sgt_(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Sgt;
    FOLD2(Word(slt(b.value(), a.value()) ? 1 : 0));
    return binary(kind, a, b);
}

Expr ExprPool::eq(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Eq;
    if (a == b)
        return constant(1);
    FOLD2(Word(a.value() == b.value() ? 1 : 0));
    return binary(kind, a, b);
}

Expr ExprPool::iszero(Expr a)
{
    if (a.is_const_value())
    {
        ExprNode n;
        n.kind = ExprKind::IsZero;
        n.children = {a.id()};
        Expr e = intern(std::move(n));
        const_cast<ExprNode&>(e.node()).value = Word(a.value() == 0 ? 1 : 0);
        return e;
    }
    // iszero(iszero(x)) == x when x is already 0/1-valued.
    if (a.kind() == ExprKind::IsZero && is_bit_valued(a.child(0)))
        return a.child(0);
    ExprNode n;
    n.kind = ExprKind::IsZero;
    n.children = {a.id()};
    return intern(std::move(n));
}

Expr ExprPool::and_(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::And;
    // Address-tagged symbols are already 160-bit; the compiler's mask is a no-op.
    const auto is_address_sym = [](const Expr& e) {
        return e.is_symbol() && (e.tag() == SymTag::Sender || e.tag() == SymTag::SelfAddress ||
                                    e.tag() == SymTag::Origin);
    };
    if (a.is_const_value() && a.value() == address_mask() && is_address_sym(b))
        return b;
    if (b.is_const_value() && b.value() == address_mask() && is_address_sym(a))
        return a;
    if (a.is_const_value() && a.value() == word_max())
        return b;
    if (b.is_const_value() && b.value() == word_max())
        return a;
    FOLD2(Word(a.value() & b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::or_(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Or;
    if (a.is_const_value() && a.value() == 0)
        return b;
    if (b.is_const_value() && b.value() == 0)
        return a;
    FOLD2(Word(a.value() | b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::xor_(Expr a, Expr b)
{
    const ExprKind kind = ExprKind::Xor;
    FOLD2(Word(a.value() ^ b.value()));
    return binary(kind, a, b);
}

Expr ExprPool::not_(Expr a)
{
    ExprNode n;
    n.kind = ExprKind::Not;
    n.children = {a.id()};
    Expr e = intern(std::move(n));
    if (a.is_const_value())
        const_cast<ExprNode&>(e.node()).value = Word(~a.value());
    return e;
}

Expr ExprPool::byte_(Expr i, Expr x)
{
    const ExprKind kind = ExprKind::Byte;
    Expr a = i, b = x;
    FOLD2(word_byte(a.value(), b.value()));
    return binary(kind, i, x);
}

Expr ExprPool::keccak(const std::vector<Expr>& bytes)
{
    ExprNode n;
    n.kind = ExprKind::Keccak;
    n.aux = static_cast<uint32_t>(bytes.size());
    bool concrete = true;
    for (const Expr& b : bytes)
    {
        n.children.push_back(b.id());
        concrete = concrete && b.is_const_value();
    }
    Expr e = intern(std::move(n));
    if (concrete && !e.node().value)
    {
        std::vector<uint8_t> raw;
        raw.reserve(bytes.size());
        for (const Expr& b : bytes)
            raw.push_back(static_cast<uint8_t>(b.value() & 0xff));
        const auto hash = keccak256(raw.data(), raw.size());
        const_cast<ExprNode&>(e.node()).value = word_from_bytes(hash.data(), 32);
    }
    return e;
}

#undef FOLD2

void flatten_add_rec(const ExprPool& pool, uint32_t id, std::vector<uint32_t>& out)
{
    const ExprNode& n = pool.node(id);
    if (n.kind == ExprKind::Add && !n.value.has_value())
    {
        flatten_add_rec(pool, n.children[0], out);
        flatten_add_rec(pool, n.children[1], out);
        return;
    }
    out.push_back(id);
}

std::vector<uint32_t> ExprPool::flatten_add(Expr e) const
{
    std::vector<uint32_t> parts;
    flatten_add_rec(*this, e.id(), parts);
    // Sort by a content key: concrete value first, then symbol name, then id.
    std::sort(parts.begin(), parts.end(), [this](uint32_t x, uint32_t y) {
        const ExprNode& a = node(x);
        const ExprNode& b = node(y);
        const bool ac = a.value.has_value(), bc = b.value.has_value();
        if (ac != bc)
            return ac;
        if (ac && bc && *a.value != *b.value)
            return *a.value < *b.value;
        if (a.kind != b.kind)
            return a.kind < b.kind;
        if (a.kind == ExprKind::Sym && a.name != b.name)
            return a.name < b.name;
        return x < y;
    });
    return parts;
}

bool ExprPool::equal_modulo_add(Expr a, Expr b) const
{
    if (a == b)
        return true;
    if (a.is_const_value() && b.is_const_value())
        return a.value() == b.value();
    auto fa = flatten_add(a);
    auto fb = flatten_add(b);
    if (fa.size() != fb.size())
        return false;
    for (size_t i = 0; i < fa.size(); ++i)
    {
        if (fa[i] == fb[i])
            continue;
        const ExprNode& na = node(fa[i]);
        const ExprNode& nb = node(fb[i]);
        if (na.value.has_value() && nb.value.has_value() && *na.value == *nb.value)
            continue;
        return false;
    }
    return true;
}

} // namespace honeyscan
