// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "honeyscan/word256.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace honeyscan {

// Terms of the 256-bit word logic the engine computes in. Expressions are
// hash-consed per ExprPool: structurally equal terms share one node, so
// equality is id comparison and sets/maps over expressions are cheap.
//
// Constant folding keeps the operation structure: an Add of two constants
// still has kind Add, with the concrete result cached on the node. Detector
// heuristics rely on that provenance (e.g. an AND-0xff over a MUL result).
enum class ExprKind : uint8_t {
    Const,
    Sym,     // free symbol: environment inputs, initial storage, call results
    Add, Sub, Mul, Div, SDiv, Mod, SMod, AddMod, MulMod, Exp, SignExtend,
    Lt, Gt, Slt, Sgt, Eq, IsZero,
    And, Or, Xor, Not, Byte,
    Keccak,  // uninterpreted hash over a byte vector (children = 1-byte terms)
};

/// Role tag for symbols the detectors care about.
enum class SymTag : uint8_t {
    Plain,
    CallValue,      // I_v
    Sender,         // I_s (160-bit)
    SelfAddress,    // I_a (160-bit)
    Origin,
    InitialBalance, // contract balance before the transaction value is added
    StorageInit,    // initial content of a storage cell
    CalldataWord,   // 32-byte calldata word at a concrete offset
    CalldataSize,
    BlockEnv,       // TIMESTAMP, NUMBER, ...
    CallResult,     // success flag or fresh return data of an external call
    HashBlob,       // hash of a region with symbolic length
    Other,
};

class ExprPool;

struct ExprNode {
    ExprKind kind;
    SymTag tag = SymTag::Plain;
    uint32_t id = 0;
    std::optional<Word> value;        // cached concrete value, when known
    std::vector<uint32_t> children;   // node ids
    std::string name;                 // symbols only
    uint32_t aux = 0;                 // CalldataWord offset / byte count for Keccak
};

/// Lightweight handle: pool pointer + node id. Valid while the pool lives.
class Expr {
public:
    Expr() = default;
    Expr(const ExprPool* pool, uint32_t id) : pool_(pool), id_(id) {}

    bool valid() const { return pool_ != nullptr; }
    uint32_t id() const { return id_; }
    const ExprPool* pool() const { return pool_; }
    const ExprNode& node() const;

    ExprKind kind() const { return node().kind; }
    SymTag tag() const { return node().tag; }
    bool is_const_value() const { return node().value.has_value(); }
    const Word& value() const { return *node().value; }
    bool is_symbol() const { return kind() == ExprKind::Sym; }
    size_t arity() const { return node().children.size(); }
    Expr child(size_t i) const;
    const std::string& name() const { return node().name; }

    bool operator==(const Expr& other) const { return pool_ == other.pool_ && id_ == other.id_; }
    bool operator!=(const Expr& other) const { return !(*this == other); }

    /// True if `needle` occurs in this term (including at the root).
    bool contains(const Expr& needle) const;
    /// True if some subterm satisfies the predicate.
    bool contains_if(const std::function<bool(const Expr&)>& pred) const;

    std::string to_string() const;

private:
    const ExprPool* pool_ = nullptr;
    uint32_t id_ = 0;
};

struct ExprHash {
    size_t operator()(const Expr& e) const { return e.id(); }
};

/// Owns and hash-conses the expression nodes of one contract analysis.
class ExprPool {
public:
    ExprPool();

    Expr constant(const Word& value);
    Expr symbol(const std::string& name, SymTag tag = SymTag::Plain, uint32_t aux = 0);

    // Binary/unary constructors apply light canonical simplifications and
    // evaluate concretely when every operand is concrete (structure kept).
    Expr add(Expr a, Expr b);
    Expr sub(Expr a, Expr b);
    Expr mul(Expr a, Expr b);
    Expr div(Expr a, Expr b);
    Expr sdiv_(Expr a, Expr b);
    Expr mod(Expr a, Expr b);
    Expr smod_(Expr a, Expr b);
    Expr addmod(Expr a, Expr b, Expr n);
    Expr mulmod(Expr a, Expr b, Expr n);
    Expr exp(Expr a, Expr b);
    Expr signextend_(Expr b, Expr x);
    Expr lt(Expr a, Expr b);
    Expr gt(Expr a, Expr b);
    Expr slt_(Expr a, Expr b);
    Expr sgt_(Expr a, Expr b);
    Expr eq(Expr a, Expr b);
    Expr iszero(Expr a);
    Expr and_(Expr a, Expr b);
    Expr or_(Expr a, Expr b);
    Expr xor_(Expr a, Expr b);
    Expr not_(Expr a);
    Expr byte_(Expr i, Expr x);
    /// Uninterpreted hash of `bytes` (each child is a byte-valued term).
    /// When every byte is concrete the real keccak-256 value is cached.
    Expr keccak(const std::vector<Expr>& bytes);

    Expr get(uint32_t id) const { return Expr(this, id); }
    const ExprNode& node(uint32_t id) const { return *nodes_[id]; }
    size_t size() const { return nodes_.size(); }

    /// Flattened, operand-sorted view of a commutative +-tree; used for the
    /// structural call-value comparisons. Sorting is by (kind, children, ...)
    /// content so it is stable across runs.
    std::vector<uint32_t> flatten_add(Expr e) const;
    /// Structural equality modulo +-commutativity/associativity and cached
    /// constant merging.
    bool equal_modulo_add(Expr a, Expr b) const;

private:
    Expr intern(ExprNode&& node);
    Expr binary(ExprKind kind, Expr a, Expr b);
    Expr ternary(ExprKind kind, Expr a, Expr b, Expr c);

    std::vector<std::unique_ptr<ExprNode>> nodes_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> buckets_;
    uint64_t node_key(const ExprNode& n) const;
    bool node_equal(const ExprNode& a, const ExprNode& b) const;
};

/// 2^160 - 1, the address mask the compiler applies to address-typed values.
const Word& address_mask();

} // namespace honeyscan
