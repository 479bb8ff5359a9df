// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/engine.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>

namespace honeyscan {

const char* to_string(PathTerminator t)
{
    switch (t)
    {
    case PathTerminator::Stop: return "STOP";
    case PathTerminator::Return: return "RETURN";
    case PathTerminator::Revert: return "REVERT";
    case PathTerminator::SelfDestruct: return "SELFDESTRUCT";
    case PathTerminator::Invalid: return "INVALID";
    case PathTerminator::InvalidJump: return "invalid-jump";
    case PathTerminator::LimitExceeded: return "limit-exceeded";
    }
    return "?";
}

const char* to_string(Feasibility f)
{
    switch (f)
    {
    case Feasibility::feasible: return "feasible";
    case Feasibility::infeasible: return "infeasible";
    case Feasibility::unknown: return "unknown";
    }
    return "?";
}

std::optional<Expr> AnalysisArtifacts::key_for_storage_symbol(const Expr& sym) const
{
    for (const auto& [key, symbol] : storage_reads)
        if (symbol == sym)
            return key;
    return std::nullopt;
}

namespace {

// Canonical identity of a storage cell: concrete slots by value, symbolic
// keys by hash-consed expression id.
struct KeyId {
    bool concrete;
    Word value;
    uint32_t expr_id;

    static KeyId of(const Expr& key)
    {
        if (key.is_const_value())
            return {true, key.value(), 0};
        return {false, 0, key.id()};
    }
    bool operator<(const KeyId& o) const
    {
        if (concrete != o.concrete)
            return concrete;
        if (concrete)
            return value < o.value;
        return expr_id < o.expr_id;
    }
};

struct MemCell {
    Expr word;
    uint8_t byte_index; // this memory byte holds byte `byte_index` of `word`
};

struct Blob {
    uint64_t start;
    uint32_t id;
};

struct Memory {
    std::map<uint64_t, MemCell> cells;
    std::vector<Blob> blobs; // symbolic-length copy regions
    uint64_t watermark = 0;
    uint32_t write_count = 0;

    void touch(uint64_t end)
    {
        watermark = std::max(watermark, (end + 31) / 32 * 32);
    }
};

struct Frame {
    uint32_t block = 0;           // start offset of the block to execute
    std::vector<Expr> stack;
    Memory memory;
    std::map<KeyId, std::pair<Expr, Expr>> storage; // key expr, current value
    std::vector<Expr> conditions;
    std::vector<uint32_t> trace;
    std::map<std::pair<uint32_t, uint32_t>, int> back_edges;
    uint64_t gas = 0;
    int depth = 0;                 // symbolic branch decisions taken
    bool infeasible_ctx = false;   // conditions already unsat
    size_t infeasible_from = SIZE_MAX; // index into trace where that started
    std::optional<uint32_t> function;
    Expr returndata_size;

    std::vector<CallRecord> calls;
    std::vector<StorageWrite> writes;
    std::vector<SelfDestructRecord> selfdestructs;
    std::vector<ArithRecord> arithmetic;
};

enum class Action : uint8_t { Continue, End, Jump, Branch };

struct StepOutcome {
    Action action = Action::Continue;
    PathTerminator terminator = PathTerminator::Stop;
    Expr jump_target;  // Jump/Branch
    Expr condition;    // Branch
    uint32_t fallthrough = 0;
};

class Engine {
public:
    Engine(ExprPool& pool, SolverGateway& solver, const RunConfig& config)
        : pool_(pool), solver_(solver), config_(config)
    {
    }

    AnalysisArtifacts run(const Bytecode& code)
    {
        deadline_ = std::chrono::steady_clock::now() + std::chrono::seconds(config_.global_timeout_s);

        artifacts_.seq = decode(code);
        artifacts_.cfg = build_cfg(artifacts_.seq);

        init_environment();

        if (artifacts_.seq.empty())
        {
            // Empty contract: one trivial halting path with no conditions.
            Frame frame;
            finish_path(frame, PathTerminator::Stop);
            artifacts_.coverage = 1.0;
            return std::move(artifacts_);
        }

        Frame initial;
        initial.block = artifacts_.seq.instructions.front().offset;
        initial.returndata_size = pool_.constant(0);
        worklist_.push_back(std::move(initial));

        while (!worklist_.empty())
        {
            if (std::chrono::steady_clock::now() >= deadline_)
            {
                artifacts_.complete = false;
                Frame frame = std::move(worklist_.back());
                worklist_.pop_back();
                finish_path(frame, PathTerminator::LimitExceeded);
                worklist_.clear();
                break;
            }
            Frame frame = std::move(worklist_.back());
            worklist_.pop_back();
            execute_block(std::move(frame));
        }

        artifacts_.coverage = artifacts_.seq.instructions.empty()
            ? 1.0
            : double(visited_.size()) / double(artifacts_.seq.instructions.size());
        return std::move(artifacts_);
    }

private:
    ExprPool& pool_;
    SolverGateway& solver_;
    RunConfig config_;
    AnalysisArtifacts artifacts_;
    std::vector<Frame> worklist_;
    std::chrono::steady_clock::time_point deadline_;

    std::set<uint32_t> visited_; // instruction offsets
    std::map<KeyId, Expr> storage_init_;
    std::map<uint32_t, Expr> calldata_words_;    // concrete offset -> symbol
    std::map<uint32_t, Expr> calldata_sym_;      // symbolic offset expr id -> symbol
    std::map<uint32_t, Expr> balance_memo_;      // address expr id -> symbol
    std::map<uint32_t, Expr> extcodesize_memo_;
    std::map<uint32_t, Expr> blockhash_memo_;
    std::map<std::string, Expr> misc_memo_;      // deterministic one-off symbols
    size_t call_counter_ = 0;
    uint32_t blob_counter_ = 0;
    uint32_t gas_sym_counter_ = 0;
    uint32_t jump_probe_counter_ = 0;

    Expr c(const Word& w) { return pool_.constant(w); }

    void init_environment()
    {
        auto& env = artifacts_.env;
        env.contract_address = pool_.symbol("Ia", SymTag::SelfAddress);
        env.sender = pool_.symbol("Is", SymTag::Sender);
        env.call_value = pool_.symbol("Iv", SymTag::CallValue);
        env.origin = pool_.symbol("Io", SymTag::Origin);
        env.calldata_size = pool_.symbol("Dsize", SymTag::CalldataSize);
        artifacts_.initial_balance = pool_.symbol("B", SymTag::InitialBalance);
        // The contract balance observed during execution already includes
        // the transaction value.
        artifacts_.self_balance = pool_.add(artifacts_.initial_balance, env.call_value);

        // A honeypot under analysis is pre-funded: the balance is positive.
        // Value and balance stay far below 2^200 so sums cannot wrap; real
        // ether amounts are below 2^90.
        const Expr cap = c(Word(1) << 200);
        artifacts_.base_constraints = {
            pool_.iszero(pool_.lt(artifacts_.initial_balance, c(1))), // B >= 1
            pool_.lt(artifacts_.initial_balance, cap),
            pool_.lt(artifacts_.env.call_value, cap),
        };
    }

    std::vector<Expr> with_base(const std::vector<Expr>& conditions) const
    {
        std::vector<Expr> all = artifacts_.base_constraints;
        all.insert(all.end(), conditions.begin(), conditions.end());
        return all;
    }

    // ------------------------------------------------------------------
    // Storage and environment reads

    Expr storage_read(Frame& frame, const Expr& key)
    {
        const KeyId id = KeyId::of(key);
        if (auto it = frame.storage.find(id); it != frame.storage.end())
            return it->second.second;
        if (auto it = storage_init_.find(id); it != storage_init_.end())
            return it->second;
        const std::string name = "S" + std::to_string(storage_init_.size());
        const Expr sym = pool_.symbol(name, SymTag::StorageInit);
        storage_init_.emplace(id, sym);
        artifacts_.storage_reads.emplace_back(key, sym);
        return sym;
    }

    Expr calldata_word(Frame& frame, const Expr& offset)
    {
        if (offset.is_const_value() && offset.value() < (Word(1) << 32))
        {
            const auto off = static_cast<uint32_t>(offset.value());
            auto it = calldata_words_.find(off);
            if (it == calldata_words_.end())
            {
                const Expr sym =
                    pool_.symbol("D" + std::to_string(off), SymTag::CalldataWord, off);
                it = calldata_words_.emplace(off, sym).first;
            }
            if (frame.function && off >= 4)
                artifacts_.function_calldata_offsets[*frame.function].insert(off);
            return it->second;
        }
        auto it = calldata_sym_.find(offset.id());
        if (it == calldata_sym_.end())
        {
            const Expr sym = pool_.symbol("Dsym" + std::to_string(offset.id()), SymTag::CalldataWord);
            it = calldata_sym_.emplace(offset.id(), sym).first;
        }
        return it->second;
    }

    Expr balance_of(const Expr& address)
    {
        if (address == artifacts_.env.contract_address)
            return artifacts_.self_balance;
        auto it = balance_memo_.find(address.id());
        if (it == balance_memo_.end())
        {
            const Expr sym = pool_.symbol("bal" + std::to_string(address.id()), SymTag::Other);
            it = balance_memo_.emplace(address.id(), sym).first;
        }
        return it->second;
    }

    Expr env_symbol(const char* name)
    {
        auto it = misc_memo_.find(name);
        if (it == misc_memo_.end())
            it = misc_memo_.emplace(name, pool_.symbol(name, SymTag::BlockEnv)).first;
        return it->second;
    }

    // ------------------------------------------------------------------
    // Memory

    void mem_store_word(Memory& mem, uint64_t offset, const Expr& word)
    {
        for (unsigned i = 0; i < 32; ++i)
            mem.cells[offset + i] = MemCell{word, static_cast<uint8_t>(i)};
        mem.touch(offset + 32);
        ++mem.write_count;
    }

    void mem_store_byte(Memory& mem, uint64_t offset, const Expr& word)
    {
        mem.cells[offset] = MemCell{word, 31};
        mem.touch(offset + 1);
        ++mem.write_count;
    }

    const Blob* blob_at(const Memory& mem, uint64_t offset) const
    {
        // Blobs extend to the next explicit cell or blob; treat any offset at
        // or past a blob start with no covering cell as inside the blob.
        const Blob* best = nullptr;
        for (const auto& blob : mem.blobs)
            if (blob.start <= offset && (!best || blob.start > best->start))
                best = &blob;
        return best;
    }

    Expr blob_word(const Blob& blob, uint64_t rel)
    {
        const std::string name =
            "blob" + std::to_string(blob.id) + "_w" + std::to_string(rel);
        auto it = misc_memo_.find(name);
        if (it == misc_memo_.end())
            it = misc_memo_.emplace(name, pool_.symbol(name, SymTag::Other)).first;
        return it->second;
    }

    Expr mem_load_word(Frame& frame, uint64_t offset)
    {
        Memory& mem = frame.memory;
        mem.touch(offset + 32);

        // Fast path: 32 contiguous bytes of one stored word.
        const auto first = mem.cells.find(offset);
        if (first != mem.cells.end() && first->second.byte_index == 0)
        {
            bool aligned = true;
            for (unsigned i = 1; i < 32 && aligned; ++i)
            {
                const auto it = mem.cells.find(offset + i);
                aligned = it != mem.cells.end() && it->second.word == first->second.word &&
                    it->second.byte_index == i;
            }
            if (aligned)
                return first->second.word;
        }

        // Byte-wise composition; uninitialized bytes read zero.
        Expr word = c(0);
        for (unsigned i = 0; i < 32; ++i)
        {
            Expr byte = byte_at(frame, offset + i);
            if (byte.is_const_value() && byte.value() == 0)
                continue;
            const unsigned shift_bits = 8 * (31 - i);
            const Expr shifted = shift_bits == 0 ? byte : pool_.mul(byte, c(Word(1) << shift_bits));
            word = word.is_const_value() && word.value() == 0 ? shifted : pool_.or_(word, shifted);
        }
        return word;
    }

    Expr byte_at(Frame& frame, uint64_t offset)
    {
        const Memory& mem = frame.memory;
        const auto it = mem.cells.find(offset);
        if (it != mem.cells.end())
        {
            const MemCell& cell = it->second;
            if (cell.word.is_const_value())
                return c(word_byte(cell.byte_index, cell.word.value()));
            return pool_.byte_(c(cell.byte_index), cell.word);
        }
        if (const Blob* blob = blob_at(mem, offset))
        {
            const uint64_t rel = offset - blob->start;
            return pool_.byte_(c(rel % 32), blob_word(*blob, rel / 32 * 32));
        }
        return c(0);
    }

    // ------------------------------------------------------------------
    // Feasibility plumbing

    void check_fork_feasibility(Frame& frame)
    {
        if (frame.infeasible_ctx)
            return; // unsat is monotone under added constraints
        const auto result = solver_.check(with_base(frame.conditions));
        if (result.verdict == Verdict::unsat)
        {
            frame.infeasible_ctx = true;
            frame.infeasible_from = frame.trace.size();
        }
    }

    void finish_path(Frame& frame, PathTerminator terminator)
    {
        ExecutionPath path;
        path.id = artifacts_.paths.size();
        path.blocks = frame.trace;
        path.conditions = frame.conditions;
        path.terminator = terminator;
        path.function = frame.function;
        path.call_count = frame.calls.size();
        path.final_stack = frame.stack;
        for (const auto& [id, kv] : frame.storage)
            path.final_storage.emplace_back(kv.first, kv.second);

        if (frame.infeasible_ctx)
        {
            path.feasibility = Feasibility::infeasible;
        }
        else
        {
            const auto result = solver_.check(with_base(frame.conditions));
            path.feasibility = result.verdict == Verdict::sat ? Feasibility::feasible
                : result.verdict == Verdict::unsat             ? Feasibility::infeasible
                                                               : Feasibility::unknown;
        }

        for (size_t i = 0; i < frame.trace.size(); ++i)
        {
            if (i >= frame.infeasible_from)
            {
                artifacts_.infeasible_blocks.insert(frame.trace[i]);
                artifacts_.cfg.infeasible_blocks.insert(frame.trace[i]);
            }
            else
            {
                artifacts_.feasible_blocks.insert(frame.trace[i]);
                artifacts_.cfg.feasible_blocks.insert(frame.trace[i]);
            }
        }

        for (auto& call : frame.calls)
        {
            call.path_id = path.id;
            artifacts_.calls.push_back(std::move(call));
        }
        for (auto& write : frame.writes)
        {
            write.path_id = path.id;
            artifacts_.storage_writes.push_back(std::move(write));
        }
        for (auto& sd : frame.selfdestructs)
        {
            sd.path_id = path.id;
            artifacts_.selfdestructs.push_back(std::move(sd));
        }
        for (auto& ar : frame.arithmetic)
        {
            ar.path_id = path.id;
            artifacts_.arithmetic.push_back(std::move(ar));
        }
        artifacts_.paths.push_back(std::move(path));
    }

    // ------------------------------------------------------------------
    // Control flow

    void take_jump(Frame&& frame, const Expr& target, uint32_t source_block)
    {
        if (target.is_const_value())
        {
            follow_concrete_jump(std::move(frame), target.value(), source_block);
            return;
        }

        // Computed jump: enumerate a bounded number of concrete targets
        // restricted to valid jump destinations.
        std::vector<Word> found;
        for (int probe = 0; probe < config_.jump_model_limit; ++probe)
        {
            const Expr probe_sym =
                pool_.symbol("jmp" + std::to_string(jump_probe_counter_++), SymTag::Other);
            std::vector<Expr> query = with_base(frame.conditions);
            query.push_back(pool_.eq(probe_sym, target));
            Expr in_dests = c(0);
            for (uint32_t dest : artifacts_.cfg.jumpdests)
                in_dests = pool_.or_(in_dests, pool_.eq(probe_sym, c(dest)));
            query.push_back(in_dests);
            for (const Word& prev : found)
                query.push_back(pool_.iszero(pool_.eq(probe_sym, c(prev))));

            const auto result = solver_.check(query, true);
            if (result.verdict != Verdict::sat)
                break;
            const auto it = result.model.find(probe_sym.name());
            if (it == result.model.end())
                break;
            found.push_back(it->second);
        }
        if (found.empty())
        {
            finish_path(frame, PathTerminator::InvalidJump);
            return;
        }
        for (size_t i = 0; i < found.size(); ++i)
        {
            Frame fork = (i + 1 == found.size()) ? std::move(frame) : frame;
            fork.conditions.push_back(pool_.eq(target, c(found[i])));
            follow_concrete_jump(std::move(fork), found[i], source_block);
        }
    }

    void follow_concrete_jump(Frame&& frame, const Word& target, uint32_t source_block)
    {
        if (target >= (Word(1) << 32))
        {
            finish_path(frame, PathTerminator::InvalidJump);
            return;
        }
        const auto offset = static_cast<uint32_t>(target);
        if (!add_dynamic_edge(artifacts_.cfg, source_block, offset))
        {
            finish_path(frame, PathTerminator::InvalidJump);
            return;
        }
        if (offset <= source_block)
        {
            int& count = frame.back_edges[{source_block, offset}];
            ++count;
            if (count > config_.loop_limit)
            {
                finish_path(frame, PathTerminator::LimitExceeded);
                return;
            }
        }
        frame.block = offset;
        worklist_.push_back(std::move(frame));
    }

    // ------------------------------------------------------------------

    void execute_block(Frame&& frame)
    {
        const BasicBlock* block = artifacts_.cfg.block_at(frame.block);
        if (!block)
        {
            finish_path(frame, PathTerminator::InvalidJump);
            return;
        }
        frame.trace.push_back(block->start);

        StepOutcome outcome;
        for (size_t i = 0; i < block->instr_count; ++i)
        {
            const Instruction& instr = artifacts_.seq.instructions[block->first_instr + i];
            visited_.insert(instr.offset);

            frame.gas += opcode_info(instr.opcode).gas;
            if (frame.gas > config_.gas_limit)
            {
                finish_path(frame, PathTerminator::LimitExceeded);
                return;
            }

            outcome = step(frame, instr, *block);
            if (outcome.action == Action::End)
            {
                finish_path(frame, outcome.terminator);
                return;
            }
            if (outcome.action != Action::Continue)
                break;
        }

        switch (outcome.action)
        {
        case Action::Continue:
        {
            // Block ended without an explicit terminator: fall through.
            const uint32_t next = block->end_offset(artifacts_.seq);
            if (!artifacts_.cfg.blocks.count(next))
            {
                finish_path(frame, PathTerminator::Stop); // ran off the code
                return;
            }
            frame.block = next;
            worklist_.push_back(std::move(frame));
            return;
        }
        case Action::Jump:
            take_jump(std::move(frame), outcome.jump_target, block->start);
            return;
        case Action::Branch:
        {
            const Expr& cond = outcome.condition;
            if (cond.is_const_value())
            {
                // Dead branch pruned only when the condition is concrete.
                if (cond.value() != 0)
                    take_jump(std::move(frame), outcome.jump_target, block->start);
                else
                {
                    frame.block = outcome.fallthrough;
                    if (artifacts_.cfg.blocks.count(outcome.fallthrough))
                        worklist_.push_back(std::move(frame));
                    else
                        finish_path(frame, PathTerminator::Stop);
                }
                return;
            }
            if (frame.depth >= config_.depth_limit)
            {
                finish_path(frame, PathTerminator::LimitExceeded);
                return;
            }

            Frame taken = frame;
            taken.depth = frame.depth + 1;
            taken.conditions.push_back(cond);
            note_dispatch(taken, cond);
            check_fork_feasibility(taken);

            Frame fall = std::move(frame);
            fall.depth = taken.depth;
            fall.conditions.push_back(pool_.iszero(cond));
            check_fork_feasibility(fall);

            // Fallthrough is pushed first so the taken branch explores first.
            if (artifacts_.cfg.blocks.count(outcome.fallthrough))
            {
                fall.block = outcome.fallthrough;
                worklist_.push_back(std::move(fall));
            }
            else
            {
                finish_path(fall, PathTerminator::Stop);
            }
            take_jump(std::move(taken), outcome.jump_target, block->start);
            return;
        }
        default:
            finish_path(frame, PathTerminator::Stop);
            return;
        }
    }

    // Tags the frame with the dispatched function when a selector
    // comparison is asserted: EQ(const, f(calldata word 0)).
    void note_dispatch(Frame& frame, const Expr& cond)
    {
        if (frame.function || cond.kind() != ExprKind::Eq)
            return;
        Expr lhs = cond.child(0), rhs = cond.child(1);
        if (!lhs.is_const_value())
            std::swap(lhs, rhs);
        if (!lhs.is_const_value() || lhs.value() >= (Word(1) << 32))
            return;
        const bool on_first_word = rhs.contains_if([](const Expr& e) {
            return e.tag() == SymTag::CalldataWord && e.is_symbol() && e.node().aux == 0 &&
                e.name() == "D0";
        });
        const bool divides = rhs.contains_if([](const Expr& e) { return e.kind() == ExprKind::Div; });
        if (on_first_word && divides)
            frame.function = static_cast<uint32_t>(lhs.value());
    }

    // ------------------------------------------------------------------
    // Instruction semantics

    StepOutcome step(Frame& frame, const Instruction& instr, const BasicBlock& block)
    {
        StepOutcome out;
        auto end = [&](PathTerminator t) {
            out.action = Action::End;
            out.terminator = t;
            return out;
        };

        const OpInfo& info = opcode_info(instr.opcode);
        if (!info.defined)
            return end(PathTerminator::Invalid);
        if (frame.stack.size() < info.pops)
            return end(PathTerminator::Invalid); // stack underflow aborts the path
        if (frame.stack.size() - info.pops + info.pushes > 1024)
            return end(PathTerminator::Invalid); // stack overflow

        auto pop = [&]() {
            Expr e = frame.stack.back();
            frame.stack.pop_back();
            return e;
        };
        auto push = [&](Expr e) { frame.stack.push_back(e); };

        switch (instr.opcode)
        {
        case OP_STOP:
            return end(PathTerminator::Stop);

        case OP_ADD:
        {
            const Expr a = pop(), b = pop();
            const Expr r = pool_.add(a, b);
            frame.arithmetic.push_back({ArithRecord::Op::Add, a, b, r, 0});
            push(r);
            break;
        }
        case OP_MUL:
        {
            const Expr a = pop(), b = pop();
            const Expr r = pool_.mul(a, b);
            frame.arithmetic.push_back({ArithRecord::Op::Mul, a, b, r, 0});
            push(r);
            break;
        }
        case OP_SUB:
        {
            const Expr a = pop(), b = pop();
            push(pool_.sub(a, b));
            break;
        }
        case OP_DIV:
        {
            const Expr a = pop(), b = pop();
            push(pool_.div(a, b));
            break;
        }
        case OP_SDIV:
        {
            const Expr a = pop(), b = pop();
            push(pool_.sdiv_(a, b));
            break;
        }
        case OP_MOD:
        {
            const Expr a = pop(), b = pop();
            push(pool_.mod(a, b));
            break;
        }
        case OP_SMOD:
        {
            const Expr a = pop(), b = pop();
            push(pool_.smod_(a, b));
            break;
        }
        case OP_ADDMOD:
        {
            const Expr a = pop(), b = pop(), n = pop();
            push(pool_.addmod(a, b, n));
            break;
        }
        case OP_MULMOD:
        {
            const Expr a = pop(), b = pop(), n = pop();
            push(pool_.mulmod(a, b, n));
            break;
        }
        case OP_EXP:
        {
            const Expr a = pop(), b = pop();
            push(pool_.exp(a, b));
            break;
        }
        case OP_SIGNEXTEND:
        {
            const Expr b = pop(), x = pop();
            push(pool_.signextend_(b, x));
            break;
        }

        case OP_LT:
        {
            const Expr a = pop(), b = pop();
            push(pool_.lt(a, b));
            break;
        }
        case OP_GT:
        {
            const Expr a = pop(), b = pop();
            push(pool_.gt(a, b));
            break;
        }
        case OP_SLT:
        {
            const Expr a = pop(), b = pop();
            push(pool_.slt_(a, b));
            break;
        }
        case OP_SGT:
        {
            const Expr a = pop(), b = pop();
            push(pool_.sgt_(a, b));
            break;
        }
        case OP_EQ:
        {
            const Expr a = pop(), b = pop();
            push(pool_.eq(a, b));
            break;
        }
        case OP_ISZERO:
            push(pool_.iszero(pop()));
            break;
        case OP_AND:
        {
            const Expr a = pop(), b = pop();
            push(pool_.and_(a, b));
            break;
        }
        case OP_OR:
        {
            const Expr a = pop(), b = pop();
            push(pool_.or_(a, b));
            break;
        }
        case OP_XOR:
        {
            const Expr a = pop(), b = pop();
            push(pool_.xor_(a, b));
            break;
        }
        case OP_NOT:
            push(pool_.not_(pop()));
            break;
        case OP_BYTE:
        {
            const Expr i = pop(), x = pop();
            push(pool_.byte_(i, x));
            break;
        }

        case OP_SHA3:
        {
            const Expr off = pop(), len = pop();
            push(hash_memory(frame, off, len));
            break;
        }

        case OP_ADDRESS:
            push(artifacts_.env.contract_address);
            break;
        case OP_BALANCE:
            push(balance_of(pop()));
            break;
        case OP_ORIGIN:
            push(artifacts_.env.origin);
            break;
        case OP_CALLER:
            push(artifacts_.env.sender);
            break;
        case OP_CALLVALUE:
            push(artifacts_.env.call_value);
            break;
        case OP_CALLDATALOAD:
            push(calldata_word(frame, pop()));
            break;
        case OP_CALLDATASIZE:
            push(artifacts_.env.calldata_size);
            break;
        case OP_CALLDATACOPY:
        {
            const Expr dst = pop(), src = pop(), len = pop();
            copy_calldata(frame, dst, src, len);
            break;
        }
        case OP_CODESIZE:
            push(c(artifacts_.seq.code_end()));
            break;
        case OP_CODECOPY:
        {
            const Expr dst = pop(), src = pop(), len = pop();
            copy_code(frame, dst, src, len);
            break;
        }
        case OP_GASPRICE:
            push(env_symbol("gasprice"));
            break;
        case OP_EXTCODESIZE:
        {
            const Expr addr = pop();
            auto it = extcodesize_memo_.find(addr.id());
            if (it == extcodesize_memo_.end())
                it = extcodesize_memo_
                         .emplace(addr.id(),
                             pool_.symbol("extcodesize" + std::to_string(addr.id()), SymTag::Other))
                         .first;
            push(it->second);
            break;
        }
        case OP_EXTCODECOPY:
            pop(), pop(), pop(), pop();
            break;
        case OP_RETURNDATASIZE:
            push(frame.returndata_size);
            break;
        case OP_RETURNDATACOPY:
        {
            const Expr dst = pop();
            pop(), pop();
            if (dst.is_const_value())
            {
                // Unknown foreign data: fresh word at the destination.
                mem_store_word(frame.memory, static_cast<uint64_t>(dst.value()),
                    pool_.symbol("retdata" + std::to_string(call_counter_) + "_" +
                            std::to_string(frame.memory.write_count),
                        SymTag::CallResult));
            }
            break;
        }

        case OP_BLOCKHASH:
        {
            const Expr n = pop();
            auto it = blockhash_memo_.find(n.id());
            if (it == blockhash_memo_.end())
                it = blockhash_memo_
                         .emplace(n.id(),
                             pool_.symbol("blockhash" + std::to_string(n.id()), SymTag::BlockEnv))
                         .first;
            push(it->second);
            break;
        }
        case OP_COINBASE:
            push(env_symbol("coinbase"));
            break;
        case OP_TIMESTAMP:
            push(env_symbol("timestamp"));
            break;
        case OP_NUMBER:
            push(env_symbol("blocknumber"));
            break;
        case OP_DIFFICULTY:
            push(env_symbol("difficulty"));
            break;
        case OP_GASLIMIT:
            push(env_symbol("blockgaslimit"));
            break;

        case OP_POP:
            pop();
            break;
        case OP_MLOAD:
        {
            const Expr off = pop();
            if (off.is_const_value() && off.value() < (Word(1) << 32))
            {
                push(mem_load_word(frame, static_cast<uint64_t>(off.value())));
            }
            else
            {
                const std::string name = "mload" + std::to_string(off.id()) + "_" +
                    std::to_string(frame.memory.write_count);
                push(pool_.symbol(name, SymTag::Other));
            }
            break;
        }
        case OP_MSTORE:
        {
            const Expr off = pop(), val = pop();
            if (off.is_const_value() && off.value() < (Word(1) << 32))
                mem_store_word(frame.memory, static_cast<uint64_t>(off.value()), val);
            else
                ++frame.memory.write_count; // unknown destination, content dropped
            break;
        }
        case OP_MSTORE8:
        {
            const Expr off = pop(), val = pop();
            if (off.is_const_value() && off.value() < (Word(1) << 32))
                mem_store_byte(frame.memory, static_cast<uint64_t>(off.value()), val);
            else
                ++frame.memory.write_count;
            break;
        }
        case OP_SLOAD:
            push(storage_read(frame, pop()));
            break;
        case OP_SSTORE:
        {
            const Expr key = pop(), value = pop();
            StorageWrite write;
            write.key = key;
            write.value = value;
            write.previous = storage_read(frame, key);
            write.block_offset = block.start;
            write.in_infeasible_block = frame.infeasible_ctx;
            write.conditions = frame.conditions;
            write.function = frame.function;
            frame.writes.push_back(std::move(write));
            frame.storage[KeyId::of(key)] = {key, value};
            break;
        }
        case OP_JUMP:
            out.action = Action::Jump;
            out.jump_target = pop();
            return out;
        case OP_JUMPI:
        {
            out.action = Action::Branch;
            out.jump_target = pop();
            out.condition = pop();
            out.fallthrough = instr.next_offset();
            return out;
        }
        case OP_PC:
            push(c(instr.offset));
            break;
        case OP_MSIZE:
            push(c(frame.memory.watermark));
            break;
        case OP_GAS:
            push(pool_.symbol("gas" + std::to_string(gas_sym_counter_++), SymTag::Other));
            break;
        case OP_JUMPDEST:
            break;

        case OP_CREATE:
        {
            pop(), pop(), pop();
            push(pool_.symbol("create" + std::to_string(call_counter_++), SymTag::CallResult));
            break;
        }
        case OP_CALL:
        case OP_CALLCODE:
        {
            const Expr gas = pop(), to = pop(), value = pop();
            const Expr in_off = pop(), in_size = pop();
            const Expr out_off = pop(), out_size = pop();
            do_call(frame, block, CallKind::Call, gas, to, value, in_off, in_size, out_off,
                out_size, /*record=*/instr.opcode == OP_CALL);
            break;
        }
        case OP_DELEGATECALL:
        case OP_STATICCALL:
        {
            const Expr gas = pop(), to = pop();
            const Expr in_off = pop(), in_size = pop();
            const Expr out_off = pop(), out_size = pop();
            do_call(frame, block, CallKind::DelegateCall, gas, to, c(0), in_off, in_size, out_off,
                out_size, /*record=*/instr.opcode == OP_DELEGATECALL);
            break;
        }

        case OP_RETURN:
            pop(), pop();
            return end(PathTerminator::Return);
        case OP_REVERT:
            pop(), pop();
            return end(PathTerminator::Revert);
        case OP_INVALID:
            return end(PathTerminator::Invalid);
        case OP_SELFDESTRUCT:
        {
            const Expr beneficiary = pop();
            SelfDestructRecord record;
            record.beneficiary = beneficiary;
            record.conditions = frame.conditions;
            frame.selfdestructs.push_back(std::move(record));
            return end(PathTerminator::SelfDestruct);
        }

        default:
            if (is_push(instr.opcode))
            {
                push(c(instr.push_value()));
                break;
            }
            if (is_dup(instr.opcode))
            {
                const unsigned n = instr.opcode - OP_DUP1 + 1;
                push(frame.stack[frame.stack.size() - n]);
                break;
            }
            if (is_swap(instr.opcode))
            {
                const unsigned n = instr.opcode - OP_SWAP1 + 1;
                std::swap(frame.stack.back(), frame.stack[frame.stack.size() - 1 - n]);
                break;
            }
            if (is_log(instr.opcode))
            {
                const unsigned topics = instr.opcode - OP_LOG0;
                for (unsigned i = 0; i < 2 + topics; ++i)
                    pop();
                break;
            }
            return end(PathTerminator::Invalid);
        }
        return out;
    }

    // ------------------------------------------------------------------
    // Composite operations

    Expr hash_memory(Frame& frame, const Expr& off, const Expr& len)
    {
        constexpr uint64_t max_concrete = 4096;
        if (off.is_const_value() && len.is_const_value() && len.value() <= max_concrete)
        {
            const auto base = static_cast<uint64_t>(off.value());
            const auto count = static_cast<uint64_t>(len.value());
            frame.memory.touch(base + count);
            std::vector<Expr> bytes;
            bytes.reserve(count);
            bool blob_hit = false;
            for (uint64_t i = 0; i < count; ++i)
            {
                const auto cell = frame.memory.cells.find(base + i);
                if (cell == frame.memory.cells.end() && blob_at(frame.memory, base + i))
                {
                    blob_hit = true;
                    break;
                }
                bytes.push_back(byte_at(frame, base + i));
            }
            if (!blob_hit)
                return pool_.keccak(bytes);
        }
        // Symbolic length (or blob content): one stable symbol per
        // (offset, length, memory generation) triple.
        const std::string name = "sha3_" + std::to_string(off.id()) + "_" +
            std::to_string(len.id()) + "_" + std::to_string(frame.memory.write_count);
        auto it = misc_memo_.find(name);
        if (it == misc_memo_.end())
            it = misc_memo_.emplace(name, pool_.symbol(name, SymTag::HashBlob)).first;
        return it->second;
    }

    void copy_calldata(Frame& frame, const Expr& dst, const Expr& src, const Expr& len)
    {
        if (!dst.is_const_value() || dst.value() >= (Word(1) << 32))
        {
            ++frame.memory.write_count;
            return;
        }
        const auto base = static_cast<uint64_t>(dst.value());
        if (len.is_const_value() && src.is_const_value() && len.value() <= 4096)
        {
            const auto count = static_cast<uint64_t>(len.value());
            const auto data_base = src.value();
            for (uint64_t i = 0; i < count; i += 32)
            {
                const Expr word = calldata_word(frame, c(data_base + i));
                const uint64_t chunk = std::min<uint64_t>(32, count - i);
                for (uint64_t j = 0; j < chunk; ++j)
                    frame.memory.cells[base + i + j] = MemCell{word, static_cast<uint8_t>(j)};
            }
            frame.memory.touch(base + count);
            ++frame.memory.write_count;
            return;
        }
        // Symbolic length: the region becomes an opaque blob.
        frame.memory.blobs.push_back(Blob{base, blob_counter_++});
        ++frame.memory.write_count;
    }

    void copy_code(Frame& frame, const Expr& dst, const Expr& src, const Expr& len)
    {
        if (!dst.is_const_value() || !src.is_const_value() || !len.is_const_value() ||
            len.value() > 65536)
        {
            if (dst.is_const_value())
                frame.memory.blobs.push_back(
                    Blob{static_cast<uint64_t>(dst.value()), blob_counter_++});
            ++frame.memory.write_count;
            return;
        }
        const auto bytes = encode(artifacts_.seq);
        const auto base = static_cast<uint64_t>(dst.value());
        const auto from = static_cast<uint64_t>(src.value());
        const auto count = static_cast<uint64_t>(len.value());
        for (uint64_t i = 0; i < count; ++i)
        {
            const uint8_t value = from + i < bytes.size() ? bytes[from + i] : 0;
            frame.memory.cells[base + i] = MemCell{c(value), 31};
        }
        frame.memory.touch(base + count);
        ++frame.memory.write_count;
    }

    void do_call(Frame& frame, const BasicBlock& block, CallKind kind, const Expr& gas,
        const Expr& to, const Expr& value, const Expr& in_off, const Expr& in_size,
        const Expr& out_off, const Expr& out_size, bool record)
    {
        const size_t call_id = call_counter_++;

        if (record)
        {
            CallRecord call;
            call.id = call_id;
            call.kind = kind;
            call.recipient = to;
            call.value = value;
            call.gas = gas;
            call.block_offset = block.start;
            call.block_infeasible = frame.infeasible_ctx;
            call.order_in_path = frame.calls.size();
            call.path_conditions = frame.conditions;
            call.caller_function = frame.function;

            // Recover the called function and its arguments from the input
            // memory region when the bounds are concrete.
            if (in_off.is_const_value() && in_size.is_const_value() &&
                in_size.value() <= 4096)
            {
                const auto base = static_cast<uint64_t>(in_off.value());
                const auto count = static_cast<uint64_t>(in_size.value());
                if (count == 0)
                {
                    call.is_ether_transfer = true;
                }
                else if (count >= 4)
                {
                    Word selector = 0;
                    bool selector_concrete = true;
                    for (uint64_t i = 0; i < 4; ++i)
                    {
                        const Expr byte = byte_at(frame, base + i);
                        if (!byte.is_const_value())
                        {
                            selector_concrete = false;
                            break;
                        }
                        selector = (selector << 8) | byte.value();
                    }
                    if (selector_concrete)
                        call.selector = static_cast<uint32_t>(selector);
                    for (uint64_t word_off = 4; word_off + 32 <= count; word_off += 32)
                        call.args.push_back(mem_load_word(frame, base + word_off));
                }
            }
            frame.calls.push_back(std::move(call));
        }

        // Foreign code is not executed: a fresh success flag comes back and
        // the output region holds fresh words.
        frame.stack.push_back(
            pool_.symbol("callok" + std::to_string(call_id), SymTag::CallResult));
        frame.returndata_size =
            pool_.symbol("rds" + std::to_string(call_id), SymTag::CallResult);
        if (out_off.is_const_value() && out_size.is_const_value() && out_size.value() <= 4096)
        {
            const auto base = static_cast<uint64_t>(out_off.value());
            const auto count = static_cast<uint64_t>(out_size.value());
            for (uint64_t i = 0; i < count; i += 32)
                mem_store_word(frame.memory, base + i,
                    pool_.symbol(
                        "ret" + std::to_string(call_id) + "_w" + std::to_string(i / 32),
                        SymTag::CallResult));
        }
    }
};

} // namespace

SymbolicEngine::SymbolicEngine(ExprPool& pool, SolverGateway& solver, RunConfig config)
    : pool_(pool), solver_(solver), config_(config)
{
}

AnalysisArtifacts SymbolicEngine::explore(const Bytecode& code)
{
    Engine engine(pool_, solver_, config_);
    return engine.run(code);
}

AnalysisArtifacts explore(const Bytecode& code, ExprPool& pool, SolverGateway& solver,
    const RunConfig& config)
{
    SymbolicEngine engine(pool, solver, config);
    return engine.explore(code);
}

} // namespace honeyscan
