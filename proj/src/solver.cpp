// honeyscan: honeypot detection for Ethereum smart contracts
// Copyright 2026 The honeyscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "honeyscan/solver.hpp"

#include <algorithm>
#include <csignal>
#include <cstring>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace honeyscan {

namespace {

std::string hex_literal(const Word& w)
{
    std::ostringstream os;
    os << std::hex << std::setw(64) << std::setfill('0') << w;
    return "#x" + os.str();
}

// Emits each internal node once as a define-fun so the query stays linear
// in the size of the expression DAG.
class SmtEmitter {
public:
    void add_constraint(Expr e) { roots_.push_back(e); }

    std::string render(bool want_model)
    {
        for (const Expr& e : roots_)
            visit(e);

        std::ostringstream out;
        out << "(reset)\n";
        out << "(set-logic QF_AUFBV)\n";
        for (const auto& decl : decl_set_) // sorted: declarations are order-free
            out << decl << "\n";
        for (const auto& [id, def] : defs_) // id order is topological
            out << def << "\n";
        std::vector<std::string> asserts;
        asserts.reserve(roots_.size());
        for (const Expr& e : roots_)
            asserts.push_back("(assert " + as_bool(e) + ")");
        std::sort(asserts.begin(), asserts.end());
        asserts.erase(std::unique(asserts.begin(), asserts.end()), asserts.end());
        for (const auto& a : asserts)
            out << a << "\n";
        out << "(check-sat)\n";
        if (want_model)
            out << "(get-model)\n";
        return out.str();
    }

private:
    std::vector<Expr> roots_;
    std::map<uint32_t, std::string> names_;
    std::set<std::string> decl_set_;
    std::map<uint32_t, std::string> defs_;

    void declare(const std::string& text) { decl_set_.insert(text); }

    std::string ref(Expr e) { return visit(e); }

    std::string bv8(Expr e) { return "((_ extract 7 0) " + ref(e) + ")"; }

    // Boolean view of a word term, for assertions.
    std::string as_bool(Expr e)
    {
        switch (e.kind())
        {
        case ExprKind::Lt:
            return "(bvult " + ref(e.child(0)) + " " + ref(e.child(1)) + ")";
        case ExprKind::Gt:
            return "(bvugt " + ref(e.child(0)) + " " + ref(e.child(1)) + ")";
        case ExprKind::Slt:
            return "(bvslt " + ref(e.child(0)) + " " + ref(e.child(1)) + ")";
        case ExprKind::Sgt:
            return "(bvsgt " + ref(e.child(0)) + " " + ref(e.child(1)) + ")";
        case ExprKind::Eq:
            return "(= " + ref(e.child(0)) + " " + ref(e.child(1)) + ")";
        case ExprKind::IsZero:
            return "(not " + as_bool(e.child(0)) + ")";
        default:
            return "(distinct " + ref(e) + " " + hex_literal(0) + ")";
        }
    }

    std::string visit(Expr e)
    {
        auto it = names_.find(e.id());
        if (it != names_.end())
            return it->second;
        std::string name = build(e);
        names_.emplace(e.id(), name);
        return name;
    }

    std::string define(Expr e, const std::string& body)
    {
        const std::string name = "e" + std::to_string(e.id());
        defs_[e.id()] = "(define-fun " + name + " () (_ BitVec 256) " + body + ")";
        return name;
    }

    std::string bool_to_word(const std::string& cond)
    {
        return "(ite " + cond + " " + hex_literal(1) + " " + hex_literal(0) + ")";
    }

    std::string build(Expr e)
    {
        const ExprNode& n = e.node();
        switch (n.kind)
        {
        case ExprKind::Const:
            return hex_literal(*n.value);
        case ExprKind::Sym:
            declare("(declare-fun |" + n.name + "| () (_ BitVec 256))");
            return "|" + n.name + "|";
        default:
            break;
        }

        auto a = [&] { return ref(e.child(0)); };
        auto b = [&] { return ref(e.child(1)); };
        auto c = [&] { return ref(e.child(2)); };

        switch (n.kind)
        {
        case ExprKind::Add:
            return define(e, "(bvadd " + a() + " " + b() + ")");
        case ExprKind::Sub:
            return define(e, "(bvsub " + a() + " " + b() + ")");
        case ExprKind::Mul:
            return define(e, "(bvmul " + a() + " " + b() + ")");
        case ExprKind::Div:
        {
            const std::string bb = b();
            return define(e, "(ite (= " + bb + " " + hex_literal(0) + ") " + hex_literal(0) +
                                 " (bvudiv " + a() + " " + bb + "))");
        }
        case ExprKind::SDiv:
        {
            const std::string bb = b();
            return define(e, "(ite (= " + bb + " " + hex_literal(0) + ") " + hex_literal(0) +
                                 " (bvsdiv " + a() + " " + bb + "))");
        }
        case ExprKind::Mod:
        {
            const std::string bb = b();
            return define(e, "(ite (= " + bb + " " + hex_literal(0) + ") " + hex_literal(0) +
                                 " (bvurem " + a() + " " + bb + "))");
        }
        case ExprKind::SMod:
        {
            const std::string bb = b();
            return define(e, "(ite (= " + bb + " " + hex_literal(0) + ") " + hex_literal(0) +
                                 " (bvsrem " + a() + " " + bb + "))");
        }
        case ExprKind::AddMod:
        case ExprKind::MulMod:
        {
            const std::string op = n.kind == ExprKind::AddMod ? "bvadd" : "bvmul";
            const std::string za = "((_ zero_extend 256) " + a() + ")";
            const std::string zb = "((_ zero_extend 256) " + b() + ")";
            const std::string nn = c();
            return define(e, "(ite (= " + nn + " " + hex_literal(0) + ") " + hex_literal(0) +
                                 " ((_ extract 255 0) (bvurem (" + op + " " + za + " " + zb +
                                 ") ((_ zero_extend 256) " + nn + "))))");
        }
        case ExprKind::Exp:
        {
            if (e.child(1).is_const_value() && e.child(1).value() <= 64)
            {
                // Unroll small constant exponents.
                const unsigned k = static_cast<unsigned>(e.child(1).value());
                if (k == 0)
                    return define(e, hex_literal(1));
                std::string acc = a();
                for (unsigned i = 1; i < k; ++i)
                    acc = "(bvmul " + acc + " " + ref(e.child(0)) + ")";
                return define(e, acc);
            }
            declare("(declare-fun evm-exp ((_ BitVec 256) (_ BitVec 256)) (_ BitVec 256))");
            return define(e, "(evm-exp " + a() + " " + b() + ")");
        }
        case ExprKind::SignExtend:
        {
            if (e.child(0).is_const_value() && e.child(0).value() < 31)
            {
                const unsigned byte = static_cast<unsigned>(e.child(0).value());
                const unsigned low = byte * 8 + 7;
                return define(e, "((_ sign_extend " + std::to_string(255 - low) + ") ((_ extract " +
                                     std::to_string(low) + " 0) " + b() + "))");
            }
            declare("(declare-fun evm-signextend ((_ BitVec 256) (_ BitVec 256)) (_ BitVec 256))");
            return define(e, "(evm-signextend " + a() + " " + b() + ")");
        }
        case ExprKind::Lt:
            return define(e, bool_to_word("(bvult " + a() + " " + b() + ")"));
        case ExprKind::Gt:
            return define(e, bool_to_word("(bvugt " + a() + " " + b() + ")"));
        case ExprKind::Slt:
            return define(e, bool_to_word("(bvslt " + a() + " " + b() + ")"));
        case ExprKind::Sgt:
            return define(e, bool_to_word("(bvsgt " + a() + " " + b() + ")"));
        case ExprKind::Eq:
            return define(e, bool_to_word("(= " + a() + " " + b() + ")"));
        case ExprKind::IsZero:
            return define(e, bool_to_word("(= " + a() + " " + hex_literal(0) + ")"));
        case ExprKind::And:
            return define(e, "(bvand " + a() + " " + b() + ")");
        case ExprKind::Or:
            return define(e, "(bvor " + a() + " " + b() + ")");
        case ExprKind::Xor:
            return define(e, "(bvxor " + a() + " " + b() + ")");
        case ExprKind::Not:
            return define(e, "(bvnot " + a() + ")");
        case ExprKind::Byte:
        {
            if (e.child(0).is_const_value() && e.child(0).value() < 32)
            {
                const unsigned i = static_cast<unsigned>(e.child(0).value());
                const unsigned high = (31 - i) * 8 + 7;
                return define(e, "((_ zero_extend 248) ((_ extract " + std::to_string(high) + " " +
                                     std::to_string(high - 7) + ") " + b() + "))");
            }
            declare("(declare-fun evm-byte ((_ BitVec 256) (_ BitVec 256)) (_ BitVec 256))");
            return define(e, "(evm-byte " + a() + " " + b() + ")");
        }
        case ExprKind::Keccak:
        {
            const size_t width = n.children.size();
            const std::string fn = "keccak" + std::to_string(width);
            declare("(declare-fun " + fn + " ((_ BitVec " + std::to_string(width * 8) +
                    ")) (_ BitVec 256))");
            std::string arg;
            if (width == 1)
            {
                arg = bv8(e.child(0));
            }
            else
            {
                arg = "(concat";
                for (size_t i = 0; i < width; ++i)
                    arg += " " + bv8(e.child(i));
                arg += ")";
            }
            return define(e, "(" + fn + " " + arg + ")");
        }
        default:
            break;
        }
        return hex_literal(0); // unreachable
    }
};

std::vector<std::string> split_ws(const std::string& text)
{
    std::vector<std::string> parts;
    std::istringstream is(text);
    std::string word;
    while (is >> word)
        parts.push_back(word);
    return parts;
}

} // namespace

std::string smt_query_text(const std::vector<Expr>& constraints, bool want_model)
{
    SmtEmitter emitter;
    for (const Expr& e : constraints)
        emitter.add_constraint(e);
    return emitter.render(want_model);
}

// ---------------------------------------------------------------------------
// Child process plumbing

struct SolverGateway::Process {
    pid_t pid = -1;
    int to_child = -1;
    int from_child = -1;
    std::string buffer;

    ~Process() { shutdown(); }

    void shutdown()
    {
        if (to_child >= 0)
            ::close(to_child);
        if (from_child >= 0)
            ::close(from_child);
        to_child = from_child = -1;
        if (pid > 0)
        {
            ::kill(pid, SIGKILL);
            int status = 0;
            ::waitpid(pid, &status, 0);
            pid = -1;
        }
    }

    bool write_all(const std::string& data)
    {
        size_t off = 0;
        while (off < data.size())
        {
            const ssize_t n = ::write(to_child, data.data() + off, data.size() - off);
            if (n <= 0)
                return false;
            off += static_cast<size_t>(n);
        }
        return true;
    }

    // Reads one line, honoring an absolute deadline. Returns false on
    // EOF/timeout (distinguished by `timed_out`).
    bool read_line(std::string& line, std::chrono::steady_clock::time_point deadline, bool& timed_out)
    {
        timed_out = false;
        while (true)
        {
            const auto nl = buffer.find('\n');
            if (nl != std::string::npos)
            {
                line = buffer.substr(0, nl);
                buffer.erase(0, nl + 1);
                return true;
            }
            const auto now = std::chrono::steady_clock::now();
            if (now >= deadline)
            {
                timed_out = true;
                return false;
            }
            const auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
            struct pollfd pfd = {from_child, POLLIN, 0};
            const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(wait_ms, 1000)));
            if (rc < 0 && errno != EINTR)
                return false;
            if (rc > 0)
            {
                char chunk[4096];
                const ssize_t n = ::read(from_child, chunk, sizeof(chunk));
                if (n <= 0)
                    return false; // EOF: child died
                buffer.append(chunk, static_cast<size_t>(n));
            }
        }
    }
};

std::vector<std::string> SolverGateway::default_command()
{
    if (const char* env = std::getenv("HONEYSCAN_SOLVER"); env && *env)
        return split_ws(env);
    std::string bridge;
    if (const char* env = std::getenv("HONEYSCAN_SOLVER_BRIDGE"); env && *env)
        bridge = env;
#ifdef HONEYSCAN_SOLVER_BRIDGE_DEFAULT
    if (bridge.empty())
        bridge = HONEYSCAN_SOLVER_BRIDGE_DEFAULT;
#endif
    return {"node", bridge};
}

SolverGateway::SolverGateway() : SolverGateway(Options{}) {}

SolverGateway::SolverGateway(Options opts) : opts_(std::move(opts))
{
    if (opts_.command.empty())
        opts_.command = default_command();
    ::signal(SIGPIPE, SIG_IGN);
    ensure_process();
}

SolverGateway::~SolverGateway() = default;

void SolverGateway::ensure_process()
{
    if (process_ && process_->pid > 0)
        return;
    process_ = std::make_unique<Process>();

    int in_pipe[2], out_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0)
        throw SolverUnavailable("cannot create solver pipes");

    const pid_t pid = ::fork();
    if (pid < 0)
        throw SolverUnavailable("cannot fork solver process");
    if (pid == 0)
    {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        std::vector<char*> argv;
        for (auto& arg : opts_.command)
            argv.push_back(const_cast<char*>(arg.c_str()));
        argv.push_back(nullptr);
        ::execvp(argv[0], argv.data());
        ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    process_->pid = pid;
    process_->to_child = in_pipe[1];
    process_->from_child = out_pipe[0];

    // Handshake: the first answer can be slow (WASM instantiation).
    if (!process_->write_all("(echo \"honeyscan-ready\")\n"))
        throw SolverUnavailable("solver process rejected input");
    std::string line;
    bool timed_out = false;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(120);
    while (process_->read_line(line, deadline, timed_out))
    {
        if (line.find("honeyscan-ready") != std::string::npos)
            return;
    }
    std::string cmd;
    for (const auto& part : opts_.command)
        cmd += part + " ";
    process_->shutdown();
    throw SolverUnavailable("solver did not answer handshake: " + cmd);
}

void SolverGateway::kill_process()
{
    if (process_)
        process_->shutdown();
}

std::vector<std::string> SolverGateway::roundtrip(const std::string& query, bool& healthy, bool& timed_out)
{
    healthy = true;
    timed_out = false;
    const std::string marker = "q" + std::to_string(++marker_seq_) + "-done";

    std::ostringstream framed;
    framed << "(set-option :timeout " << opts_.timeout_ms << ")\n";
    std::istringstream lines(query);
    std::string line;
    while (std::getline(lines, line))
        framed << line << "\n";
    framed << "(echo \"" << marker << "\")\n";

    if (!process_->write_all(framed.str()))
    {
        healthy = false;
        return {};
    }

    // Grace on top of the solver-side timeout so the option usually fires
    // first; the hard deadline protects against a wedged process.
    const auto deadline = std::chrono::steady_clock::now() +
        std::chrono::milliseconds(2 * opts_.timeout_ms + 2000);
    std::vector<std::string> out;
    while (true)
    {
        std::string reply;
        if (!process_->read_line(reply, deadline, timed_out))
        {
            healthy = false;
            return {};
        }
        if (reply.find(marker) != std::string::npos)
            return out;
        out.push_back(reply);
    }
}

void SolverGateway::cache_put(const std::string& key, const SatResult& result)
{
    if (opts_.cache_entries == 0)
        return;
    auto it = cache_.find(key);
    if (it != cache_.end())
    {
        lru_.erase(it->second);
        cache_.erase(it);
    }
    lru_.emplace_front(key, result);
    cache_[key] = lru_.begin();
    while (cache_.size() > opts_.cache_entries)
    {
        cache_.erase(lru_.back().first);
        lru_.pop_back();
    }
}

const SatResult* SolverGateway::cache_get(const std::string& key)
{
    auto it = cache_.find(key);
    if (it == cache_.end())
        return nullptr;
    lru_.splice(lru_.begin(), lru_, it->second);
    it->second = lru_.begin();
    return &it->second->second;
}

namespace {

// Pulls `(define-fun |name| () (_ BitVec 256) #x...)` bindings out of a
// printed model.
std::map<std::string, Word> parse_model(const std::vector<std::string>& lines)
{
    std::map<std::string, Word> model;
    std::string text;
    for (const auto& l : lines)
        text += l + "\n";
    size_t pos = 0;
    while ((pos = text.find("define-fun", pos)) != std::string::npos)
    {
        pos += 10;
        size_t name_begin = text.find_first_not_of(" \t\n", pos);
        if (name_begin == std::string::npos)
            break;
        std::string name;
        if (text[name_begin] == '|')
        {
            const size_t name_end = text.find('|', name_begin + 1);
            if (name_end == std::string::npos)
                break;
            name = text.substr(name_begin + 1, name_end - name_begin - 1);
        }
        else
        {
            const size_t name_end = text.find_first_of(" \t\n(", name_begin);
            name = text.substr(name_begin, name_end - name_begin);
        }
        const size_t next_def = text.find("define-fun", name_begin);
        const size_t hex = text.find("#x", name_begin);
        if (hex == std::string::npos || (next_def != std::string::npos && hex > next_def))
            continue;
        size_t end = hex + 2;
        while (end < text.size() && std::isxdigit(static_cast<unsigned char>(text[end])))
            ++end;
        // Only nullary bindings: "()" right after the name.
        const size_t args = text.find('(', name_begin);
        if (args != std::string::npos && args < hex && text.compare(args, 2, "()") != 0)
            continue;
        Word value = 0;
        for (size_t i = hex + 2; i < end; ++i)
        {
            value <<= 4;
            const char c = text[i];
            value |= (c <= '9') ? (c - '0') : ((c | 0x20) - 'a' + 10);
        }
        model[name] = value;
    }
    return model;
}

} // namespace

SatResult SolverGateway::check(const std::vector<Expr>& constraints, bool want_model)
{
    const std::string query = smt_query_text(constraints, want_model);
    if (const SatResult* hit = cache_get(query))
    {
        ++cache_hits_;
        return *hit;
    }

    const auto began = std::chrono::steady_clock::now();
    SatResult result;
    for (int attempt = 0; attempt < 2; ++attempt)
    {
        ensure_process();
        bool healthy = true, timed_out = false;
        const auto lines = roundtrip(query, healthy, timed_out);
        if (!healthy)
        {
            kill_process();
            if (timed_out)
            {
                // Per-query timeout: verdict unknown, not an error.
                result.verdict = Verdict::unknown;
                break;
            }
            if (attempt == 1)
                throw SolverCrashed("solver process died twice on one query");
            continue; // retry once after a crash
        }
        ++queries_sent_;
        result.verdict = Verdict::unknown;
        for (const auto& line : lines)
        {
            if (line == "sat")
                result.verdict = Verdict::sat;
            else if (line == "unsat")
                result.verdict = Verdict::unsat;
            else if (line == "unknown")
                result.verdict = Verdict::unknown;
        }
        if (result.verdict == Verdict::sat && want_model)
            result.model = parse_model(lines);
        break;
    }
    result.elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - began);
    cache_put(query, result);
    return result;
}

} // namespace honeyscan
