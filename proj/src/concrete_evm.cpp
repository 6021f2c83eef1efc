// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <erascan/concrete_evm.hpp>

#include <boost/multiprecision/cpp_int.hpp>

namespace erascan::oracle {

namespace {

using Int = boost::multiprecision::cpp_int;

const Int kModulus = Int(1) << 256;
const Int kHalf = Int(1) << 255;

Int wrap(const Int& v) {
    Int r = v % kModulus;
    if (r < 0) r += kModulus;
    return r;
}

Int to_signed(const Int& v) { return v >= kHalf ? v - kModulus : v; }

Int floor_shift_right(const Int& signed_value, unsigned shift) {
    if (signed_value >= 0) return signed_value >> shift;
    // floor(v / 2^s) for negative v
    const Int d = Int(1) << shift;
    return -((-signed_value + d - 1) / d);
}

u256 to_u256(const Int& v) { return static_cast<u256>(v); }
Int from_u256(const u256& v) { return Int(v); }

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Halt {
    HaltReason reason;
};

class Machine {
  public:
    Machine(ByteView code, const ConcreteEnv& env) : code_(code), env_(env), jumpdests_(code.size(), false) {
        for (std::size_t pc = 0; pc < code.size(); ++pc) {
            const auto b = code[pc];
            if (b == 0x5b) jumpdests_[pc] = true;
            if (b >= 0x60 && b <= 0x7f) pc += b - 0x5f;
        }
    }

    Trace run(std::size_t step_limit) {
        Trace trace;
        std::size_t pc = 0;
        while (true) {
            if (pc >= code_.size()) {
                trace.halt = HaltReason::CodeEnd;
                trace.halt_offset = static_cast<std::uint32_t>(pc);
                break;
            }
            if (trace.steps.size() >= step_limit) {
                trace.halt = HaltReason::StepLimit;
                trace.halt_offset = static_cast<std::uint32_t>(pc);
                break;
            }
            const std::uint8_t opcode = code_[pc];
            std::size_t next = pc + 1;
            bool stop_after = false;
            try {
                stop_after = execute(opcode, pc, next, trace);
            } catch (const Halt& h) {
                trace.halt = h.reason;
                trace.halt_offset = static_cast<std::uint32_t>(pc);
                break;
            }
            trace.steps.push_back(TraceStep{static_cast<std::uint32_t>(pc), opcode, stack_.size()});
            if (stop_after) {
                trace.halt = HaltReason::Stopped;
                trace.halt_offset = static_cast<std::uint32_t>(pc);
                break;
            }
            if (jump_to_) {
                const Int dest = *jump_to_;
                jump_to_.reset();
                if (dest >= Int(code_.size()) || !jumpdests_[static_cast<std::size_t>(dest)]) {
                    trace.halt = HaltReason::BadJump;
                    trace.halt_offset = static_cast<std::uint32_t>(pc);
                    break;
                }
                next = static_cast<std::size_t>(dest);
            }
            pc = next;
            ++step_;
        }
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            trace.final_stack.push_back(to_u256(*it));
        }
        return trace;
    }

  private:
    void need(std::size_t n) const {
        if (stack_.size() < n) throw Halt{HaltReason::Underflow};
    }
    Int pop() {
        need(1);
        Int v = std::move(stack_.back());
        stack_.pop_back();
        return v;
    }
    void push(Int v) {
        if (stack_.size() >= 1024) throw Halt{HaltReason::Overflow};
        stack_.push_back(wrap(v));
    }
    Int noise(std::uint8_t opcode) const {
        Int v = 0;
        std::uint64_t s = env_.seed ^ (std::uint64_t{opcode} << 32) ^ step_;
        for (int i = 0; i < 4; ++i) {
            s = splitmix(s);
            v = (v << 64) | Int(s);
        }
        return v;
    }
    Address as_address(const Int& v) const { return address_from_word(to_u256(v)); }

    // Pops `pops` items and pushes `pushes` noise values.
    void opaque(std::uint8_t opcode, unsigned pops, unsigned pushes) {
        need(pops);
        for (unsigned i = 0; i < pops; ++i) pop();
        for (unsigned i = 0; i < pushes; ++i) push(noise(opcode));
    }

    // Returns true when the instruction ends execution normally.
    bool execute(std::uint8_t opcode, std::size_t pc, std::size_t& next, Trace& trace) {
        if (opcode >= 0x60 && opcode <= 0x7f) {
            const std::size_t n = opcode - 0x5f;
            Int v = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t at = pc + 1 + i;
                v = (v << 8) | Int(at < code_.size() ? code_[at] : 0);
            }
            push(v);
            next = pc + 1 + n;
            return false;
        }
        if (opcode >= 0x80 && opcode <= 0x8f) {
            const std::size_t n = opcode - 0x7f;
            need(n);
            push(stack_[stack_.size() - n]);
            return false;
        }
        if (opcode >= 0x90 && opcode <= 0x9f) {
            const std::size_t n = opcode - 0x8f;
            need(n + 1);
            std::swap(stack_[stack_.size() - 1], stack_[stack_.size() - 1 - n]);
            return false;
        }
        if (opcode >= 0xa0 && opcode <= 0xa4) {
            opaque(opcode, opcode - 0xa0 + 2u, 0);
            return false;
        }
        switch (opcode) {
            case 0x00: return true;
            case 0x01: { need(2); Int a = pop(), b = pop(); push(a + b); return false; }
            case 0x02: { need(2); Int a = pop(), b = pop(); push(a * b); return false; }
            case 0x03: { need(2); Int a = pop(), b = pop(); push(a - b); return false; }
            case 0x04: { need(2); Int a = pop(), b = pop(); push(b == 0 ? Int(0) : a / b); return false; }
            case 0x05: {
                need(2);
                Int a = to_signed(pop()), b = to_signed(pop());
                push(b == 0 ? Int(0) : a / b);  // cpp_int division truncates toward zero
                return false;
            }
            case 0x06: { need(2); Int a = pop(), b = pop(); push(b == 0 ? Int(0) : a % b); return false; }
            case 0x07: {
                need(2);
                Int a = to_signed(pop()), b = to_signed(pop());
                push(b == 0 ? Int(0) : a % b);  // remainder takes the dividend's sign
                return false;
            }
            case 0x08: { need(3); Int a = pop(), b = pop(), n = pop(); push(n == 0 ? Int(0) : (a + b) % n); return false; }
            case 0x09: { need(3); Int a = pop(), b = pop(), n = pop(); push(n == 0 ? Int(0) : (a * b) % n); return false; }
            case 0x0a: {
                need(2);
                Int base = pop(), e = pop();
                push(boost::multiprecision::powm(base, e, kModulus));
                return false;
            }
            case 0x0b: {
                need(2);
                Int k = pop(), x = pop();
                if (k < 31) {
                    const unsigned bits = static_cast<unsigned>(k) * 8 + 8;
                    const Int low = x % (Int(1) << bits);
                    const Int sv = low >= (Int(1) << (bits - 1)) ? low - (Int(1) << bits) : low;
                    push(sv);
                } else {
                    push(x);
                }
                return false;
            }
            case 0x10: { need(2); Int a = pop(), b = pop(); push(a < b ? 1 : 0); return false; }
            case 0x11: { need(2); Int a = pop(), b = pop(); push(a > b ? 1 : 0); return false; }
            case 0x12: { need(2); Int a = to_signed(pop()), b = to_signed(pop()); push(a < b ? 1 : 0); return false; }
            case 0x13: { need(2); Int a = to_signed(pop()), b = to_signed(pop()); push(a > b ? 1 : 0); return false; }
            case 0x14: { need(2); Int a = pop(), b = pop(); push(a == b ? 1 : 0); return false; }
            case 0x15: { Int a = pop(); push(a == 0 ? 1 : 0); return false; }
            case 0x16: { need(2); Int a = pop(), b = pop(); push(a & b); return false; }
            case 0x17: { need(2); Int a = pop(), b = pop(); push(a | b); return false; }
            case 0x18: { need(2); Int a = pop(), b = pop(); push(a ^ b); return false; }
            case 0x19: { Int a = pop(); push(kModulus - 1 - a); return false; }
            case 0x1a: {
                need(2);
                Int i = pop(), x = pop();
                push(i < 32 ? (x / (Int(1) << (8 * (31 - static_cast<unsigned>(i))))) % 256 : Int(0));
                return false;
            }
            case 0x1b: { need(2); Int s = pop(), x = pop(); push(s < 256 ? x * (Int(1) << static_cast<unsigned>(s)) : Int(0)); return false; }
            case 0x1c: { need(2); Int s = pop(), x = pop(); push(s < 256 ? x / (Int(1) << static_cast<unsigned>(s)) : Int(0)); return false; }
            case 0x1d: {
                need(2);
                Int s = pop(), x = to_signed(pop());
                if (s >= 256) push(x < 0 ? Int(-1) : Int(0));
                else push(floor_shift_right(x, static_cast<unsigned>(s)));
                return false;
            }
            case 0x20: opaque(opcode, 2, 1); return false;
            case 0x30: push(from_u256(word_from_address(env_.self))); return false;
            case 0x31: { Int a = pop(); push(from_u256(env_.balance_of(as_address(a)))); return false; }
            case 0x32:
            case 0x33: push(from_u256(word_from_address(env_.caller))); return false;
            case 0x34: push(from_u256(env_.callvalue)); return false;
            case 0x35: {
                Int off = pop();
                Int v = 0;
                for (std::size_t i = 0; i < 32; ++i) {
                    const Int at = off + i;
                    std::uint8_t byte = 0;
                    if (at < Int(env_.calldata.size())) byte = env_.calldata[static_cast<std::size_t>(at)];
                    v = (v << 8) | Int(byte);
                }
                push(v);
                return false;
            }
            case 0x36: push(Int(env_.calldata.size())); return false;
            case 0x37: opaque(opcode, 3, 0); return false;
            case 0x38: push(Int(code_.size())); return false;
            case 0x39: opaque(opcode, 3, 0); return false;
            case 0x3a: push(noise(opcode)); return false;
            case 0x3b: { Int a = pop(); push(Int(env_.code_of(as_address(a)).size())); return false; }
            case 0x3c: opaque(opcode, 4, 0); return false;
            case 0x3d: push(0); return false;
            case 0x3e: opaque(opcode, 3, 0); return false;
            case 0x3f: opaque(opcode, 1, 1); return false;
            case 0x40: opaque(opcode, 1, 1); return false;
            case 0x41: push(noise(opcode)); return false;
            case 0x42: push(Int(env_.timestamp)); return false;
            case 0x43:
            case 0x44:
            case 0x45: push(noise(opcode)); return false;
            case 0x46: push(1); return false;
            case 0x47: push(from_u256(env_.balance_of(env_.self))); return false;
            case 0x50: pop(); return false;
            case 0x51: opaque(opcode, 1, 1); return false;
            case 0x52:
            case 0x53:
            case 0x55: opaque(opcode, 2, 0); return false;
            case 0x54: opaque(opcode, 1, 1); return false;
            case 0x56: jump_to_ = pop(); return false;
            case 0x57: {
                need(2);
                Int dest = pop(), cond = pop();
                if (cond != 0) jump_to_ = dest;
                return false;
            }
            case 0x58: push(Int(pc)); return false;
            case 0x59: push(0); return false;
            case 0x5a: push(noise(opcode)); return false;
            case 0x5b: return false;
            case 0xf0: opaque(opcode, 3, 1); return false;
            case 0xf1:
            case 0xf2: {
                need(7);
                pop();
                Int to = pop();
                for (int i = 0; i < 5; ++i) pop();
                trace.calls.push_back(ConcreteCall{opcode, as_address(to), static_cast<std::uint32_t>(pc)});
                push(1);
                return false;
            }
            case 0xf4:
            case 0xfa: {
                need(6);
                pop();
                Int to = pop();
                for (int i = 0; i < 4; ++i) pop();
                trace.calls.push_back(ConcreteCall{opcode, as_address(to), static_cast<std::uint32_t>(pc)});
                push(1);
                return false;
            }
            case 0xf3:
            case 0xfd: need(2); pop(); pop(); return true;
            case 0xf5: opaque(opcode, 4, 1); return false;
            case 0xff: pop(); return true;
            default: throw Halt{HaltReason::BadInstruction};
        }
    }

    ByteView code_;
    const ConcreteEnv& env_;
    std::vector<bool> jumpdests_;
    std::vector<Int> stack_;
    std::optional<Int> jump_to_;
    std::uint64_t step_ = 0;
};

}  // namespace

Wei ConcreteEnv::balance_of(const Address& a) const {
    auto it = balances.find(a);
    return it == balances.end() ? Wei(0) : it->second;
}

const Bytes& ConcreteEnv::code_of(const Address& a) const {
    static const Bytes kEmpty;
    auto it = codes.find(a);
    return it == codes.end() ? kEmpty : it->second;
}

std::string_view to_string(HaltReason reason) noexcept {
    switch (reason) {
        case HaltReason::Stopped: return "stopped";
        case HaltReason::Underflow: return "underflow";
        case HaltReason::Overflow: return "overflow";
        case HaltReason::BadInstruction: return "bad-instruction";
        case HaltReason::BadJump: return "bad-jump";
        case HaltReason::CodeEnd: return "code-end";
        case HaltReason::StepLimit: return "step-limit";
    }
    return "?";
}

Trace run_concrete(ByteView code, const ConcreteEnv& env, std::size_t step_limit) {
    Machine m(code, env);
    return m.run(step_limit);
}

}  // namespace erascan::oracle
