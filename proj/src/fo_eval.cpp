#include <algorithm>

#include "indep/model.h"

namespace indep {

namespace {

struct CTerm {
    enum class K : std::uint8_t { Slot, Elem, App } kind = K::Elem;
    int value = 0; // slot index or element
    const FunctionTable *fn = nullptr;
    std::vector<CTerm> args;
};

struct CNode {
    FoFormula::Kind kind = FoFormula::Kind::True;
    const RelationTable *rel = nullptr;
    int slot = 0; // quantifiers
    std::vector<CTerm> terms;
    std::vector<CNode> subs;
};

class Compiler {
public:
    Compiler(const Structure &m, const std::vector<std::string> &inputs, const ParamAssignment &h) : m_(m), h_(h) {
        for (const auto &v : inputs) {
            scope_.emplace_back(v, next_++);
        }
    }

    CTerm term(const Term &t) {
        CTerm c;
        switch (t.kind) {
        case Term::Kind::TeamVar: {
            auto it = std::find_if(scope_.rbegin(), scope_.rend(), [&](const auto &p) { return p.first == t.name; });
            if (it == scope_.rend()) throw Error("unbound team variable '" + t.name + "'");
            c.kind = CTerm::K::Slot;
            c.value = it->second;
            break;
        }
        case Term::Kind::ParamVar: {
            auto it = h_.find(t.name);
            if (it == h_.end()) throw Error("unbound parameter variable '$" + t.name + "'");
            check_element(it->second);
            c.value = it->second;
            break;
        }
        case Term::Kind::Const: c.value = m_.constant(t.name); break;
        case Term::Kind::App: {
            c.kind = CTerm::K::App;
            c.fn = m_.function_table(t.name);
            if (!c.fn) throw Error("structure does not interpret function '" + t.name + "'");
            if (c.fn->arity != static_cast<int>(t.args.size())) throw Error("arity mismatch for function '" + t.name + "'");
            for (const auto &a : t.args) c.args.push_back(term(a));
            break;
        }
        }
        return c;
    }

    CNode formula(const FoFormula &f) {
        using K = FoFormula::Kind;
        CNode n;
        n.kind = f.kind;
        switch (f.kind) {
        case K::True:
        case K::False: break;
        case K::Rel:
            n.rel = m_.relation_table(f.name);
            if (!n.rel) throw Error("structure does not interpret relation '" + f.name + "'");
            if (n.rel->arity != static_cast<int>(f.terms.size())) throw Error("arity mismatch for relation '" + f.name + "'");
            for (const auto &t : f.terms) n.terms.push_back(term(t));
            break;
        case K::Eq:
            for (const auto &t : f.terms) n.terms.push_back(term(t));
            break;
        case K::Exists:
        case K::Forall:
            n.slot = next_++;
            scope_.emplace_back(f.name, n.slot);
            n.subs.push_back(formula(f.subs[0]));
            scope_.pop_back();
            break;
        default:
            for (const auto &s : f.subs) n.subs.push_back(formula(s));
        }
        return n;
    }

    int slots() const { return next_; }

private:
    void check_element(Element e) const {
        if (e < 0 || static_cast<std::size_t>(e) >= m_.size()) throw Error("parameter value out of the domain");
    }

    const Structure &m_;
    const ParamAssignment &h_;
    std::vector<std::pair<std::string, int>> scope_;
    int next_ = 0;
};

Element eval_cterm(const CTerm &t, const std::vector<Element> &env, std::size_t n) {
    switch (t.kind) {
    case CTerm::K::Slot: return env[static_cast<std::size_t>(t.value)];
    case CTerm::K::Elem: return t.value;
    case CTerm::K::App: {
        std::size_t code = 0;
        for (const auto &a : t.args) code = code * n + static_cast<std::size_t>(eval_cterm(a, env, n));
        return t.fn->values[code];
    }
    }
    return 0;
}

bool eval_cnode(const CNode &f, std::vector<Element> &env, std::size_t n) {
    using K = FoFormula::Kind;
    switch (f.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Rel: {
        std::size_t code = 0;
        for (const auto &a : f.terms) code = code * n + static_cast<std::size_t>(eval_cterm(a, env, n));
        return f.rel->holds[code];
    }
    case K::Eq: return eval_cterm(f.terms[0], env, n) == eval_cterm(f.terms[1], env, n);
    case K::Not: return !eval_cnode(f.subs[0], env, n);
    case K::And: return eval_cnode(f.subs[0], env, n) && eval_cnode(f.subs[1], env, n);
    case K::Or: return eval_cnode(f.subs[0], env, n) || eval_cnode(f.subs[1], env, n);
    case K::Implies: return !eval_cnode(f.subs[0], env, n) || eval_cnode(f.subs[1], env, n);
    case K::Iff: return eval_cnode(f.subs[0], env, n) == eval_cnode(f.subs[1], env, n);
    case K::Exists:
    case K::Forall: {
        const bool want = f.kind == K::Exists;
        auto &slot = env[static_cast<std::size_t>(f.slot)];
        for (std::size_t e = 0; e < n; ++e) {
            slot = static_cast<Element>(e);
            if (eval_cnode(f.subs[0], env, n) == want) return want;
        }
        return !want;
    }
    }
    return false;
}

std::vector<std::string> keys(const Assignment &s) {
    std::vector<std::string> out;
    for (const auto &[k, v] : s) out.push_back(k);
    return out;
}

} // namespace

struct CompiledFo::Impl {
    CNode root;
    std::size_t slots = 0;
    std::size_t domain = 0;
};

CompiledFo::CompiledFo(const FoFormula &f, const Structure &m, const std::vector<std::string> &inputs,
                       const ParamAssignment &h)
    : impl_(std::make_unique<Impl>()) {
    Compiler c(m, inputs, h);
    impl_->root = c.formula(f);
    impl_->slots = static_cast<std::size_t>(c.slots());
    impl_->domain = m.size();
}
CompiledFo::CompiledFo(CompiledFo &&) noexcept = default;
CompiledFo &CompiledFo::operator=(CompiledFo &&) noexcept = default;
CompiledFo::~CompiledFo() = default;

bool CompiledFo::eval(std::vector<Element> &env) const {
    if (env.size() < impl_->slots) env.resize(impl_->slots, 0);
    return eval_cnode(impl_->root, env, impl_->domain);
}
std::size_t CompiledFo::slots() const { return impl_->slots; }

struct CompiledTerm::Impl {
    CTerm root;
    std::size_t domain = 0;
};

CompiledTerm::CompiledTerm(const Term &t, const Structure &m, const std::vector<std::string> &inputs,
                           const ParamAssignment &h)
    : impl_(std::make_unique<Impl>()) {
    Compiler c(m, inputs, h);
    impl_->root = c.term(t);
    impl_->domain = m.size();
}
CompiledTerm::CompiledTerm(CompiledTerm &&) noexcept = default;
CompiledTerm &CompiledTerm::operator=(CompiledTerm &&) noexcept = default;
CompiledTerm::~CompiledTerm() = default;

Element CompiledTerm::eval(const std::vector<Element> &env) const { return eval_cterm(impl_->root, env, impl_->domain); }

bool eval_fo(const Structure &m, const ParamAssignment &h, const Assignment &s, const FoFormula &f) {
    CompiledFo c(f, m, keys(s), h);
    std::vector<Element> env;
    for (const auto &[k, v] : s) {
        if (v < 0 || static_cast<std::size_t>(v) >= m.size()) throw Error("assignment value out of the domain");
        env.push_back(v);
    }
    return c.eval(env);
}

Element eval_term(const Structure &m, const ParamAssignment &h, const Assignment &s, const Term &t) {
    CompiledTerm c(t, m, keys(s), h);
    std::vector<Element> env;
    for (const auto &[k, v] : s) env.push_back(v);
    return c.eval(env);
}

} // namespace indep
