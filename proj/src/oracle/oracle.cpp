#include "uvl2ivml/oracle/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace uvl2ivml::oracle {

namespace {

constexpr uint64_t kMaxFeatures = 63;
constexpr uint64_t kParallelThreshold = 1u << 12;

[[noreturn]] void cap_error(const std::string& what, uint64_t have, int cap_bits) {
    std::ostringstream os;
    os << what << ": " << have << " exceeds the enumeration cap of 2^" << cap_bits
       << " candidates (raise the cap to proceed)";
    throw CapExceededError(os.str());
}

int chunk_count(uint64_t total) {
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    uint64_t limit = std::max<uint64_t>(1, total / 1024);
    return static_cast<int>(std::min<uint64_t>(threads, limit));
}

} // namespace

// ---------------------------------------------------------------------------
// UVL side: feature space and configuration enumeration
// ---------------------------------------------------------------------------

namespace {

struct UvlCompiler {
    const std::vector<std::string>& names;
    FeatureSpace::CompiledConstraint out;

    int compile(const uvl::ConstraintExpr& e) {
        FeatureSpace::Node node;
        node.kind = e.kind;
        switch (e.kind) {
        case uvl::ExprKind::feature_ref: {
            auto it = std::find(names.begin(), names.end(), e.text);
            if (it == names.end())
                throw OracleError("constraint references unknown feature '" + e.text + "'");
            node.feature = static_cast<int>(it - names.begin());
            break;
        }
        case uvl::ExprKind::bool_lit:
            node.bval = e.bool_value;
            break;
        case uvl::ExprKind::not_op:
            node.a = compile(*e.lhs);
            break;
        case uvl::ExprKind::and_op:
        case uvl::ExprKind::or_op:
        case uvl::ExprKind::implies:
        case uvl::ExprKind::iff:
            node.a = compile(*e.lhs);
            node.b = compile(*e.rhs);
            break;
        default:
            throw OracleError(
                "constraint is not boolean-level; the oracle only enumerates boolean models");
        }
        out.nodes.push_back(node);
        return static_cast<int>(out.nodes.size() - 1);
    }
};

bool eval_constraint(const FeatureSpace::CompiledConstraint& c, int id, uint64_t mask) {
    const FeatureSpace::Node& n = c.nodes[id];
    switch (n.kind) {
    case uvl::ExprKind::feature_ref:
        return (mask >> n.feature) & 1;
    case uvl::ExprKind::bool_lit:
        return n.bval;
    case uvl::ExprKind::not_op:
        return !eval_constraint(c, n.a, mask);
    case uvl::ExprKind::and_op:
        return eval_constraint(c, n.a, mask) && eval_constraint(c, n.b, mask);
    case uvl::ExprKind::or_op:
        return eval_constraint(c, n.a, mask) || eval_constraint(c, n.b, mask);
    case uvl::ExprKind::implies:
        return !eval_constraint(c, n.a, mask) || eval_constraint(c, n.b, mask);
    case uvl::ExprKind::iff:
        return eval_constraint(c, n.a, mask) == eval_constraint(c, n.b, mask);
    default:
        return false;
    }
}

void flatten(const uvl::FeatureNode& feature, int parent, FeatureSpace& space,
             FeatureSpace::BitSource source) {
    if (feature.type != uvl::FeatureType::boolean)
        throw OracleError("feature '" + feature.name +
                          "' is typed; the oracle only enumerates boolean models");
    int self = static_cast<int>(space.names.size());
    space.names.push_back(feature.name);
    space.parent.push_back(parent);
    space.source.push_back(source);
    space.free_bit.push_back(source == FeatureSpace::BitSource::free ? space.free_count++ : -1);
    for (const uvl::GroupNode& group : feature.groups) {
        FeatureSpace::Group g;
        g.kind = group.kind;
        g.lo = group.lo;
        g.hi = group.hi;
        g.parent_index = self;
        int group_slot = static_cast<int>(space.groups.size());
        space.groups.push_back(g);
        for (const uvl::FeatureNode& child : group.children) {
            int child_index = static_cast<int>(space.names.size());
            space.groups[group_slot].children.push_back(child_index);
            flatten(child, self, space,
                    group.kind == uvl::GroupKind::mandatory ? FeatureSpace::BitSource::derived
                                                            : FeatureSpace::BitSource::free);
        }
    }
}

} // namespace

std::shared_ptr<const FeatureSpace> FeatureSpace::build(const uvl::UvlModel& model) {
    auto space = std::make_shared<FeatureSpace>();
    flatten(model.root, -1, *space, BitSource::root);
    if (space->feature_count() > kMaxFeatures)
        throw OracleError("model has " + std::to_string(space->feature_count()) +
                          " features; the oracle supports at most 63");
    for (const uvl::ExprPtr& c : model.constraints) {
        UvlCompiler compiler{space->names, {}};
        compiler.out.root = compiler.compile(*c);
        space->constraints.push_back(std::move(compiler.out));
    }
    return space;
}

int FeatureSpace::index_of(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

uint64_t FeatureSpace::decode(uint64_t candidate) const {
    uint64_t mask = 0;
    for (size_t i = 0; i < names.size(); ++i) {
        uint64_t bit;
        switch (source[i]) {
        case BitSource::root:
            bit = 1;
            break;
        case BitSource::derived:
            bit = (mask >> parent[i]) & 1; // parents precede children in pre-order
            break;
        default:
            bit = (candidate >> free_bit[i]) & 1;
            break;
        }
        mask |= bit << i;
    }
    return mask;
}

bool FeatureSpace::valid(uint64_t mask) const {
    if (!(mask & 1))
        return false; // root must be selected
    for (const Group& group : groups) {
        uint64_t p = (mask >> group.parent_index) & 1;
        int count = 0;
        for (int child : group.children)
            count += static_cast<int>((mask >> child) & 1);
        switch (group.kind) {
        case uvl::GroupKind::mandatory:
            if (count != static_cast<int>(p) * static_cast<int>(group.children.size()))
                return false;
            break;
        case uvl::GroupKind::optional:
            if (!p && count != 0)
                return false;
            break;
        case uvl::GroupKind::alternative:
            if (count != (p ? 1 : 0))
                return false;
            break;
        case uvl::GroupKind::or_group:
            if (p ? count < 1 : count != 0)
                return false;
            break;
        case uvl::GroupKind::cardinality:
            if (p ? (count < group.lo || count > group.hi) : count != 0)
                return false;
            break;
        }
    }
    for (const CompiledConstraint& c : constraints)
        if (!eval_constraint(c, c.root, mask))
            return false;
    return true;
}

bool Configuration::selected(std::string_view name) const {
    int idx = space->index_of(name);
    if (idx < 0)
        throw OracleError("unknown feature '" + std::string(name) + "'");
    return (mask >> idx) & 1;
}

std::vector<std::string> Configuration::selected_names() const {
    std::vector<std::string> out;
    for (size_t i = 0; i < space->feature_count(); ++i)
        if ((mask >> i) & 1)
            out.push_back(space->names[i]);
    return out;
}

namespace {

// Enumeration kernel. The parallel version splits the candidate range into
// contiguous chunks; concatenating per-chunk results in chunk order yields
// exactly the serial (ascending) order.
std::vector<uint64_t> enumerate_masks(const FeatureSpace& space, Exec exec) {
    uint64_t total = uint64_t{1} << space.free_count;
    if (exec == Exec::serial || total < kParallelThreshold) {
        std::vector<uint64_t> out;
        for (uint64_t cand = 0; cand < total; ++cand) {
            uint64_t mask = space.decode(cand);
            if (space.valid(mask))
                out.push_back(mask);
        }
        return out;
    }

    int chunks = chunk_count(total);
    std::vector<std::vector<uint64_t>> parts(chunks);
    uint64_t per = total / chunks;
#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1)
#endif
    for (int c = 0; c < chunks; ++c) {
        uint64_t begin = per * c;
        uint64_t end = c + 1 == chunks ? total : begin + per;
        std::vector<uint64_t> local; // thread-local; parts[c] headers would share cache lines
        for (uint64_t cand = begin; cand < end; ++cand) {
            uint64_t mask = space.decode(cand);
            if (space.valid(mask))
                local.push_back(mask);
        }
        parts[c] = std::move(local);
    }
    std::vector<uint64_t> out;
    for (std::vector<uint64_t>& part : parts)
        out.insert(out.end(), part.begin(), part.end());
    return out;
}

} // namespace

std::vector<Configuration> enumerate_uvl_configurations(const uvl::UvlModel& model, int cap_bits,
                                                        Exec exec) {
    std::shared_ptr<const FeatureSpace> space = FeatureSpace::build(model);
    if (space->free_count > cap_bits)
        cap_error("UVL configuration space", uint64_t{1} << std::min(space->free_count, 63),
                  cap_bits);
    std::vector<uint64_t> masks = enumerate_masks(*space, exec);
    std::vector<Configuration> out;
    out.reserve(masks.size());
    for (uint64_t mask : masks)
        out.push_back({space, mask});
    return out;
}

// ---------------------------------------------------------------------------
// IVML side: assignment space, compiled constraints, evaluation
// ---------------------------------------------------------------------------

namespace {
constexpr int64_t kPoison = std::numeric_limits<int64_t>::min();
}

struct IvmlSpace::Compiled {
    enum class Op {
        const_bool,
        const_int,
        var_bool,
        var_enum, // poison when UNDEFINED
        is_defined,
        size_of,
        includes,
        not_op,
        and_op,
        or_op,
        implies,
        iff,
        eq,
        gt,
        ge,
        lt,
        le,
    };

    struct CNode {
        Op op;
        int a = -1;
        int b = -1;
        int var = -1;
        int64_t imm = 0;
    };

    std::vector<CNode> nodes;
    int root = -1;

    int64_t eval(int id, std::span<const uint64_t> slots) const {
        const CNode& n = nodes[id];
        switch (n.op) {
        case Op::const_bool:
        case Op::const_int:
            return n.imm;
        case Op::var_bool:
            return static_cast<int64_t>(slots[n.var]);
        case Op::var_enum: {
            uint64_t v = slots[n.var];
            return v == 0 ? kPoison : static_cast<int64_t>(v) - 1;
        }
        case Op::is_defined:
            return slots[n.var] != 0;
        case Op::size_of:
            return std::popcount(slots[n.var]);
        case Op::includes:
            return (slots[n.var] >> n.imm) & 1;
        case Op::not_op: {
            int64_t v = eval(n.a, slots);
            return v == kPoison ? kPoison : !v;
        }
        case Op::and_op: {
            int64_t l = eval(n.a, slots);
            if (l == kPoison || l == 0)
                return l;
            int64_t r = eval(n.b, slots);
            return r == kPoison ? kPoison : r != 0;
        }
        case Op::or_op: {
            int64_t l = eval(n.a, slots);
            if (l == kPoison)
                return kPoison;
            if (l != 0)
                return 1;
            int64_t r = eval(n.b, slots);
            return r == kPoison ? kPoison : r != 0;
        }
        case Op::implies: {
            int64_t l = eval(n.a, slots);
            if (l == kPoison)
                return kPoison;
            if (l == 0)
                return 1;
            int64_t r = eval(n.b, slots);
            return r == kPoison ? kPoison : r != 0;
        }
        case Op::iff: {
            int64_t l = eval(n.a, slots);
            if (l == kPoison)
                return kPoison;
            int64_t r = eval(n.b, slots);
            return r == kPoison ? kPoison : (l != 0) == (r != 0);
        }
        default: {
            int64_t l = eval(n.a, slots);
            if (l == kPoison)
                return kPoison;
            int64_t r = eval(n.b, slots);
            if (r == kPoison)
                return kPoison;
            switch (n.op) {
            case Op::eq: return l == r;
            case Op::gt: return l > r;
            case Op::ge: return l >= r;
            case Op::lt: return l < r;
            case Op::le: return l <= r;
            default: return kPoison;
            }
        }
        }
    }
};

namespace {

using Compiled = IvmlSpace::Compiled;

enum class ValueKind { boolean, integer, enum_value };

struct Typed {
    int node;
    ValueKind kind;
    const ivml::EnumDef* en = nullptr;
};

class IvmlCompiler {
public:
    IvmlCompiler(const IvmlSpace& space) : space_(space) {}

    std::shared_ptr<const Compiled> compile_constraint(const ivml::Expr& e) {
        out_ = std::make_shared<Compiled>();
        Typed t = compile(e);
        if (t.kind != ValueKind::boolean)
            throw OracleError("constraint does not evaluate to a boolean");
        out_->root = t.node;
        return out_;
    }

private:
    Typed compile(const ivml::Expr& e) {
        switch (e.kind) {
        case ivml::ExprKind::var_ref: {
            const IvmlSpace::Var& var = find_var(e.name);
            int idx = space_.index_of(e.name);
            switch (var.kind) {
            case IvmlSpace::VarKind::boolean:
                return {emit({Compiled::Op::var_bool, -1, -1, idx, 0}), ValueKind::boolean};
            case IvmlSpace::VarKind::enum_instance:
                return {emit({Compiled::Op::var_enum, -1, -1, idx, 0}), ValueKind::enum_value,
                        var.element_enum};
            default:
                throw OracleError("set variable '" + e.name +
                                  "' used as a value; use size() or includes()");
            }
        }
        case ivml::ExprKind::enum_lit: {
            const ivml::EnumDef* en = find_enum(e.name);
            return {emit({Compiled::Op::const_int, -1, -1, -1, literal_index(*en, e.literal)}),
                    ValueKind::enum_value, en};
        }
        case ivml::ExprKind::bool_lit:
            return {emit({Compiled::Op::const_bool, -1, -1, -1, e.bval ? 1 : 0}),
                    ValueKind::boolean};
        case ivml::ExprKind::int_lit:
            return {emit({Compiled::Op::const_int, -1, -1, -1, e.ival}), ValueKind::integer};
        case ivml::ExprKind::is_defined: {
            // Boolean and set variables always carry a value; only enum
            // instances can be UNDEFINED.
            const IvmlSpace::Var& var = find_var(e.name);
            if (var.kind != IvmlSpace::VarKind::enum_instance)
                return {emit({Compiled::Op::const_bool, -1, -1, -1, 1}), ValueKind::boolean};
            return {emit({Compiled::Op::is_defined, -1, -1, space_.index_of(e.name), 0}),
                    ValueKind::boolean};
        }
        case ivml::ExprKind::size_fn: {
            const IvmlSpace::Var& var = find_var(e.name);
            if (var.kind != IvmlSpace::VarKind::set)
                throw OracleError("size() requires a set variable, got '" + e.name + "'");
            return {emit({Compiled::Op::size_of, -1, -1, space_.index_of(e.name), 0}),
                    ValueKind::integer};
        }
        case ivml::ExprKind::includes_fn: {
            const IvmlSpace::Var& var = find_var(e.name);
            if (var.kind != IvmlSpace::VarKind::set)
                throw OracleError("includes() requires a set variable, got '" + e.name + "'");
            const ivml::Expr& lit = *e.a;
            if (lit.kind != ivml::ExprKind::enum_lit ||
                lit.name != var.element_enum->name)
                throw OracleError("includes() literal must belong to the set's element enum");
            return {emit({Compiled::Op::includes, -1, -1, space_.index_of(e.name),
                          literal_index(*var.element_enum, lit.literal)}),
                    ValueKind::boolean};
        }
        case ivml::ExprKind::not_op: {
            Typed a = expect(*e.a, ValueKind::boolean);
            return {emit({Compiled::Op::not_op, a.node, -1, -1, 0}), ValueKind::boolean};
        }
        case ivml::ExprKind::and_op:
        case ivml::ExprKind::or_op:
        case ivml::ExprKind::implies:
        case ivml::ExprKind::iff: {
            Typed a = expect(*e.a, ValueKind::boolean);
            Typed b = expect(*e.b, ValueKind::boolean);
            Compiled::Op op = e.kind == ivml::ExprKind::and_op  ? Compiled::Op::and_op
                              : e.kind == ivml::ExprKind::or_op ? Compiled::Op::or_op
                              : e.kind == ivml::ExprKind::implies
                                  ? Compiled::Op::implies
                                  : Compiled::Op::iff;
            return {emit({op, a.node, b.node, -1, 0}), ValueKind::boolean};
        }
        case ivml::ExprKind::eq:
        case ivml::ExprKind::ne: {
            Typed a = compile(*e.a);
            Typed b = compile(*e.b);
            if (a.kind != b.kind || (a.kind == ValueKind::enum_value && a.en != b.en))
                throw OracleError("equality operands have mismatched types");
            int eq = emit({Compiled::Op::eq, a.node, b.node, -1, 0});
            if (e.kind == ivml::ExprKind::ne)
                return {emit({Compiled::Op::not_op, eq, -1, -1, 0}), ValueKind::boolean};
            return {eq, ValueKind::boolean};
        }
        case ivml::ExprKind::gt:
        case ivml::ExprKind::ge:
        case ivml::ExprKind::lt:
        case ivml::ExprKind::le: {
            Typed a = expect(*e.a, ValueKind::integer);
            Typed b = expect(*e.b, ValueKind::integer);
            Compiled::Op op = e.kind == ivml::ExprKind::gt   ? Compiled::Op::gt
                              : e.kind == ivml::ExprKind::ge ? Compiled::Op::ge
                              : e.kind == ivml::ExprKind::lt ? Compiled::Op::lt
                                                             : Compiled::Op::le;
            return {emit({op, a.node, b.node, -1, 0}), ValueKind::boolean};
        }
        default:
            throw OracleError(
                "constraint uses arithmetic, real, or string operations that are not "
                "evaluable over finite domains");
        }
    }

    Typed expect(const ivml::Expr& e, ValueKind want) {
        Typed t = compile(e);
        if (t.kind != want)
            throw OracleError(std::string("operand has the wrong type; expected ") +
                              (want == ValueKind::boolean ? "boolean" : "integer"));
        return t;
    }

    int emit(Compiled::CNode node) {
        out_->nodes.push_back(node);
        return static_cast<int>(out_->nodes.size() - 1);
    }

    const IvmlSpace::Var& find_var(const std::string& name) {
        int idx = space_.index_of(name);
        if (idx < 0)
            throw OracleError("constraint references undeclared variable '" + name + "'");
        return space_.vars[idx];
    }

    const ivml::EnumDef* find_enum(const std::string& name) {
        for (const ivml::EnumDef& en : space_.enums)
            if (en.name == name)
                return &en;
        throw OracleError("constraint references undeclared enum '" + name + "'");
    }

    static int64_t literal_index(const ivml::EnumDef& en, const std::string& literal) {
        auto it = std::find(en.literals.begin(), en.literals.end(), literal);
        if (it == en.literals.end())
            throw OracleError("enum '" + en.name + "' has no literal '" + literal + "'");
        return it - en.literals.begin();
    }

    const IvmlSpace& space_;
    std::shared_ptr<Compiled> out_;
};

} // namespace

std::shared_ptr<const IvmlSpace> IvmlSpace::build(const ivml::Project& project) {
    std::vector<std::string> problems = ivml::validate_project(project);
    if (!problems.empty())
        throw OracleError("project is not valid: " + problems.front());

    auto space = std::make_shared<IvmlSpace>();
    for (const ivml::Decl& decl : project.decls)
        if (const auto* en = std::get_if<ivml::EnumDef>(&decl))
            space->enums.push_back(*en);

    auto enum_by_name = [&](const std::string& name) -> const ivml::EnumDef* {
        for (const ivml::EnumDef& en : space->enums)
            if (en.name == name)
                return &en;
        return nullptr;
    };

    space->total = 1;
    for (const ivml::Decl& decl : project.decls) {
        const auto* var = std::get_if<ivml::VarDecl>(&decl);
        if (!var)
            continue;
        Var v;
        v.name = var->name;
        switch (var->type.kind) {
        case ivml::TypeKind::boolean:
            v.kind = VarKind::boolean;
            v.domain = 2;
            break;
        case ivml::TypeKind::enumeration:
            v.kind = VarKind::enum_instance;
            v.element_enum = enum_by_name(var->type.enum_name);
            v.domain = v.element_enum->literals.size() + 1; // literals + UNDEFINED
            break;
        case ivml::TypeKind::set_of_enum: {
            v.kind = VarKind::set;
            v.element_enum = enum_by_name(var->type.enum_name);
            size_t k = v.element_enum->literals.size();
            if (k > 62)
                throw OracleError("enum '" + var->type.enum_name + "' is too large to enumerate");
            v.domain = uint64_t{1} << k;
            break;
        }
        default:
            throw OracleError("variable '" + var->name +
                              "' has a non-enumerable type (Integer/Real/String)");
        }
        if (!space->overflowed) {
            if (space->total > (uint64_t{1} << 62) / v.domain)
                space->overflowed = true;
            else
                space->total *= v.domain;
        }
        space->vars.push_back(std::move(v));
    }

    IvmlCompiler compiler(*space);
    for (const ivml::Decl& decl : project.decls)
        if (const auto* c = std::get_if<ivml::ConstraintDecl>(&decl))
            space->constraints.push_back(compiler.compile_constraint(*c->expr));
    return space;
}

int IvmlSpace::index_of(std::string_view name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name)
            return static_cast<int>(i);
    return -1;
}

void IvmlSpace::decode(uint64_t index, std::span<uint64_t> slots) const {
    for (size_t i = 0; i < vars.size(); ++i) {
        slots[i] = index % vars[i].domain;
        index /= vars[i].domain;
    }
}

uint64_t IvmlSpace::encode(std::span<const uint64_t> slots) const {
    uint64_t index = 0;
    for (size_t i = vars.size(); i-- > 0;)
        index = index * vars[i].domain + slots[i];
    return index;
}

bool IvmlSpace::valid(std::span<const uint64_t> slots) const {
    for (const std::shared_ptr<const Compiled>& c : constraints) {
        int64_t v = c->eval(c->root, slots);
        if (v == kPoison || v == 0)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

IvmlAssignment IvmlAssignment::empty(std::shared_ptr<const IvmlSpace> space) {
    IvmlAssignment a;
    a.slots.assign(space->vars.size(), 0);
    a.space = std::move(space);
    return a;
}

namespace {

int require_var(const IvmlSpace& space, std::string_view name) {
    int idx = space.index_of(name);
    if (idx < 0)
        throw OracleError("assignment references undeclared variable '" + std::string(name) + "'");
    return idx;
}

int64_t require_literal(const ivml::EnumDef& en, std::string_view literal) {
    for (size_t i = 0; i < en.literals.size(); ++i)
        if (en.literals[i] == literal)
            return static_cast<int64_t>(i);
    throw OracleError("enum '" + en.name + "' has no literal '" + std::string(literal) + "'");
}

} // namespace

void IvmlAssignment::set_bool(std::string_view var, bool value) {
    int idx = require_var(*space, var);
    if (space->vars[idx].kind != IvmlSpace::VarKind::boolean)
        throw OracleError("variable '" + std::string(var) + "' is not Boolean");
    slots[idx] = value ? 1 : 0;
}

void IvmlAssignment::set_enum(std::string_view var, std::string_view literal) {
    int idx = require_var(*space, var);
    const IvmlSpace::Var& v = space->vars[idx];
    if (v.kind != IvmlSpace::VarKind::enum_instance)
        throw OracleError("variable '" + std::string(var) + "' is not an enum instance");
    slots[idx] = literal.empty() ? 0 : require_literal(*v.element_enum, literal) + 1;
}

void IvmlAssignment::set_elements(std::string_view var, const std::vector<std::string>& literals) {
    int idx = require_var(*space, var);
    const IvmlSpace::Var& v = space->vars[idx];
    if (v.kind != IvmlSpace::VarKind::set)
        throw OracleError("variable '" + std::string(var) + "' is not a set");
    uint64_t mask = 0;
    for (const std::string& lit : literals)
        mask |= uint64_t{1} << require_literal(*v.element_enum, lit);
    slots[idx] = mask;
}

std::string IvmlAssignment::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < space->vars.size(); ++i) {
        const IvmlSpace::Var& v = space->vars[i];
        if (i)
            os << ' ';
        os << v.name << '=';
        switch (v.kind) {
        case IvmlSpace::VarKind::boolean:
            os << (slots[i] ? "true" : "false");
            break;
        case IvmlSpace::VarKind::enum_instance:
            if (slots[i] == 0)
                os << "UNDEFINED";
            else
                os << v.element_enum->literals[slots[i] - 1];
            break;
        case IvmlSpace::VarKind::set: {
            os << '{';
            bool first = true;
            for (size_t bit = 0; bit < v.element_enum->literals.size(); ++bit) {
                if ((slots[i] >> bit) & 1) {
                    if (!first)
                        os << ',';
                    first = false;
                    os << v.element_enum->literals[bit];
                }
            }
            os << '}';
            break;
        }
        }
    }
    return os.str();
}

bool evaluate_ivml(const ivml::Project& project, const IvmlAssignment& assignment) {
    std::shared_ptr<const IvmlSpace> space = IvmlSpace::build(project);
    if (!assignment.space || space->vars.size() != assignment.slots.size())
        throw OracleError("assignment does not cover the project's variables");
    for (size_t i = 0; i < space->vars.size(); ++i)
        if (space->vars[i].name != assignment.space->vars[i].name ||
            space->vars[i].domain != assignment.space->vars[i].domain)
            throw OracleError("assignment was built for a different project");
    return space->valid(assignment.slots);
}

// ---------------------------------------------------------------------------
// Mapping configurations into assignments
// ---------------------------------------------------------------------------

namespace {

struct MapOp {
    enum class Kind { copy_bool, select_literal, add_element };
    Kind kind;
    int feature = -1; // bit in the configuration mask
    int var = -1;     // slot in the assignment
    uint64_t payload = 0;
};

std::vector<MapOp> build_map_ops(const BindingMap& bindings, const FeatureSpace& uvl_space,
                                 const IvmlSpace& ivml_space) {
    std::vector<MapOp> ops;
    for (const auto& [feature, binding] : bindings) {
        MapOp op;
        switch (binding.kind) {
        case FeatureBinding::Kind::boolean_var:
            op.kind = MapOp::Kind::copy_bool;
            break;
        case FeatureBinding::Kind::alt_member:
            op.kind = MapOp::Kind::select_literal;
            break;
        case FeatureBinding::Kind::or_member:
            op.kind = MapOp::Kind::add_element;
            break;
        case FeatureBinding::Kind::typed_var:
            throw OracleError("feature '" + feature + "' is typed; the oracle only maps "
                              "boolean models");
        default:
            continue; // elided features contribute nothing
        }
        op.feature = uvl_space.index_of(feature);
        op.var = ivml_space.index_of(binding.var_name);
        if (op.feature < 0 || op.var < 0)
            throw OracleError("binding for '" + feature + "' does not match the model/project");
        if (op.kind != MapOp::Kind::copy_bool) {
            const ivml::EnumDef* en = ivml_space.vars[op.var].element_enum;
            op.payload = static_cast<uint64_t>(require_literal(*en, binding.literal));
        }
        ops.push_back(op);
    }
    return ops;
}

void apply_map_ops(const std::vector<MapOp>& ops, uint64_t mask, std::span<uint64_t> slots) {
    for (uint64_t& s : slots)
        s = 0;
    for (const MapOp& op : ops) {
        uint64_t bit = (mask >> op.feature) & 1;
        if (!bit)
            continue;
        switch (op.kind) {
        case MapOp::Kind::copy_bool:
            slots[op.var] = 1;
            break;
        case MapOp::Kind::select_literal:
            if (slots[op.var] != 0 && slots[op.var] != op.payload + 1)
                throw OracleError("configuration selects two members of one alternative group");
            slots[op.var] = op.payload + 1;
            break;
        case MapOp::Kind::add_element:
            slots[op.var] |= uint64_t{1} << op.payload;
            break;
        }
    }
}

} // namespace

IvmlAssignment map_configuration(const Configuration& config, const BindingMap& bindings,
                                 std::shared_ptr<const IvmlSpace> space) {
    std::vector<MapOp> ops = build_map_ops(bindings, *config.space, *space);
    IvmlAssignment assignment = IvmlAssignment::empty(std::move(space));
    apply_map_ops(ops, config.mask, assignment.slots);
    return assignment;
}

// ---------------------------------------------------------------------------
// Counting and equivalence
// ---------------------------------------------------------------------------

uint64_t count_valid_ivml_assignments(const IvmlSpace& space, int cap_bits, Exec exec) {
    if (space.overflowed || space.total > (uint64_t{1} << cap_bits))
        cap_error("IVML assignment space", space.overflowed ? 0 : space.total, cap_bits);
    uint64_t total = space.total;
    size_t width = space.vars.size();

    if (exec == Exec::serial || total < kParallelThreshold) {
        std::vector<uint64_t> slots(width);
        uint64_t count = 0;
        for (uint64_t index = 0; index < total; ++index) {
            space.decode(index, slots);
            if (space.valid(slots))
                ++count;
        }
        return count;
    }

    int chunks = chunk_count(total);
    std::vector<uint64_t> counts(chunks, 0);
    uint64_t per = total / chunks;
#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1)
#endif
    for (int c = 0; c < chunks; ++c) {
        uint64_t begin = per * c;
        uint64_t end = c + 1 == chunks ? total : begin + per;
        std::vector<uint64_t> slots(width);
        uint64_t local = 0;
        for (uint64_t index = begin; index < end; ++index) {
            space.decode(index, slots);
            if (space.valid(slots))
                ++local;
        }
        counts[c] = local;
    }
    uint64_t count = 0;
    for (uint64_t c : counts)
        count += c;
    return count;
}

EquivalenceReport check_equivalence(const uvl::UvlModel& model, const ivml::Project& project,
                                    const BindingMap& bindings, int cap_bits, Exec exec) {
    auto start = std::chrono::steady_clock::now();
    EquivalenceReport report;

    std::shared_ptr<const FeatureSpace> uvl_space = FeatureSpace::build(model);
    if (uvl_space->free_count > cap_bits)
        cap_error("UVL configuration space",
                  uint64_t{1} << std::min(uvl_space->free_count, 63), cap_bits);
    std::vector<uint64_t> masks = enumerate_masks(*uvl_space, exec);
    report.uvl_count = masks.size();

    std::shared_ptr<const IvmlSpace> ivml_space = IvmlSpace::build(project);
    std::vector<MapOp> ops = build_map_ops(bindings, *uvl_space, *ivml_space);

    size_t width = ivml_space->vars.size();
    std::vector<uint64_t> slots(width);
    std::vector<uint64_t> images;
    images.reserve(masks.size());
    report.all_images_valid = true;
    for (uint64_t mask : masks) {
        apply_map_ops(ops, mask, slots);
        if (!ivml_space->valid(slots)) {
            report.all_images_valid = false;
            if (report.invalid_images.size() < 5) {
                IvmlAssignment a = IvmlAssignment::empty(ivml_space);
                a.slots = slots;
                report.invalid_images.emplace_back(Configuration{uvl_space, mask}, std::move(a));
            }
        }
        images.push_back(ivml_space->encode(slots));
    }

    std::vector<uint64_t> sorted = images;
    std::sort(sorted.begin(), sorted.end());
    report.injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();

    report.ivml_count = count_valid_ivml_assignments(*ivml_space, cap_bits, exec);
    report.bijective = report.all_images_valid && report.injective &&
                       report.uvl_count == report.ivml_count;

    if (!report.bijective && report.ivml_count > 0) {
        // Collect a few valid assignments no configuration maps onto.
        for (uint64_t index = 0; index < ivml_space->total && report.unmapped_ivml.size() < 5;
             ++index) {
            ivml_space->decode(index, slots);
            if (!ivml_space->valid(slots))
                continue;
            if (!std::binary_search(sorted.begin(), sorted.end(), index)) {
                IvmlAssignment a = IvmlAssignment::empty(ivml_space);
                a.slots = slots;
                report.unmapped_ivml.push_back(std::move(a));
            }
        }
    }

    report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return report;
}

std::string EquivalenceReport::to_text() const {
    std::ostringstream os;
    os << "uvl configurations: " << uvl_count << '\n';
    os << "ivml assignments:   " << ivml_count << '\n';
    os << "images valid:       " << (all_images_valid ? "yes" : "no") << '\n';
    os << "injective:          " << (injective ? "yes" : "no") << '\n';
    os << "bijective:          " << (bijective ? "yes" : "no") << '\n';
    os << "elapsed:            " << elapsed.count() << " ms\n";
    for (const auto& [config, image] : invalid_images) {
        os << "invalid image:\n  config:     {";
        std::vector<std::string> names = config.selected_names();
        for (size_t i = 0; i < names.size(); ++i)
            os << (i ? ", " : "") << names[i];
        os << "}\n  assignment: " << image.to_string() << '\n';
    }
    for (const IvmlAssignment& a : unmapped_ivml)
        os << "unmapped assignment: " << a.to_string() << '\n';
    return os.str();
}

std::string EquivalenceReport::equiv_line() const {
    std::ostringstream os;
    os << "EQUIV uvl=" << uvl_count << " ivml=" << ivml_count << " bijective="
       << (bijective ? "true" : "false");
    return os.str();
}

} // namespace uvl2ivml::oracle
