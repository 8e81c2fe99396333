#pragma once

#include "uvl2ivml/ivml/ast.hpp"
#include "uvl2ivml/uvl/ast.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace uvl2ivml {

class TransformError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// `faithful` emits exactly the forward group constraints; `strict` adds the
/// reverse implications needed for a configuration-space bijection.
enum class TransformMode { faithful, strict };

/// `suffix` uses the `__ENUM__<n>` / `__SET__<n>` name conventions; `pretty`
/// derives readable names from the parent feature.
enum class NamingMode { suffix, pretty };

struct TransformOptions {
    TransformMode mode = TransformMode::faithful;
    NamingMode naming = NamingMode::suffix;
    std::optional<std::string> project_name; // default: namespace, else root name
};

/// How one UVL feature shows up in the IVML output. `inclusion` is the IVML
/// expression that is true exactly when the feature is selected.
struct FeatureBinding {
    enum class Kind {
        always_included, // root or all-mandatory chain: elided, inclusion `true`
        boolean_var,     // optional boolean feature
        alt_member,      // child of an alternative group
        or_member,       // child of an or or cardinality group
        typed_var,       // non-boolean feature, always defined
        follows_parent,  // mandatory under a variable parent: no own variable
    };

    Kind kind = Kind::always_included;
    std::string var_name;  // boolean_var/typed_var: variable; alt/or member: instance/set
    std::string enum_name; // alt/or member
    std::string literal;   // alt/or member
    ivml::TypeRef type;    // typed_var
    ivml::ExprPtr inclusion;
};

using BindingMap = std::map<std::string, FeatureBinding, std::less<>>;

/// Generates enum/instance/set names. Counters run per parent feature, in
/// document order of that parent's groups, starting at 1. Generated names
/// never collide with source feature names (hard error) or each other.
/// `__COMPOUND__<n>` is reserved by the convention but never produced: the
/// transformation flattens the hierarchy and creates no compounds.
class NamePool {
public:
    explicit NamePool(std::set<std::string> source_names);

    struct GroupNames {
        std::string enum_name;
        std::string var_name;
    };

    /// Names for an alternative group's enum and instance variable.
    GroupNames claim_alternative(const std::string& parent, bool parent_abstract,
                                 bool parent_name_taken, NamingMode naming);

    /// Names for an or/cardinality group's enum and set variable.
    GroupNames claim_set(const std::string& parent, bool parent_abstract, bool is_or_group,
                         bool parent_name_taken, NamingMode naming);

private:
    std::string claim(std::string candidate, const std::string* alias_ok);
    std::string claim_pretty(const std::string& base, const std::string* alias_ok);

    std::set<std::string> source_;
    std::set<std::string> generated_;
    std::map<std::string, int> enum_counter_; // per parent, alternative groups
    std::map<std::string, int> set_counter_;  // per parent, or/cardinality groups
};

struct TransformResult {
    ivml::Project project;
    BindingMap bindings;
};

/// Everything a single group contributes: declarations (enum, variable, and
/// forward constraints, in emission order), strict-mode reverse constraints
/// (appended after the cross-tree constraints), and the bindings of the
/// group's direct children.
struct GroupEmission {
    std::vector<ivml::Decl> decls;
    std::vector<ivml::ExprPtr> strict_constraints;
    std::vector<std::pair<std::string, FeatureBinding>> child_bindings;
};

/// Transforms one group of `parent`, whose inclusion condition is
/// `parent_condition`. `parent_name_taken` states whether a variable named
/// after the parent already exists (blocks pretty-mode name reuse).
GroupEmission transform_group(const uvl::FeatureNode& parent, const uvl::GroupNode& group,
                              const ivml::ExprPtr& parent_condition, bool parent_name_taken,
                              NamePool& pool, const TransformOptions& opts);

/// Maps a UVL constraint onto IVML: operators one-to-one (`&`->and,
/// `=>`->implies, `!=`-><>, len->size, ...), feature references through
/// their bindings. The caller usually follows with simplify().
ivml::ExprPtr rewrite_constraint(const uvl::ConstraintExpr& expr, const BindingMap& bindings);

/// Boolean-literal folding to fixpoint: `true implies X` -> X,
/// `X implies true` -> true, identity/absorbing elements of and/or,
/// `not true`/`not false`, double negation.
ivml::ExprPtr simplify(const ivml::ExprPtr& expr);

/// Full model transformation. Declarations follow a pre-order walk of the
/// feature tree (groups in document order), then rewritten cross-tree
/// constraints in source order, then strict-mode auxiliary constraints.
TransformResult transform(const uvl::UvlModel& model, const TransformOptions& opts = {});

/// The binding map the transformation would produce, without the project.
BindingMap classify_features(const uvl::UvlModel& model, const TransformOptions& opts = {});

} // namespace uvl2ivml
