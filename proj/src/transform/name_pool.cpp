#include "uvl2ivml/transform/transform.hpp"

namespace uvl2ivml {

NamePool::NamePool(std::set<std::string> source_names) : source_(std::move(source_names)) {}

std::string NamePool::claim(std::string candidate, const std::string* alias_ok) {
    if (source_.count(candidate) && !(alias_ok && candidate == *alias_ok))
        throw TransformError("generated name '" + candidate +
                             "' collides with a feature name; rename the feature");
    if (!generated_.insert(candidate).second)
        throw TransformError("generated name '" + candidate + "' is not unique");
    return candidate;
}

// Pretty names take the base, or base2, base3, ... when the same parent needs
// the same base more than once. Landing on a source feature name is still a
// hard error unless the alias explicitly allows it.
std::string NamePool::claim_pretty(const std::string& base, const std::string* alias_ok) {
    std::string candidate = base;
    for (int n = 2; generated_.count(candidate); ++n)
        candidate = base + std::to_string(n);
    return claim(std::move(candidate), alias_ok);
}

NamePool::GroupNames NamePool::claim_alternative(const std::string& parent, bool parent_abstract,
                                                 bool parent_name_taken, NamingMode naming) {
    (void)parent_abstract;
    if (naming == NamingMode::suffix) {
        int n = ++enum_counter_[parent];
        std::string base = parent + "__ENUM__" + std::to_string(n);
        GroupNames names;
        names.enum_name = claim(base, nullptr);
        names.var_name = claim(base + "__INSTANCE", nullptr);
        return names;
    }
    GroupNames names;
    names.enum_name = claim_pretty(parent + "Types", nullptr);
    names.var_name = claim_pretty(parent, parent_name_taken ? nullptr : &parent);
    return names;
}

NamePool::GroupNames NamePool::claim_set(const std::string& parent, bool parent_abstract,
                                         bool is_or_group, bool parent_name_taken,
                                         NamingMode naming) {
    if (naming == NamingMode::suffix) {
        int n = ++set_counter_[parent];
        std::string base = parent + "__SET__" + std::to_string(n);
        GroupNames names;
        names.enum_name = claim(base, nullptr);
        names.var_name = claim(base + "__INSTANCE", nullptr);
        return names;
    }
    // Or-group element enums read as option lists under abstract grouping
    // parents ("UserManagementOptions") and as kinds of a concrete parent
    // ("PlatformType"); cardinality groups always use "<Parent>Types".
    std::string enum_base;
    if (!is_or_group)
        enum_base = parent + "Types";
    else if (parent_abstract)
        enum_base = parent + "Options";
    else
        enum_base = parent + "Type";
    GroupNames names;
    names.enum_name = claim_pretty(enum_base, nullptr);
    names.var_name = claim_pretty(parent, parent_name_taken ? nullptr : &parent);
    return names;
}

} // namespace uvl2ivml
