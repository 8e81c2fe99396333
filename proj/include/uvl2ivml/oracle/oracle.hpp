#pragma once

#include "uvl2ivml/ivml/ast.hpp"
#include "uvl2ivml/transform/transform.hpp"
#include "uvl2ivml/uvl/ast.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uvl2ivml::oracle {

/// Candidate spaces above 2^cap refuse to enumerate rather than sample.
inline constexpr int kDefaultCapBits = 24;

class CapExceededError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-boolean models, unmappable constraints, type mismatches.
class OracleError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Exec { serial, parallel };

/// Flattened boolean-level feature model prepared for exhaustive
/// enumeration: pre-order feature list, group rules, compiled cross-tree
/// constraints, and the set of free decision bits (everything that is not
/// the root or a mandatory child).
struct FeatureSpace {
    struct Group {
        uvl::GroupKind kind;
        int lo = 0;
        int hi = 0;
        int parent_index = -1;
        std::vector<int> children;
    };

    struct Node {
        uvl::ExprKind kind;
        int a = -1;
        int b = -1;
        int feature = -1;
        bool bval = false;
    };

    struct CompiledConstraint {
        std::vector<Node> nodes;
        int root = -1;
    };

    enum class BitSource { root, derived, free };

    std::vector<std::string> names; // pre-order
    std::vector<int> parent;        // -1 for root
    std::vector<BitSource> source;
    std::vector<int> free_bit; // bit position for free features, -1 otherwise
    std::vector<Group> groups;
    std::vector<CompiledConstraint> constraints;
    int free_count = 0;

    /// Throws OracleError for non-boolean models or constraints beyond
    /// propositional logic.
    static std::shared_ptr<const FeatureSpace> build(const uvl::UvlModel& model);

    size_t feature_count() const { return names.size(); }
    uint64_t decode(uint64_t candidate) const; // free bits -> full selection mask
    bool valid(uint64_t mask) const;
    int index_of(std::string_view name) const;
};

/// One valid configuration: a selection mask over the space's pre-order
/// feature list.
struct Configuration {
    std::shared_ptr<const FeatureSpace> space;
    uint64_t mask = 0;

    bool selected(std::string_view name) const;
    std::vector<std::string> selected_names() const;
};

/// All valid configurations, in ascending candidate order (deterministic
/// regardless of execution policy). Throws CapExceededError when the model
/// has more free decision bits than the cap allows.
std::vector<Configuration> enumerate_uvl_configurations(const uvl::UvlModel& model,
                                                        int cap_bits = kDefaultCapBits,
                                                        Exec exec = Exec::parallel);

/// IVML project prepared for assignment-space enumeration. Variable domains:
/// Boolean -> {false,true}; enum instance -> literals plus UNDEFINED; set ->
/// the full powerset of the element enum. Slot encoding: booleans 0/1, enum
/// instances 0 (UNDEFINED) or literal index + 1, sets a bitmask.
struct IvmlSpace {
    enum class VarKind { boolean, enum_instance, set };

    struct Var {
        std::string name;
        VarKind kind;
        const ivml::EnumDef* element_enum = nullptr;
        uint64_t domain = 0;
    };

    std::vector<Var> vars; // declaration order
    std::vector<ivml::EnumDef> enums;
    uint64_t total = 0; // product of domains; capped_out set when it overflows
    bool overflowed = false;
    struct Compiled;
    std::vector<std::shared_ptr<const Compiled>> constraints;

    /// Throws OracleError when a variable has a non-enumerable type or a
    /// constraint cannot be evaluated over the finite domains.
    static std::shared_ptr<const IvmlSpace> build(const ivml::Project& project);

    int index_of(std::string_view name) const;
    void decode(uint64_t index, std::span<uint64_t> slots) const;
    uint64_t encode(std::span<const uint64_t> slots) const;
    bool valid(std::span<const uint64_t> slots) const;
};

/// A full valuation of an IVML project's variables.
struct IvmlAssignment {
    std::shared_ptr<const IvmlSpace> space;
    std::vector<uint64_t> slots; // one per variable, all UNDEFINED/false/empty by default

    static IvmlAssignment empty(std::shared_ptr<const IvmlSpace> space);

    void set_bool(std::string_view var, bool value);
    void set_enum(std::string_view var, std::string_view literal); // "" resets to UNDEFINED
    void set_elements(std::string_view var, const std::vector<std::string>& literals);

    std::string to_string() const;
};

/// True iff every constraint of the project holds under the assignment.
/// Evaluation is left-to-right with short-circuiting; reading an UNDEFINED
/// enum instance anywhere but isDefined makes the containing constraint
/// false. Throws OracleError on type mismatches.
bool evaluate_ivml(const ivml::Project& project, const IvmlAssignment& assignment);

/// Image of a UVL configuration under the binding map: Boolean variables
/// take the selection flag, alternative instances the selected literal (or
/// UNDEFINED), sets the selected members. Elided features contribute
/// nothing. Throws OracleError when the configuration selects two members
/// of one alternative group.
IvmlAssignment map_configuration(const Configuration& config, const BindingMap& bindings,
                                 std::shared_ptr<const IvmlSpace> space);

/// Number of valid assignments in the project's full domain product.
uint64_t count_valid_ivml_assignments(const IvmlSpace& space, int cap_bits = kDefaultCapBits,
                                      Exec exec = Exec::parallel);

struct EquivalenceReport {
    uint64_t uvl_count = 0;
    uint64_t ivml_count = 0;
    bool all_images_valid = false;
    bool injective = false;
    bool bijective = false;
    std::vector<IvmlAssignment> unmapped_ivml; // valid assignments outside the image, <= 5
    std::vector<std::pair<Configuration, IvmlAssignment>> invalid_images; // <= 5
    std::chrono::milliseconds elapsed{0};

    std::string to_text() const;    // human-readable block
    std::string equiv_line() const; // "EQUIV uvl=<n> ivml=<m> bijective=<bool>"
};

/// Enumerates valid UVL configurations, maps each through the bindings,
/// verifies every image against the project, checks injectivity, and
/// independently counts valid IVML assignments over the domain product.
/// bijective <=> counts equal, all images valid, map injective.
EquivalenceReport check_equivalence(const uvl::UvlModel& model, const ivml::Project& project,
                                    const BindingMap& bindings, int cap_bits = kDefaultCapBits,
                                    Exec exec = Exec::parallel);

} // namespace uvl2ivml::oracle
