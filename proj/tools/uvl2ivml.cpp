// uvl2ivml command-line front end: transform / check / validate.
//
// Exit codes: 0 success, 1 validation/transformation/equivalence failure,
// 2 usage, I/O, or cap errors. Diagnostics go to stderr; generated models
// and reports to the output file or stdout.

#include "uvl2ivml/ivml/emit.hpp"
#include "uvl2ivml/ivml/parser.hpp"
#include "uvl2ivml/oracle/oracle.hpp"
#include "uvl2ivml/transform/transform.hpp"
#include "uvl2ivml/uvl/parser.hpp"
#include "uvl2ivml/uvl/validate.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace uvl2ivml;

constexpr const char* kUsage = R"(usage: uvl2ivml <command> [options]

commands:
  transform <input.uvl> -o <output.ivml|->   convert a UVL model to IVML
  check <input.uvl>                          verify configuration-space equivalence
  validate <input.uvl|input.ivml>            parse and validate a model

options:
  -o, --output <path|->     output file for transform ('-' writes to stdout)
  --mode <faithful|strict>  constraint emission mode (default: faithful)
  --naming <suffix|pretty>  generated-name style (default: suffix)
  --project-name <name>     IVML project name (default: namespace or root)
  --cap <bits>              enumeration cap as a power of two (default: 24,
                            or the UVL2IVML_CAP environment variable)
  --lang <uvl|ivml>         input language for validate (default: by extension)
  -v, --verbose             timing notes on stderr
  -h, --help                this message
)";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Invocation {
    std::string command;
    std::string input;
    std::string output;
    TransformOptions transform;
    int cap_bits = oracle::kDefaultCapBits;
    std::string lang;
    bool verbose = false;
};

Invocation parse_args(int argc, char** argv) {
    Invocation inv;
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty())
        throw UsageError("missing command");
    if (args[0] == "-h" || args[0] == "--help") {
        std::cout << kUsage;
        std::exit(0);
    }
    inv.command = args[0];
    if (inv.command != "transform" && inv.command != "check" && inv.command != "validate")
        throw UsageError("unknown command '" + inv.command + "'");

    if (const char* env = std::getenv("UVL2IVML_CAP")) {
        try {
            inv.cap_bits = std::stoi(env);
        } catch (const std::exception&) {
            throw UsageError("UVL2IVML_CAP is not a number: '" + std::string(env) + "'");
        }
    }

    auto value = [&](size_t& i, const std::string& flag) -> std::string {
        if (i + 1 >= args.size())
            throw UsageError("missing value for " + flag);
        return args[++i];
    };

    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& arg = args[i];
        if (arg == "-o" || arg == "--output") {
            inv.output = value(i, arg);
        } else if (arg == "--mode") {
            std::string mode = value(i, arg);
            if (mode == "faithful")
                inv.transform.mode = TransformMode::faithful;
            else if (mode == "strict")
                inv.transform.mode = TransformMode::strict;
            else
                throw UsageError("unknown mode '" + mode + "'");
        } else if (arg == "--naming") {
            std::string naming = value(i, arg);
            if (naming == "suffix")
                inv.transform.naming = NamingMode::suffix;
            else if (naming == "pretty")
                inv.transform.naming = NamingMode::pretty;
            else
                throw UsageError("unknown naming mode '" + naming + "'");
        } else if (arg == "--project-name") {
            inv.transform.project_name = value(i, arg);
        } else if (arg == "--cap") {
            std::string cap = value(i, arg);
            try {
                inv.cap_bits = std::stoi(cap);
            } catch (const std::exception&) {
                throw UsageError("--cap expects a number, got '" + cap + "'");
            }
            if (inv.cap_bits < 1 || inv.cap_bits > 62)
                throw UsageError("--cap must be between 1 and 62");
        } else if (arg == "--lang") {
            inv.lang = value(i, arg);
            if (inv.lang != "uvl" && inv.lang != "ivml")
                throw UsageError("--lang expects 'uvl' or 'ivml'");
        } else if (arg == "-v" || arg == "--verbose") {
            inv.verbose = true;
        } else if (!arg.empty() && arg[0] == '-' && arg != "-") {
            throw UsageError("unknown option '" + arg + "'");
        } else if (inv.input.empty()) {
            inv.input = arg;
        } else {
            throw UsageError("unexpected argument '" + arg + "'");
        }
    }
    if (inv.input.empty())
        throw UsageError("missing input file");
    return inv;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad())
        throw IoError("failed to read '" + path + "'");
    return os.str();
}

// Writes via a temporary file and rename so a failure never leaves a
// partial output behind.
void write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + path + "' for writing");
        out << content;
        if (!out)
            throw IoError("failed to write '" + path + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("failed to move output into place at '" + path + "'");
    }
}

int print_diagnostics(const std::vector<Diagnostic>& diags) {
    int errors = 0;
    for (const Diagnostic& d : diags) {
        std::cerr << d.format() << '\n';
        if (d.severity == Severity::error)
            ++errors;
    }
    return errors;
}

uvl::UvlModel load_validated_uvl(const Invocation& inv) {
    std::string text = read_file(inv.input);
    uvl::UvlModel model = uvl::parse_uvl(text, inv.input);
    if (print_diagnostics(uvl::validate_uvl(model)) > 0)
        throw TransformError("input model is not valid");
    return model;
}

class Stopwatch {
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled) {}

    void note(const std::string& what) {
        if (!enabled_)
            return;
        auto now = std::chrono::steady_clock::now();
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - last_).count();
        std::cerr << "uvl2ivml: " << what << " (" << ms << " ms)\n";
        last_ = now;
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

int cmd_transform(const Invocation& inv) {
    if (inv.output.empty())
        throw UsageError("transform requires an output path (-o <file> or -o -)");
    Stopwatch watch(inv.verbose);
    uvl::UvlModel model = load_validated_uvl(inv);
    watch.note("parsed and validated input");

    TransformResult result = transform(model, inv.transform);
    std::string text = ivml::emit_ivml(result.project);
    watch.note("transformed and emitted");

    // Self-check: the emitted text must parse back to the same project.
    ivml::Project reparsed = ivml::parse_ivml_subset(text, "<emitted>");
    if (!ivml::equal(reparsed, result.project))
        throw TransformError("emitted IVML does not round-trip to the same project");
    watch.note("verified round trip");

    if (inv.output == "-")
        std::cout << text;
    else
        write_file(inv.output, text);
    return 0;
}

int cmd_check(const Invocation& inv) {
    Stopwatch watch(inv.verbose);
    uvl::UvlModel model = load_validated_uvl(inv);
    TransformResult result = transform(model, inv.transform);
    watch.note("transformed");

    oracle::EquivalenceReport report =
        oracle::check_equivalence(model, result.project, result.bindings, inv.cap_bits);
    watch.note("checked equivalence");

    std::cout << report.to_text();
    std::cout << report.equiv_line() << '\n';
    bool ok = inv.transform.mode == TransformMode::strict ? report.bijective
                                                          : report.all_images_valid;
    return ok ? 0 : 1;
}

int cmd_validate(const Invocation& inv) {
    std::string lang = inv.lang;
    if (lang.empty()) {
        std::string ext = std::filesystem::path(inv.input).extension().string();
        if (ext == ".uvl")
            lang = "uvl";
        else if (ext == ".ivml")
            lang = "ivml";
        else
            throw UsageError("cannot infer language from '" + inv.input +
                             "'; pass --lang uvl|ivml");
    }
    std::string text = read_file(inv.input);
    if (lang == "uvl") {
        uvl::UvlModel model = uvl::parse_uvl(text, inv.input);
        return print_diagnostics(uvl::validate_uvl(model)) > 0 ? 1 : 0;
    }
    ivml::Project project = ivml::parse_ivml_subset(text, inv.input);
    std::vector<std::string> problems = ivml::validate_project(project);
    for (const std::string& p : problems)
        std::cerr << inv.input << ": error: " << p << '\n';
    return problems.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    std::optional<Invocation> inv;
    try {
        inv = parse_args(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "uvl2ivml: " << e.what() << '\n' << kUsage;
        return 2;
    }
    try {
        if (inv->command == "transform")
            return cmd_transform(*inv);
        if (inv->command == "check")
            return cmd_check(*inv);
        return cmd_validate(*inv);
    } catch (const UsageError& e) {
        std::cerr << "uvl2ivml: " << e.what() << '\n' << kUsage;
        return 2;
    } catch (const IoError& e) {
        std::cerr << "uvl2ivml: " << e.what() << '\n';
        return 2;
    } catch (const oracle::CapExceededError& e) {
        std::cerr << "uvl2ivml: " << e.what() << '\n';
        return 2;
    } catch (const oracle::OracleError& e) {
        std::cerr << "uvl2ivml: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << e.diagnostic().format() << '\n';
        return 1;
    } catch (const TransformError& e) {
        std::cerr << "uvl2ivml: " << e.what() << '\n';
        return 1;
    } catch (const ivml::EmitError& e) {
        std::cerr << "uvl2ivml: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "uvl2ivml: internal error: " << e.what() << '\n';
        return 2;
    }
}
