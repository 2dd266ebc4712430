#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wtrnet {

enum class Errc {
    invalid_modulus,
    modulus_mismatch,
    division_by_zero,
    not_acyclic,
    unknown_node,
    duplicate_node,
    incomplete_code,
    invalid_argument,
    enumeration_cap_exceeded,
    search_cap_exceeded,
    unknown_scenario,
    unknown_preset,
    invalid_loss,
    invalid_range,
    system_nonviable,
    invalid_config,
    unknown_emitter,
    invalid_path,
    empty_chain,
    not_admissible,
    missing_rate,
    parse_error,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_modulus: return "InvalidModulus";
        case Errc::modulus_mismatch: return "ModulusMismatch";
        case Errc::division_by_zero: return "DivisionByZero";
        case Errc::not_acyclic: return "NotAcyclic";
        case Errc::unknown_node: return "UnknownNode";
        case Errc::duplicate_node: return "DuplicateNode";
        case Errc::incomplete_code: return "IncompleteCode";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::enumeration_cap_exceeded: return "EnumerationCapExceeded";
        case Errc::search_cap_exceeded: return "SearchCapExceeded";
        case Errc::unknown_scenario: return "UnknownScenario";
        case Errc::unknown_preset: return "UnknownPreset";
        case Errc::invalid_loss: return "InvalidLoss";
        case Errc::invalid_range: return "InvalidRange";
        case Errc::system_nonviable: return "SystemNonviable";
        case Errc::invalid_config: return "InvalidConfig";
        case Errc::unknown_emitter: return "UnknownEmitter";
        case Errc::invalid_path: return "InvalidPath";
        case Errc::empty_chain: return "EmptyChain";
        case Errc::not_admissible: return "NotAdmissible";
        case Errc::missing_rate: return "MissingRate";
        case Errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the `Errc` codes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace wtrnet
