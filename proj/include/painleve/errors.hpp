#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace painleve {

// Failure carrying a machine-readable code and context payload.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message, nlohmann::json context = nlohmann::json::object())
        : std::runtime_error(message), code_(std::move(code)), context_(std::move(context)) {}

    const std::string& code() const { return code_; }
    const nlohmann::json& context() const { return context_; }

private:
    std::string code_;
    nlohmann::json context_;
};

}  // namespace painleve
