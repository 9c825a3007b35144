#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>

namespace grokforge {

// Base error for every contract violation raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: malformed files, out-of-range parameters, empty graphs.
// The CLI maps these to exit code 64.
class InputError : public Error {
public:
    using Error::Error;
};

using WarningSink = std::function<void(const std::string&)>;

// Process-wide destination for non-fatal diagnostics. Defaults to stderr.
inline WarningSink& warning_sink() {
    static WarningSink sink = [](const std::string& message) {
        std::cerr << "warning: " << message << '\n';
    };
    return sink;
}

inline void warn(const std::string& message) {
    if (warning_sink()) warning_sink()(message);
}

}  // namespace grokforge
