#ifndef PURKIT_ERROR_HPP
#define PURKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace purkit {

// Engine error with a stable machine-readable code ("zero-divisor", "pole",
// "shape", "not-delta-regular", "order-bound", ...) plus a human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

} // namespace purkit

#endif
