#pragma once

#include <stdexcept>
#include <string>

namespace sadic {

// Search or orbit budgets ran out; the CLI maps this to its own exit code.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sadic
