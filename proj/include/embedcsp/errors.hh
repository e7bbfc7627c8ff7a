#ifndef EMBEDCSP_ERRORS_HH
#define EMBEDCSP_ERRORS_HH 1

#include <stdexcept>
#include <string>

namespace embedcsp
{
    /// Raised when an operation's precondition is violated by its input.
    class InputError : public std::runtime_error
    {
        public:
            explicit InputError(const std::string & m) :
                std::runtime_error(m)
            {
            }
    };

    /// An exhaustive search or materialisation would exceed its configured budget.
    class BudgetExceeded : public std::runtime_error
    {
        public:
            explicit BudgetExceeded(const std::string & m) :
                std::runtime_error(m)
            {
            }
    };

    /// A construction could not produce an object meeting its certificate.
    class ConstructionFailure : public std::runtime_error
    {
        public:
            explicit ConstructionFailure(const std::string & m) :
                std::runtime_error(m)
            {
            }
    };
}

#endif
