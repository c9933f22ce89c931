#pragma once

#include <stdexcept>
#include <string>

namespace renyi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// core
struct NegativeEntry : Error { using Error::Error; };
struct SumOutOfTolerance : Error { using Error::Error; };
struct AlphaIsOne : Error { using Error::Error; };
struct UnsupportedCell : Error { using Error::Error; };

// sampling
struct MissingRng : Error { using Error::Error; };

// estimators
struct NonIntegerAlpha : Error { using Error::Error; };
struct DegreeMismatch : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };

// polyapprox
struct NoConvergence : Error { using Error::Error; };
struct MarkovBoundViolated : Error { using Error::Error; };

// hardness
struct InvalidDelta : Error { using Error::Error; };
struct BetaTooLarge : Error { using Error::Error; };
struct InvalidParameters : Error { using Error::Error; };
struct SupportMismatch : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };

// cli
struct ConfigError : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };

} // namespace renyi
