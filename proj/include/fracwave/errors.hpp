#ifndef FRACWAVE_ERRORS_HPP
#define FRACWAVE_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fwave {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// grid
struct OddSize : Error { using Error::Error; };
struct EmptyInterval : Error { using Error::Error; };
struct DimOutOfRange : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// expr
struct SyntaxError : Error {
  SyntaxError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};
struct UnknownIdentifier : Error { using Error::Error; };
struct UnboundVariable : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// order field
struct OrderOutOfRange : Error { using Error::Error; };
struct DeviationTooLarge : Error { using Error::Error; };

// operators
struct MemoryBudgetExceeded : Error {
  MemoryBudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error("dense operator needs " + std::to_string(required) +
              " bytes, budget is " + std::to_string(budget)),
        required_bytes(required), budget_bytes(budget) {}
  std::uint64_t required_bytes;
  std::uint64_t budget_bytes;
};
struct NotConstantOrder : Error { using Error::Error; };
struct DimUnsupported : Error { using Error::Error; };
struct NegativeM : Error { using Error::Error; };
struct NonpositiveFrequency : Error { using Error::Error; };

// stepping
struct BlowupDetected : Error { using Error::Error; };
struct PicardDiverged : Error { using Error::Error; };
struct CgStagnated : Error { using Error::Error; };
struct BracketInvalid : Error { using Error::Error; };

// seismic
struct GammaOutOfRange : Error { using Error::Error; };

// snapshot i/o
struct BadMagic : Error { using Error::Error; };
struct TruncatedFile : Error { using Error::Error; };

}  // namespace fwave

#endif
