#ifndef GSAMPLER_ERRORS_HPP
#define GSAMPLER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gsampler {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Graph / prior errors
struct InconsistentGraph : Error { using Error::Error; };
struct SpecMissing : Error { using Error::Error; };
struct CycleRejectionError : Error { using Error::Error; };

// Scoring errors
struct NumericalFailure : Error { using Error::Error; };
struct TooManyParents : Error { using Error::Error; };
struct SingularDesign : Error { using Error::Error; };
struct DegenerateData : Error { using Error::Error; };

// Diagnostics
struct InsufficientChains : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// Config / I/O
struct ParseError : Error {
    ParseError(int line_, int col_, const std::string& what_)
        : Error("parse error at line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ": " + what_),
          line(line_), col(col_) {}
    int line;
    int col;
};
struct ValidationError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct NonIntegerDiscrete : Error { using Error::Error; };
struct EmptyFile : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Multi-chain runner
struct ChainError : Error {
    ChainError(int chain_id_, const std::string& what_)
        : Error("chain " + std::to_string(chain_id_) + " failed: " + what_),
          chain_id(chain_id_) {}
    int chain_id;
};

} // namespace gsampler

#endif
