// errors.hpp — exception taxonomy for machine validation and numerics

#pragma once

#include <stdexcept>
#include <string>

namespace qmemc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NegativeProbability : public Error { public: using Error::Error; };
class RowSumMismatch : public Error { public: using Error::Error; };
class NotIrreducible : public Error { public: using Error::Error; };
class DuplicateEdge : public Error { public: using Error::Error; };
class NotPredictive : public Error { public: using Error::Error; };
class NotNormalized : public Error { public: using Error::Error; };
class NoConvergence : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class EpsilonOutOfRange : public Error { public: using Error::Error; };
class HorizonInconclusive : public Error { public: using Error::Error; };
class ParameterOutOfRange : public Error { public: using Error::Error; };
class NotMinimal : public Error { public: using Error::Error; };
class AlphabetTooLarge : public Error { public: using Error::Error; };
class NoSuccessfulRecords : public Error { public: using Error::Error; };
class NoCompressiveImplementation : public Error { public: using Error::Error; };

} // namespace qmemc
