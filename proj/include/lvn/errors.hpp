#pragma once

#include <stdexcept>
#include <string>

namespace lvn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public Error { public: using Error::Error; };
class NotPSD : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class BadLabel : public Error { public: using Error::Error; };
class MissingLabel : public Error { public: using Error::Error; };
class InvalidBasis : public Error { public: using Error::Error; };
class DegenerateSpectrum : public Error { public: using Error::Error; };
class NoSolution : public Error { public: using Error::Error; };
class NotOrthonormal : public Error { public: using Error::Error; };
class BadProbability : public Error { public: using Error::Error; };
class BadObservable : public Error { public: using Error::Error; };
class NullMatrix : public Error { public: using Error::Error; };
class InvalidState : public Error { public: using Error::Error; };
class InvalidPartition : public Error { public: using Error::Error; };

}  // namespace lvn
