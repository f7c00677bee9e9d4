#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace unclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A series or tail criterion could not be met within the configured budget.
class NonConvergent : public Error {
 public:
  using Error::Error;
};

/// Every coefficient of the requested state underflowed to zero.
class DegenerateState : public Error {
 public:
  using Error::Error;
};

/// The angular-momentum moment series is not summable for this state.
class DivergentMoment : public Error {
 public:
  using Error::Error;
};

class ToleranceNotMet : public Error {
 public:
  using Error::Error;
};

/// No alpha with product below epsilon was found. Carries the best product seen.
class NotAttainable : public Error {
 public:
  NotAttainable(const std::string& what, double best_product, double best_alpha)
      : Error(what), best_product_(best_product), best_alpha_(best_alpha) {}

  double best_product() const noexcept { return best_product_; }
  double best_alpha() const noexcept { return best_alpha_; }

 private:
  double best_product_;
  double best_alpha_;
};

/// No sign change of product - target was found on the search interval.
class NoBracket : public Error {
 public:
  NoBracket(const std::string& what, double min_product, double max_product)
      : Error(what), min_product_(min_product), max_product_(max_product) {}

  double min_product() const noexcept { return min_product_; }
  double max_product() const noexcept { return max_product_; }

 private:
  double min_product_;
  double max_product_;
};

}  // namespace unclab
