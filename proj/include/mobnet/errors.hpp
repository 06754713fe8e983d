#pragma once

#include <stdexcept>
#include <string>

namespace mobnet {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that cannot be read at all: broken streams, missing columns,
// malformed schema or config files.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Readable input whose content violates a contract: unknown institution,
// impossible counts, missing years.
class DataError : public Error {
 public:
  using Error::Error;
};

// A field-of-study label that is not an ISCED-F 2013 broad field.
class UnclassifiedFieldError : public DataError {
 public:
  explicit UnclassifiedFieldError(const std::string& label)
      : DataError("unclassifiable field of study '" + label + "'"), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

// Inclusiveness index requested for a country that hosts no special-needs
// students in that year.
class CountryNoIncomingSnError : public DataError {
 public:
  explicit CountryNoIncomingSnError(const std::string& country)
      : DataError("country '" + country + "' has no incoming special-needs students") {}
};

// Inclusiveness index requested for a university with no incoming students.
class UniversityNoIncomingError : public DataError {
 public:
  explicit UniversityNoIncomingError(const std::string& institution)
      : DataError("institution '" + institution + "' has no incoming students") {}
};

// A window operation referenced a year with no network available.
class MissingYearError : public DataError {
 public:
  explicit MissingYearError(int year)
      : DataError("no data for year " + std::to_string(year)), year_(year) {}
  int year() const { return year_; }

 private:
  int year_;
};

}  // namespace mobnet
