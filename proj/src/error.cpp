#include "skewq/error.hpp"

#include <sstream>

namespace skewq {

namespace {

std::string with_value(const std::string& message, double value)
{
    std::ostringstream os;
    os.precision(17);
    os << message << " (" << value << ")";
    return os.str();
}

} // namespace

Error::Error(std::string name, const std::string& message)
    : std::runtime_error(name + ": " + message), name_(std::move(name))
{
}

DimensionMismatch::DimensionMismatch(const std::string& message)
    : Error("DimensionMismatch", message)
{
}

NotPositiveSemidefinite::NotPositiveSemidefinite(double min_eigenvalue, const std::string& context)
    : Error("NotPositiveSemidefinite", with_value(context + ": minimum eigenvalue", min_eigenvalue)),
      min_eigenvalue_(min_eigenvalue)
{
}

NotASkewMap::NotASkewMap(double value, const std::string& message)
    : Error("NotASkewMap", with_value(message, value)), value_(value)
{
}

AtomMismatch::AtomMismatch(const std::string& message) : Error("AtomMismatch", message) {}

AtomSetMismatch::AtomSetMismatch(const std::string& message) : Error("AtomSetMismatch", message) {}

NotAContraction::NotAContraction(double norm)
    : Error("NotAContraction", with_value("spectral norm exceeds 1", norm)), norm_(norm)
{
}

NotStable::NotStable(double spectral_abscissa)
    : Error("NotStable", with_value("drift spectrum not in the open left half-plane, abscissa", spectral_abscissa)),
      abscissa_(spectral_abscissa)
{
}

UnsupportedQuadrature::UnsupportedQuadrature(const std::string& message)
    : Error("UnsupportedQuadrature", message)
{
}

InconsistentDirection::InconsistentDirection(const std::string& message)
    : Error("InconsistentDirection", message)
{
}

ParseError::ParseError(const std::string& message) : Error("ParseError", message) {}

ValidationError::ValidationError(const std::string& message) : Error("ValidationError", message) {}

} // namespace skewq
