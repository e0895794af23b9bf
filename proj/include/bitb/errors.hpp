#pragma once

#include <stdexcept>
#include <string>

namespace bitb {

// Base for every domain error the simulator raises. Callers that only need
// "did it work" can catch this; tests and the CLI match the concrete types.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// url_core
class MalformedUrl : public Error {
  public:
    using Error::Error;
};
class NotAHostname : public Error {
  public:
    using Error::Error;
};

// qr_indirection
class PayloadTooLarge : public Error {
  public:
    using Error::Error;
};
class ChecksumMismatch : public Error {
  public:
    using Error::Error;
};
class UnknownVersion : public Error {
  public:
    using Error::Error;
};
class MalformedEnvelope : public Error {
  public:
    using Error::Error;
};
class UnknownShortId : public Error {
  public:
    using Error::Error;
};

// page_model
class FixtureMissing : public Error {
  public:
    using Error::Error;
};
class MalformedSnapshot : public Error {
  public:
    using Error::Error;
};

// bitb_forgery
class GeneratorFailure : public Error {
  public:
    using Error::Error;
};
class DoubleForgery : public Error {
  public:
    using Error::Error;
};
class NoAddressBar : public Error {
  public:
    using Error::Error;
};
class NoProgressBar : public Error {
  public:
    using Error::Error;
};
class NoHeading : public Error {
  public:
    using Error::Error;
};
class NoSuchModal : public Error {
  public:
    using Error::Error;
};
class BothVisible : public Error {
  public:
    using Error::Error;
};

// attack_protocol / victim_agent
class EmptyField : public Error {
  public:
    using Error::Error;
};

// quishing_detector
class EmptyChain : public Error {
  public:
    using Error::Error;
};

// scenario_cli
class ConfigError : public Error {
  public:
    using Error::Error;
};
class ArtifactError : public Error {
  public:
    using Error::Error;
};

}  // namespace bitb
