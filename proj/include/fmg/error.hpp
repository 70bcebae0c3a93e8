// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fmg {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Position-tagged SMILES syntax error.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

class UnsupportedFeature : public Error {
public:
  UnsupportedFeature(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

class ValenceError : public Error {
public:
  using Error::Error;
};

class EmptyMolecule : public Error {
public:
  using Error::Error;
};

class DegenerateMolecule : public Error {
public:
  using Error::Error;
};

class EmptyCandidates : public Error {
public:
  using Error::Error;
};

class UnknownClique : public Error {
public:
  using Error::Error;
};

class NoRemovableEdge : public Error {
public:
  using Error::Error;
};

class UncoveredHyperedge : public Error {
public:
  using Error::Error;
};

class DisconnectedSharing : public Error {
public:
  using Error::Error;
};

class OracleFailure : public Error {
public:
  using Error::Error;
};

class RefusalNotAllowed : public OracleFailure {
public:
  using OracleFailure::OracleFailure;
};

class ParseFailure : public OracleFailure {
public:
  using OracleFailure::OracleFailure;
};

class Transport : public OracleFailure {
public:
  using OracleFailure::OracleFailure;
};

class EmptyLog : public Error {
public:
  using Error::Error;
};

class DegenerateData : public Error {
public:
  using Error::Error;
};

}  // namespace fmg
