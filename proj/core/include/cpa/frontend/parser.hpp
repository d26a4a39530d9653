#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cpa/frontend/ast.hpp"

namespace cpa::frontend {

/// Lexical or syntactic error; the message is prefixed with `line:column`.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Well-formed syntax that violates a static rule: undeclared variable,
/// nonlinear term, misplaced nondet(), recursion, missing main.
class SemanticError : public std::runtime_error {
 public:
  SemanticError(SourcePos pos, const std::string& message);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Parses MiniC text into a syntax tree. Only syntax is checked here; the
/// static rules run during lowering (see `parse` in cfa.hpp).
TranslationUnit parse_translation_unit(std::string_view source);

}  // namespace cpa::frontend
