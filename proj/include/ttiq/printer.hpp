#ifndef TTIQ_PRINTER_HPP
#define TTIQ_PRINTER_HPP

#include <string>

#include "ttiq/ast.hpp"

namespace ttiq {

// Canonical textual forms; parse(format(x)) yields a structurally equal AST.
std::string format_type(const TypePtr& t);
std::string format_term(const TermPtr& t);
std::string format_type(const Type& t);
std::string format_term(const Term& t);

}  // namespace ttiq

#endif
