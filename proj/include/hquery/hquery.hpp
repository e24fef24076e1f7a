#ifndef HQUERY_HQUERY_HPP
#define HQUERY_HQUERY_HPP

#include "value.hpp"
#include "lexer.hpp"
#include "ast.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "compiler.hpp"
#include "interpreter.hpp"
#include "worlds/hanoi.hpp"
#include "worlds/gridworld.hpp"
#include "worlds/particles.hpp"
#include "worlds/grid_formatter.hpp"

#endif
