#pragma once

#include "gsvindex/complex_oracle.hpp"
#include "gsvindex/errors.hpp"
#include "gsvindex/index_core.hpp"
#include "gsvindex/linalg.hpp"
#include "gsvindex/local_engine.hpp"
#include "gsvindex/parser.hpp"
#include "gsvindex/polynomial.hpp"
#include "gsvindex/rational.hpp"
#include "gsvindex/residue.hpp"
