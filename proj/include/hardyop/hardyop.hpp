#ifndef HARDYOP_HARDYOP_HPP
#define HARDYOP_HARDYOP_HPP

#include "hardyop/errors.hpp"
#include "hardyop/coeffs.hpp"
#include "hardyop/symbol.hpp"
#include "hardyop/dsl.hpp"
#include "hardyop/hardy.hpp"
#include "hardyop/closedform.hpp"
#include "hardyop/compop.hpp"
#include "hardyop/numrange.hpp"
#include "hardyop/analysis.hpp"

#endif  // HARDYOP_HARDYOP_HPP
