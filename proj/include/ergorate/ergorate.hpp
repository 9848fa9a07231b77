#ifndef ERGORATE_ERGORATE_HPP
#define ERGORATE_ERGORATE_HPP

#include "closedform.hpp"
#include "drift.hpp"
#include "eliminate.hpp"
#include "error.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "polycalc.hpp"
#include "rwmodel.hpp"
#include "specialmodels.hpp"
#include "spectrum.hpp"

#endif  // ERGORATE_ERGORATE_HPP
