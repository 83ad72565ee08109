#pragma once

#include "ptri/distribution.hpp"
#include "ptri/errors.hpp"
#include "ptri/exact.hpp"
#include "ptri/json_io.hpp"
#include "ptri/matchup.hpp"
#include "ptri/oracle.hpp"
#include "ptri/parity.hpp"
#include "ptri/polynomial.hpp"
#include "ptri/verify.hpp"
