#pragma once

#include "pslet/dni.hpp"
#include "pslet/errors.hpp"
#include "pslet/pade.hpp"
#include "pslet/polynomial.hpp"
#include "pslet/potential.hpp"
#include "pslet/riccati.hpp"
#include "pslet/shift_frame.hpp"
