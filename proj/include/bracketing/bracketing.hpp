#pragma once

#include "bracketing/geometry.hpp"
#include "bracketing/sequences.hpp"
#include "bracketing/constructions.hpp"
#include "bracketing/verifier.hpp"
#include "bracketing/report.hpp"
