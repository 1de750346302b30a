#pragma once

#include "algebra.hpp"
#include "biquandle.hpp"
#include "brackets.hpp"
#include "freegraph.hpp"
#include "gauss.hpp"
#include "moves.hpp"
#include "parity.hpp"
