#pragma once

#include "betadyn/basis.hpp"
#include "betadyn/content.hpp"
#include "betadyn/cylinders.hpp"
#include "betadyn/dimension.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/expansion.hpp"
#include "betadyn/functions.hpp"
#include "betadyn/hits.hpp"
#include "betadyn/monte_carlo.hpp"
#include "betadyn/real.hpp"
#include "betadyn/serialize.hpp"
#include "betadyn/solvers.hpp"
#include "betadyn/verify.hpp"
#include "betadyn/word.hpp"
