#pragma once

#include "cbd/coupling.hpp"
#include "cbd/cyclic.hpp"
#include "cbd/error.hpp"
#include "cbd/hidden_variable.hpp"
#include "cbd/io.hpp"
#include "cbd/lp.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"
