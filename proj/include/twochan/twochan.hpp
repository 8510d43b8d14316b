#pragma once

#include "twochan/errors.hpp"
#include "twochan/phys_core.hpp"
#include "twochan/quadrature.hpp"
#include "twochan/stationary.hpp"
#include "twochan/kernel.hpp"
#include "twochan/series.hpp"
#include "twochan/oracle.hpp"
#include "twochan/analysis.hpp"
#include "twochan/config.hpp"
#include "twochan/io.hpp"
#include "twochan/run.hpp"
