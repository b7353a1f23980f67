#pragma once

#include "ptcure/distributions.hpp"
#include "ptcure/errors.hpp"
#include "ptcure/estimation.hpp"
#include "ptcure/kaplan_meier.hpp"
#include "ptcure/numerics.hpp"
#include "ptcure/portfolio.hpp"
#include "ptcure/promotion_model.hpp"
#include "ptcure/random.hpp"
#include "ptcure/simulation.hpp"
