#pragma once

#include "paulimix/channel.hpp"
#include "paulimix/commands.hpp"
#include "paulimix/divisibility.hpp"
#include "paulimix/errors.hpp"
#include "paulimix/quadrature.hpp"
#include "paulimix/rates.hpp"
#include "paulimix/region.hpp"
#include "paulimix/sampling.hpp"
