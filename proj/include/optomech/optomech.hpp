#pragma once

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/mate.hpp"
#include "optomech/mos.hpp"
#include "optomech/msi.hpp"
#include "optomech/noise.hpp"
#include "optomech/numerics.hpp"
#include "optomech/scattering.hpp"
