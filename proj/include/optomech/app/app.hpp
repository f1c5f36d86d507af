#pragma once

#include "optomech/app/compare.hpp"
#include "optomech/app/config.hpp"
#include "optomech/app/dataset.hpp"
#include "optomech/app/figures.hpp"
#include "optomech/app/scan.hpp"
#include "optomech/app/targets.hpp"
#include "optomech/app/tolerances.hpp"
#include "optomech/app/validate.hpp"
