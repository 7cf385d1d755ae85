// nhbath.hpp — umbrella header
#pragma once

#include "nhbath/boundstates.hpp"
#include "nhbath/config.hpp"
#include "nhbath/core.hpp"
#include "nhbath/csv.hpp"
#include "nhbath/disorder.hpp"
#include "nhbath/dressed.hpp"
#include "nhbath/dynamics.hpp"
#include "nhbath/experiments.hpp"
#include "nhbath/model.hpp"
#include "nhbath/spectral.hpp"
#include "nhbath/version.hpp"
