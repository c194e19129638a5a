#pragma once

#include "memsim/circuit.hpp"
#include "memsim/classify.hpp"
#include "memsim/devices.hpp"
#include "memsim/drive.hpp"
#include "memsim/element.hpp"
#include "memsim/errors.hpp"
#include "memsim/integrator.hpp"
#include "memsim/loop.hpp"
#include "memsim/peaks.hpp"
#include "memsim/scaling.hpp"
#include "memsim/timeseries.hpp"
