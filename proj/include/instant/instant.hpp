#pragma once

#include "complexity.hpp"
#include "cycle.hpp"
#include "errors.hpp"
#include "machine.hpp"
#include "machine_io.hpp"
#include "packing.hpp"
#include "random_impl.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "schrodinger.hpp"
#include "spectrum.hpp"
