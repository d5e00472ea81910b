#pragma once

#include "gridweld/design.hpp"
#include "gridweld/grid.hpp"
#include "gridweld/selection.hpp"
#include "gridweld/solver.hpp"
#include "gridweld/partition.hpp"
#include "gridweld/network.hpp"
#include "gridweld/dc_solver.hpp"
#include "gridweld/ir_report.hpp"
#include "gridweld/report.hpp"
#include "gridweld/generator.hpp"
#include "gridweld/run.hpp"
