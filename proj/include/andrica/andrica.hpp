#pragma once

#include "andrica/prime_engine.hpp"
#include "andrica/gap_scanner.hpp"
#include "andrica/heuristics.hpp"
#include "andrica/datasets.hpp"
#include "andrica/commands.hpp"
