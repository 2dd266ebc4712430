#pragma once

#include "wtrnet/error.hpp"
#include "wtrnet/field.hpp"
#include "wtrnet/graph.hpp"
#include "wtrnet/linalg.hpp"
#include "wtrnet/netcode.hpp"
#include "wtrnet/qkd_rate.hpp"
#include "wtrnet/optical.hpp"
#include "wtrnet/prototypes.hpp"
#include "wtrnet/resilience.hpp"
#include "wtrnet/planning.hpp"
#include "wtrnet/relay.hpp"
#include "wtrnet/io.hpp"
