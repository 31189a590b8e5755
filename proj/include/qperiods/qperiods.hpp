#pragma once

// Everything except the command-line layer, which needs nlohmann/json.
#include <qperiods/core.hpp>
#include <qperiods/qforms.hpp>
#include <qperiods/lattice.hpp>
#include <qperiods/group.hpp>
#include <qperiods/pmap.hpp>
#include <qperiods/hypergeo.hpp>
#include <qperiods/geom.hpp>
#include <qperiods/verify.hpp>
