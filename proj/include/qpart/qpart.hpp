// qpart.hpp - umbrella include
#pragma once

#include "qpart/bitstring.hpp"
#include "qpart/coarsen.hpp"
#include "qpart/encoding.hpp"
#include "qpart/errors.hpp"
#include "qpart/fm.hpp"
#include "qpart/graph.hpp"
#include "qpart/iterative.hpp"
#include "qpart/lanczos.hpp"
#include "qpart/metis_io.hpp"
#include "qpart/ordering.hpp"
#include "qpart/parallel.hpp"
#include "qpart/params.hpp"
#include "qpart/rng.hpp"
#include "qpart/statevector.hpp"
