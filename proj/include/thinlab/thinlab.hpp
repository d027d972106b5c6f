#pragma once

#include "thinlab/error.hpp"
#include "thinlab/graph.hpp"
#include "thinlab/group.hpp"
#include "thinlab/group_spec.hpp"
#include "thinlab/harness.hpp"
#include "thinlab/json_io.hpp"
#include "thinlab/monodromy.hpp"
#include "thinlab/origami.hpp"
#include "thinlab/parallel.hpp"
#include "thinlab/pra.hpp"
#include "thinlab/spectra.hpp"
#include "thinlab/union_find.hpp"
