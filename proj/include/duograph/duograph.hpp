#pragma once

#include "duograph/analytic.hpp"
#include "duograph/branching.hpp"
#include "duograph/colored_tree.hpp"
#include "duograph/double_graph.hpp"
#include "duograph/errors.hpp"
#include "duograph/harness.hpp"
#include "duograph/joint.hpp"
#include "duograph/parallel.hpp"
#include "duograph/partition.hpp"
#include "duograph/phase_diagram.hpp"
#include "duograph/rng.hpp"
