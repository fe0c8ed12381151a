#pragma once

#include "xlex/assoc.hpp"
#include "xlex/corpus.hpp"
#include "xlex/error.hpp"
#include "xlex/io.hpp"
#include "xlex/matcher.hpp"
#include "xlex/matrix.hpp"
#include "xlex/parallel.hpp"
#include "xlex/permutation.hpp"
#include "xlex/rng.hpp"
#include "xlex/similarity.hpp"
#include "xlex/simulation.hpp"
