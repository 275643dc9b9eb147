#pragma once

#include "lyndon/counting.hpp"
#include "lyndon/factorize.hpp"
#include "lyndon/runs_blocks.hpp"
#include "lyndon/sampling.hpp"
#include "lyndon/stats.hpp"
#include "lyndon/word.hpp"
