#pragma once

#include "blockspec/clustering.hpp"
#include "blockspec/diagnostics.hpp"
#include "blockspec/embedding.hpp"
#include "blockspec/error.hpp"
#include "blockspec/evaluation.hpp"
#include "blockspec/harness.hpp"
#include "blockspec/io.hpp"
#include "blockspec/linalg.hpp"
#include "blockspec/model.hpp"
#include "blockspec/rng.hpp"
#include "blockspec/sampler.hpp"
#include "blockspec/selection.hpp"
#include "blockspec/types.hpp"
