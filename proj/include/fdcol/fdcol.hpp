#pragma once

#include "fdcol/lattice.hpp"
#include "fdcol/site_config.hpp"
#include "fdcol/random_field.hpp"
#include "fdcol/hl1d.hpp"
#include "fdcol/stage_translation.hpp"
#include "fdcol/stage_isometry.hpp"
#include "fdcol/pipeline.hpp"
#include "fdcol/verify.hpp"
#include "fdcol/suites.hpp"
#include "fdcol/io.hpp"
